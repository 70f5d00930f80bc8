#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sociallearn/model.hpp"
#include "sociallearn/monte_carlo.hpp"
#include "sociallearn/steady_state.hpp"

namespace sociallearn {

// Scenario files are flat UTF-8 text, one `key = value` per line, '#'
// comments. Dotted keys; floats round-trip via 17 significant digits.
//
//   name = best-n2
//   graph.kind = complete            # complete | edges
//   graph.n = 2                      # complete only
//   graph.edges_file = g.edges       # edges only; lines "i j", 0-indexed,
//                                    # self-loops required
//   params.sigma = 1
//   params.tau = 1                   # single value broadcasts; or n values
//   model.kind = best                # fixed | best | penultimate
//   rule.kind = uniform              # fixed only: uniform | file
//   rule.alpha = 0.60352             # uniform rule weight on the measurement
//   rule.file = rule.txt             # line 1: a (n values); then n rows of p
//   horizon = 100
//   tolerance = 1e-12
//   seed = 42
//   trajectories = 100000
//   outputs = trace steady-state     # trace | steady-state | monte-carlo | comparison

enum class GraphKind { complete, edges };
enum class RuleKind { none, uniform, file };
enum class OutputKind { trace, steady_state, monte_carlo, comparison };

const char* to_string(OutputKind kind);

/// Parse/validation failure anchored to a config line.
struct ScenarioError : std::runtime_error {
  ScenarioError(const std::string& file, int line, const std::string& what);
  std::string file;
  int line;  // 0 when not line-specific
};

struct Scenario {
  std::string name;

  GraphKind graph_kind = GraphKind::complete;
  int graph_n = 0;
  std::string edges_file;  // as written in the config

  double sigma = 1.0;
  std::vector<double> tau;  // length 1 (broadcast) or n

  DynamicsModel model = DynamicsModel::best;
  RuleKind rule_kind = RuleKind::none;
  double rule_alpha = 0.0;
  std::string rule_file;  // as written in the config

  int horizon = 100;
  double tolerance = 1e-12;
  std::uint64_t seed = 12345;
  long trajectories = 100000;
  std::vector<OutputKind> outputs;

  std::string base_dir;  // directory scenario-relative paths resolve against

  // Resolved at load time.
  ModelParams params() const;
  SocialGraph graph() const;
  LinearRule resolved_rule() const;  // fixed model only

  bool operator==(const Scenario& other) const;
};

/// Loads and validates a scenario file. Referenced files must exist; a fixed
/// rule must pass validate_rule. Throws ScenarioError with file:line anchors.
Scenario load_scenario(const std::string& path);

/// Same, from text already in memory; `base_dir` anchors relative paths and
/// `label` names the source in error messages.
Scenario load_scenario_text(const std::string& text, const std::string& base_dir,
                            const std::string& label = "<string>");

/// Canonical serialization: fixed key order, every field explicit, floats at
/// 17 significant digits. load(serialize(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// 17-significant-digit float formatting shared by every emitter.
std::string format_double(double value);

}  // namespace sociallearn
