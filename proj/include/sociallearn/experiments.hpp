#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sociallearn/scenario.hpp"

namespace sociallearn {

inline constexpr const char* kToolVersion = "sociallearn 0.1.0";

// Exit-code contract shared with the CLI: 0 success, 2 validation failure,
// 3 non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;

struct RunOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::optional<double> tol_override;
  long max_iters = 200000;
  bool quiet = false;
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> files;  // paths written
  std::string summary_json;        // contents of <name>_summary.json
  std::string message;             // diagnostic on failure
};

/// Executes a scenario: writes <name>_trace.csv, <name>_summary.json and,
/// when requested, <name>_mc.csv / <name>_comparison.csv under out_dir.
/// Reruns with an identical scenario produce byte-identical files.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

/// Loads the file first; parse or validation failures become exit code 2
/// with a line-anchored message.
RunResult run_scenario_file(const std::string& path, const RunOptions& options);

struct SweepRow {
  double value = 0.0;
  long n = 0;
  double beta_star = 0.0;
  double c_ii_min = 0.0;
  double c_ii_max = 0.0;
  double c_ii_mean = 0.0;
  double gap = 0.0;  // max_i (C_ii - sigma^2 tau_i^2/(sigma^2 + tau_i^2))
  long iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

struct SweepResult {
  int exit_code = kExitOk;
  std::string csv_path;
  std::vector<SweepRow> rows;
  std::string message;
};

/// Steady-state summaries along a one-parameter grid. Sweepable parameters:
/// rule.alpha (fixed/uniform scenarios), graph.n (complete graphs with
/// broadcast tau), params.sigma, params.tau (broadcast). Anything structural
/// beyond that is a validation failure.
SweepResult run_sweep(const Scenario& scenario, const std::string& param,
                      const std::vector<double>& values, const RunOptions& options);

struct ReproduceItem {
  std::string id;
  double expected = 0.0;
  double achieved = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

/// Recomputes the published reference figures (steady-state variances at
/// n = 2, the large-n limits, perfect-learning equalities, contraction
/// bounds, cubic cross-checks) and compares each against its quoted value.
std::vector<ReproduceItem> reproduce_published_values();

}  // namespace sociallearn
