#include "sociallearn/scenario.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace sociallearn {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct KeyedLine {
  std::string value;
  int line;
};

double parse_double(const std::string& file, int line, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(file, line, "key '" + key + "': cannot parse number '" + value + "'");
  }
}

long parse_long(const std::string& file, int line, const std::string& key,
                const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(file, line, "key '" + key + "': cannot parse integer '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& file, int line, const std::string& key,
                        const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ScenarioError(file, line, "key '" + key + "': cannot parse integer '" + value + "'");
  }
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).string();
}

}  // namespace

const char* to_string(OutputKind kind) {
  switch (kind) {
    case OutputKind::trace: return "trace";
    case OutputKind::steady_state: return "steady-state";
    case OutputKind::monte_carlo: return "monte-carlo";
    case OutputKind::comparison: return "comparison";
  }
  return "unknown";
}

ScenarioError::ScenarioError(const std::string& file_, int line_, const std::string& what_)
    : std::runtime_error(line_ > 0 ? file_ + ":" + std::to_string(line_) + ": " + what_
                                   : file_ + ": " + what_),
      file(file_),
      line(line_) {}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

ModelParams Scenario::params() const {
  const int n = graph().n();
  Eigen::VectorXd tau_vec(n);
  if (tau.size() == 1) {
    tau_vec.setConstant(tau[0]);
  } else {
    for (int i = 0; i < n; ++i) tau_vec(i) = tau[static_cast<std::size_t>(i)];
  }
  return ModelParams(n, sigma, tau_vec);
}

SocialGraph Scenario::graph() const {
  if (graph_kind == GraphKind::complete) return SocialGraph::complete(graph_n);
  std::ifstream in(resolve(base_dir, edges_file));
  if (!in) throw ScenarioError(edges_file, 0, "cannot open edges file");
  std::vector<std::pair<int, int>> edges;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 2) {
      throw ScenarioError(edges_file, line_no, "expected two indices per edge line");
    }
    const int i = static_cast<int>(parse_long(edges_file, line_no, "edge", toks[0]));
    const int j = static_cast<int>(parse_long(edges_file, line_no, "edge", toks[1]));
    edges.emplace_back(i, j);
    max_index = std::max({max_index, i, j});
  }
  if (edges.empty()) throw ScenarioError(edges_file, 0, "edges file has no edges");
  return SocialGraph::from_edges(max_index + 1, edges);
}

LinearRule Scenario::resolved_rule() const {
  const int n = graph().n();
  if (rule_kind == RuleKind::uniform) {
    return uniform_clique_rule(params(), rule_alpha);
  }
  if (rule_kind == RuleKind::file) {
    std::ifstream in(resolve(base_dir, rule_file));
    if (!in) throw ScenarioError(rule_file, 0, "cannot open rule file");
    LinearRule rule;
    rule.a.resize(n);
    rule.p.resize(n, n);
    std::string line;
    int line_no = 0;
    int row = -1;  // -1: expecting a; 0..n-1: expecting p rows
    while (std::getline(in, line) && row < n) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const auto toks = split_ws(line);
      if (toks.empty()) continue;
      if (static_cast<int>(toks.size()) != n) {
        throw ScenarioError(rule_file, line_no,
                            "expected " + std::to_string(n) + " values per line");
      }
      for (int k = 0; k < n; ++k) {
        const double v = parse_double(rule_file, line_no, "rule", toks[static_cast<std::size_t>(k)]);
        if (row < 0) {
          rule.a(k) = v;
        } else {
          rule.p(row, k) = v;
        }
      }
      ++row;
    }
    if (row != n) throw ScenarioError(rule_file, 0, "rule file ended before " +
                                                        std::to_string(n + 1) + " data lines");
    return rule;
  }
  throw ScenarioError("scenario", 0, "no rule specified for fixed model");
}

bool Scenario::operator==(const Scenario& other) const {
  return name == other.name && graph_kind == other.graph_kind && graph_n == other.graph_n &&
         edges_file == other.edges_file && sigma == other.sigma && tau == other.tau &&
         model == other.model && rule_kind == other.rule_kind &&
         rule_alpha == other.rule_alpha && rule_file == other.rule_file &&
         horizon == other.horizon && tolerance == other.tolerance && seed == other.seed &&
         trajectories == other.trajectories && outputs == other.outputs;
}

Scenario load_scenario_text(const std::string& text, const std::string& base_dir,
                            const std::string& label) {
  std::map<std::string, KeyedLine> keys;
  {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw ScenarioError(label, line_no, "expected 'key = value'");
      }
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) throw ScenarioError(label, line_no, "empty key");
      if (keys.count(key)) throw ScenarioError(label, line_no, "duplicate key '" + key + "'");
      keys[key] = {value, line_no};
    }
  }

  static const std::set<std::string> known = {
      "name",       "graph.kind", "graph.n",    "graph.edges_file", "params.sigma",
      "params.tau", "model.kind", "rule.kind",  "rule.alpha",       "rule.file",
      "horizon",    "tolerance",  "seed",       "trajectories",     "outputs"};
  for (const auto& [key, kl] : keys) {
    if (!known.count(key)) throw ScenarioError(label, kl.line, "unknown key '" + key + "'");
  }

  auto require = [&](const std::string& key) -> const KeyedLine& {
    const auto it = keys.find(key);
    if (it == keys.end()) throw ScenarioError(label, 0, "missing required key '" + key + "'");
    return it->second;
  };
  auto optional = [&](const std::string& key) -> const KeyedLine* {
    const auto it = keys.find(key);
    return it == keys.end() ? nullptr : &it->second;
  };

  Scenario s;
  s.base_dir = base_dir;
  s.name = require("name").value;
  if (s.name.empty()) throw ScenarioError(label, require("name").line, "name must be non-empty");

  {
    const KeyedLine& kind = require("graph.kind");
    if (kind.value == "complete") {
      s.graph_kind = GraphKind::complete;
      const KeyedLine& n = require("graph.n");
      s.graph_n = static_cast<int>(parse_long(label, n.line, "graph.n", n.value));
      if (s.graph_n < 1) throw ScenarioError(label, n.line, "graph.n must be >= 1");
      if (optional("graph.edges_file")) {
        throw ScenarioError(label, optional("graph.edges_file")->line,
                            "graph.edges_file conflicts with graph.kind = complete");
      }
    } else if (kind.value == "edges") {
      s.graph_kind = GraphKind::edges;
      s.edges_file = require("graph.edges_file").value;
      if (optional("graph.n")) {
        throw ScenarioError(label, optional("graph.n")->line,
                            "graph.n conflicts with graph.kind = edges (size comes from the file)");
      }
    } else {
      throw ScenarioError(label, kind.line, "graph.kind must be 'complete' or 'edges'");
    }
  }

  {
    const KeyedLine& sig = require("params.sigma");
    s.sigma = parse_double(label, sig.line, "params.sigma", sig.value);
    const KeyedLine& tau = require("params.tau");
    for (const auto& tok : split_ws(tau.value)) {
      s.tau.push_back(parse_double(label, tau.line, "params.tau", tok));
    }
    if (s.tau.empty()) throw ScenarioError(label, tau.line, "params.tau must list values");
  }

  {
    const KeyedLine& kind = require("model.kind");
    if (kind.value == "fixed") {
      s.model = DynamicsModel::fixed;
    } else if (kind.value == "best") {
      s.model = DynamicsModel::best;
    } else if (kind.value == "penultimate") {
      s.model = DynamicsModel::penultimate;
    } else {
      throw ScenarioError(label, kind.line, "model.kind must be fixed, best, or penultimate");
    }
  }

  if (s.model == DynamicsModel::fixed) {
    const KeyedLine& kind = require("rule.kind");
    if (kind.value == "uniform") {
      s.rule_kind = RuleKind::uniform;
      const KeyedLine& alpha = require("rule.alpha");
      s.rule_alpha = parse_double(label, alpha.line, "rule.alpha", alpha.value);
    } else if (kind.value == "file") {
      s.rule_kind = RuleKind::file;
      s.rule_file = require("rule.file").value;
    } else {
      throw ScenarioError(label, kind.line, "rule.kind must be 'uniform' or 'file'");
    }
  } else if (optional("rule.kind") || optional("rule.alpha") || optional("rule.file")) {
    throw ScenarioError(label, 0, "rule.* keys are only valid for model.kind = fixed");
  }

  if (const KeyedLine* kl = optional("horizon")) {
    s.horizon = static_cast<int>(parse_long(label, kl->line, "horizon", kl->value));
    if (s.horizon < 1) throw ScenarioError(label, kl->line, "horizon must be >= 1");
  }
  if (const KeyedLine* kl = optional("tolerance")) {
    s.tolerance = parse_double(label, kl->line, "tolerance", kl->value);
    if (!(s.tolerance > 0.0)) throw ScenarioError(label, kl->line, "tolerance must be > 0");
  }
  if (const KeyedLine* kl = optional("seed")) {
    s.seed = parse_u64(label, kl->line, "seed", kl->value);
  }
  if (const KeyedLine* kl = optional("trajectories")) {
    s.trajectories = parse_long(label, kl->line, "trajectories", kl->value);
    if (s.trajectories < 1) throw ScenarioError(label, kl->line, "trajectories must be >= 1");
  }

  {
    const KeyedLine& outs = require("outputs");
    for (const auto& tok : split_ws(outs.value)) {
      if (tok == "trace") {
        s.outputs.push_back(OutputKind::trace);
      } else if (tok == "steady-state") {
        s.outputs.push_back(OutputKind::steady_state);
      } else if (tok == "monte-carlo") {
        s.outputs.push_back(OutputKind::monte_carlo);
      } else if (tok == "comparison") {
        s.outputs.push_back(OutputKind::comparison);
      } else {
        throw ScenarioError(label, outs.line, "unknown output '" + tok + "'");
      }
    }
    if (s.outputs.empty()) throw ScenarioError(label, outs.line, "outputs must be non-empty");
  }

  // Resolve everything once so load = validate: graph, params, and (for
  // fixed) the rule against the graph.
  try {
    const SocialGraph graph = s.graph();
    if (s.tau.size() != 1 && static_cast<int>(s.tau.size()) != graph.n()) {
      throw ScenarioError(label, require("params.tau").line,
                          "params.tau must list 1 or n values");
    }
    const ModelParams params = s.params();
    (void)params;
    if (s.model == DynamicsModel::fixed) {
      const LinearRule rule = s.resolved_rule();
      const RuleValidation check = validate_rule(rule, graph);
      if (!check.valid) {
        throw ScenarioError(label, 0, "rule fails validation: " + check.message);
      }
    }
    if (s.model == DynamicsModel::penultimate && !graph.is_complete()) {
      throw ScenarioError(label, 0, "penultimate model requires a complete graph");
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(label, 0, e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, 0, "cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return load_scenario_text(text.str(), fs::path(path).parent_path().string(), path);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "name = " << s.name << "\n";
  if (s.graph_kind == GraphKind::complete) {
    out << "graph.kind = complete\n";
    out << "graph.n = " << s.graph_n << "\n";
  } else {
    out << "graph.kind = edges\n";
    out << "graph.edges_file = " << s.edges_file << "\n";
  }
  out << "params.sigma = " << format_double(s.sigma) << "\n";
  out << "params.tau =";
  for (double t : s.tau) out << " " << format_double(t);
  out << "\n";
  out << "model.kind = " << to_string(s.model) << "\n";
  if (s.model == DynamicsModel::fixed) {
    if (s.rule_kind == RuleKind::uniform) {
      out << "rule.kind = uniform\n";
      out << "rule.alpha = " << format_double(s.rule_alpha) << "\n";
    } else {
      out << "rule.kind = file\n";
      out << "rule.file = " << s.rule_file << "\n";
    }
  }
  out << "horizon = " << s.horizon << "\n";
  out << "tolerance = " << format_double(s.tolerance) << "\n";
  out << "seed = " << s.seed << "\n";
  out << "trajectories = " << s.trajectories << "\n";
  out << "outputs =";
  for (OutputKind kind : s.outputs) out << " " << to_string(kind);
  out << "\n";
  return out.str();
}

}  // namespace sociallearn
