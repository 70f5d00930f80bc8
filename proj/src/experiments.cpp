#include "sociallearn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sociallearn/dynamics.hpp"
#include "sociallearn/estimation.hpp"
#include "sociallearn/monte_carlo.hpp"
#include "sociallearn/steady_state.hpp"
#include "sociallearn/tolerances.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sociallearn {

namespace {

double max_offdiag(const Eigen::MatrixXd& m) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j) v = std::max(v, std::abs(m(i, j)));
    }
  }
  return v;
}

/// Analytic covariance series C(0..horizon) for the scenario's model.
std::vector<Eigen::MatrixXd> analytic_covariances(const ModelParams& params,
                                                  const SocialGraph& graph, DynamicsModel model,
                                                  const std::optional<LinearRule>& rule,
                                                  int horizon) {
  std::vector<Eigen::MatrixXd> series;
  series.reserve(horizon + 1);
  CovarianceState state = CovarianceState::initial_from_measurements(params);
  series.push_back(state.matrix());
  switch (model) {
    case DynamicsModel::fixed: {
      for (int t = 0; t < horizon; ++t) {
        state = covariance_step(state, *rule, params);
        series.push_back(state.matrix());
      }
      break;
    }
    case DynamicsModel::best: {
      for (int t = 0; t < horizon; ++t) {
        BestResponseStep step = best_response_step(state, graph, params);
        state = std::move(step.next);
        series.push_back(state.matrix());
      }
      break;
    }
    case DynamicsModel::penultimate: {
      PenultimateState pstate = penultimate_init(state);
      for (int t = 0; t < horizon; ++t) {
        series.push_back(penultimate_covariance(pstate, params));
        pstate = penultimate_step(pstate, params).state;
      }
      break;
    }
  }
  return series;
}

struct SteadyOutcome {
  SteadyStateReport report;
  bool applicable = true;
};

SteadyOutcome steady_state_for(const ModelParams& params, const SocialGraph& graph,
                               DynamicsModel model, const std::optional<LinearRule>& rule,
                               double tolerance, long max_iters) {
  SteadyOutcome outcome;
  const CovarianceState c0 = CovarianceState::initial_from_measurements(params);
  switch (model) {
    case DynamicsModel::fixed: {
      outcome.report = fixed_response_steady_state(*rule, params, c0, max_iters, tolerance);
      break;
    }
    case DynamicsModel::best: {
      if (graph.is_complete()) {
        outcome.report = best_response_steady_state(params, 0.0, max_iters);
        break;
      }
      // General graphs: run the engine to a matrix fixed point if one shows
      // up; no convergence guarantee is claimed.
      SteadyStateReport report;
      report.method = SteadyStateMethod::lyapunov;
      CovarianceState state = c0;
      for (long it = 0; it < max_iters; ++it) {
        BestResponseStep step = best_response_step(state, graph, params);
        const double diff = (step.next.matrix() - state.matrix()).cwiseAbs().maxCoeff();
        state = std::move(step.next);
        if (diff < tolerance) {
          report.converged = true;
          report.iterations = it + 1;
          break;
        }
      }
      if (!report.converged) report.iterations = max_iters;
      report.c_star = state.matrix();
      report.beta_star = state.beta();
      if (report.converged) {
        const BestResponseStep once = best_response_step(state, graph, params);
        report.residual = (once.next.matrix() - state.matrix()).cwiseAbs().maxCoeff();
      }
      outcome.report = std::move(report);
      break;
    }
    case DynamicsModel::penultimate: {
      SteadyStateReport report;
      report.method = SteadyStateMethod::iteration;
      PenultimateState state = penultimate_init(c0);
      PenultimateState prev = state;
      for (long it = 0; it < max_iters; ++it) {
        prev = state;
        PenultimateStep step = penultimate_step(state, params);
        state = std::move(step.state);
        const double diff = std::abs(state.pool_variance - prev.pool_variance);
        if (it > 0 && diff < std::min(tolerance, tol::kBetaIteration)) {
          report.converged = true;
          report.iterations = it + 1;
          report.residual = diff;
          break;
        }
      }
      if (!report.converged) report.iterations = max_iters;
      report.c_star = penultimate_covariance(state, params);
      report.beta_star = CovarianceState(report.c_star, 0).beta();
      outcome.report = std::move(report);
      break;
    }
  }
  return outcome;
}

std::string write_file(const std::string& out_dir, const std::string& filename,
                       const std::string& contents) {
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / filename).string();
  std::ofstream out(path, std::ios::binary);
  out << contents;
  return path;
}

json c_ii_json(const Eigen::MatrixXd& c) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < c.rows(); ++i) arr.push_back(c(i, i));
  return arr;
}

double learning_gap(const Eigen::MatrixXd& c, const ModelParams& params) {
  double gap = -std::numeric_limits<double>::infinity();
  const double sigma_sq = params.sigma() * params.sigma();
  for (int i = 0; i < params.n(); ++i) {
    const double tau_sq = params.tau()(i) * params.tau()(i);
    const double target = sigma_sq * tau_sq / (sigma_sq + tau_sq);
    gap = std::max(gap, c(i, i) - target);
  }
  return gap;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  RunResult result;
  try {
    Scenario s = scenario;
    if (options.seed_override) s.seed = *options.seed_override;
    if (options.tol_override) s.tolerance = *options.tol_override;

    const SocialGraph graph = s.graph();
    const ModelParams params = s.params();
    std::optional<LinearRule> rule;
    if (s.model == DynamicsModel::fixed) {
      rule = s.resolved_rule();
      const RuleValidation check = validate_rule(*rule, graph);
      if (!check.valid) {
        result.exit_code = kExitValidation;
        result.message = "rule fails validation: " + check.message;
        return result;
      }
    }

    const auto wants = [&](OutputKind kind) {
      return std::find(s.outputs.begin(), s.outputs.end(), kind) != s.outputs.end();
    };

    const std::vector<Eigen::MatrixXd> series =
        analytic_covariances(params, graph, s.model, rule, s.horizon);
    std::vector<double> betas;
    betas.reserve(series.size());
    for (const auto& c : series) betas.push_back(CovarianceState(c, 0).beta());

    json summary;
    summary["name"] = s.name;
    summary["version"] = kToolVersion;
    summary["seed"] = s.seed;
    summary["model"] = to_string(s.model);
    summary["n"] = params.n();
    summary["sigma"] = params.sigma();
    {
      json tau = json::array();
      for (int i = 0; i < params.n(); ++i) tau.push_back(params.tau()(i));
      summary["tau"] = tau;
    }
    summary["trace"] = {
        {"rounds", s.horizon},
        {"final_beta", betas.back()},
        {"final_c_ii", c_ii_json(series.back())},
        {"final_max_offdiag", max_offdiag(series.back())},
    };

    if (wants(OutputKind::trace)) {
      std::ostringstream csv;
      csv << "# seed=" << s.seed << " version=" << kToolVersion << "\n";
      csv << "t,beta";
      for (int i = 0; i < params.n(); ++i) csv << ",c_ii_" << i;
      csv << ",max_offdiag\n";
      for (std::size_t t = 0; t < series.size(); ++t) {
        csv << t << "," << format_double(betas[t]);
        for (int i = 0; i < params.n(); ++i) csv << "," << format_double(series[t](i, i));
        csv << "," << format_double(max_offdiag(series[t])) << "\n";
      }
      result.files.push_back(write_file(options.out_dir, s.name + "_trace.csv", csv.str()));
    }

    if (wants(OutputKind::steady_state)) {
      const SteadyOutcome outcome =
          steady_state_for(params, graph, s.model, rule, s.tolerance, options.max_iters);
      const SteadyStateReport& rep = outcome.report;
      summary["steady_state"] = {
          {"method", to_string(rep.method)},
          {"converged", rep.converged},
          {"beta_star", rep.beta_star},
          {"c_ii", c_ii_json(rep.c_star)},
          {"iterations", rep.iterations},
          {"rate_estimate", rep.rate_estimate},
          {"residual", rep.residual},
          {"start_independence", rep.start_independence},
          {"gap", learning_gap(rep.c_star, params)},
      };
      if (!rep.warning.empty()) summary["steady_state"]["warning"] = rep.warning;
      if (!rep.converged) {
        result.exit_code = kExitNonConvergence;
        result.message = "steady-state iteration did not converge within max iterations";
      }
    }

    if (wants(OutputKind::monte_carlo)) {
      SimulationConfig config{params, graph, s.model};
      config.rule = rule;
      config.horizon = s.horizon;
      config.trajectories = s.trajectories;
      config.seed = s.seed;
      const SimulationResult sim = simulate(config);
      std::ostringstream csv;
      csv << "# seed=" << s.seed << " version=" << kToolVersion << "\n";
      csv << "t,i,j,analytic,empirical,stderr,z\n";
      long checked = 0;
      long within = 0;
      double max_abs_z = 0.0;
      for (const auto& rm : sim.rounds) {
        const Eigen::MatrixXd& analytic = series[rm.t];
        for (int i = 0; i < params.n(); ++i) {
          for (int j = i; j < params.n(); ++j) {
            const double emp = rm.moments.cov_error(i, j);
            const double se = rm.moments.cov_stderr(i, j);
            const double z = se > 0.0 ? (emp - analytic(i, j)) / se : 0.0;
            if (rm.t > 0) {
              ++checked;
              if (std::abs(z) <= 3.0) ++within;
              max_abs_z = std::max(max_abs_z, std::abs(z));
            }
            csv << rm.t << "," << i << "," << j << "," << format_double(analytic(i, j)) << ","
                << format_double(emp) << "," << format_double(se) << "," << format_double(z)
                << "\n";
          }
        }
      }
      result.files.push_back(write_file(options.out_dir, s.name + "_mc.csv", csv.str()));
      summary["monte_carlo"] = {
          {"trajectories", sim.trajectories},
          {"checked_entries", checked},
          {"within_3se", within},
          {"max_abs_z", max_abs_z},
      };
    }

    if (wants(OutputKind::comparison)) {
      std::vector<double> alpha_grid;
      for (int k = 10; k <= 999; ++k) alpha_grid.push_back(k / 1000.0);
      const NonOptimalityReport cmp = non_optimality_report(params, alpha_grid);
      std::ostringstream csv;
      csv << "# seed=" << s.seed << " version=" << kToolVersion << "\n";
      csv << "alpha,fixed_variance,best_response_variance\n";
      for (const auto& row : cmp.grid) {
        csv << format_double(row.alpha) << "," << format_double(row.fixed_variance) << ","
            << format_double(cmp.best_response_variance) << "\n";
      }
      result.files.push_back(
          write_file(options.out_dir, s.name + "_comparison.csv", csv.str()));
      summary["comparison"] = {
          {"best_response_variance", cmp.best_response_variance},
          {"best_alpha", cmp.best_alpha},
          {"best_fixed_variance", cmp.best_fixed_variance},
          {"gap", cmp.gap},
          {"fixed_beats_best", cmp.fixed_beats_best},
      };
    }

    result.summary_json = summary.dump(2) + "\n";
    result.files.push_back(
        write_file(options.out_dir, s.name + "_summary.json", result.summary_json));
  } catch (const ScenarioError& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
  } catch (const std::invalid_argument& e) {  // DimensionError, ParameterError
    result.exit_code = kExitValidation;
    result.message = e.what();
  } catch (const CapacityError& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
  } catch (const DegenerateInputError& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
  }
  return result;
}

RunResult run_scenario_file(const std::string& path, const RunOptions& options) {
  try {
    return run_scenario(load_scenario(path), options);
  } catch (const ScenarioError& e) {
    RunResult result;
    result.exit_code = kExitValidation;
    result.message = e.what();
    return result;
  }
}

SweepResult run_sweep(const Scenario& scenario, const std::string& param,
                      const std::vector<double>& values, const RunOptions& options) {
  SweepResult result;
  try {
    if (values.empty()) {
      result.exit_code = kExitValidation;
      result.message = "sweep: empty grid";
      return result;
    }

    Scenario base = scenario;
    if (options.seed_override) base.seed = *options.seed_override;
    if (options.tol_override) base.tolerance = *options.tol_override;

    // Structural compatibility of the swept parameter.
    if (param == "rule.alpha") {
      if (base.model != DynamicsModel::fixed || base.rule_kind != RuleKind::uniform) {
        result.exit_code = kExitValidation;
        result.message = "sweep: rule.alpha requires a fixed model with a uniform rule";
        return result;
      }
    } else if (param == "graph.n") {
      if (base.graph_kind != GraphKind::complete) {
        result.exit_code = kExitValidation;
        result.message = "sweep: graph.n requires graph.kind = complete";
        return result;
      }
      if (base.tau.size() != 1) {
        result.exit_code = kExitValidation;
        result.message = "sweep: graph.n requires a broadcast params.tau";
        return result;
      }
    } else if (param == "params.sigma") {
      // always structurally fine
    } else if (param == "params.tau") {
      if (base.tau.size() != 1) {
        result.exit_code = kExitValidation;
        result.message = "sweep: params.tau sweep requires a broadcast tau";
        return result;
      }
    } else {
      result.exit_code = kExitValidation;
      result.message = "sweep: unsupported parameter '" + param + "'";
      return result;
    }

    std::ostringstream csv;
    csv << "# seed=" << base.seed << " version=" << kToolVersion << "\n";
    csv << "param,value,n,beta_star,c_ii_min,c_ii_max,c_ii_mean,gap,iterations,converged,"
           "residual\n";

    bool all_converged = true;
    for (double value : values) {
      Scenario s = base;
      if (param == "rule.alpha") {
        s.rule_alpha = value;
      } else if (param == "graph.n") {
        if (value < 1.0 || value != std::floor(value)) {
          result.exit_code = kExitValidation;
          result.message = "sweep: graph.n values must be positive integers";
          return result;
        }
        s.graph_n = static_cast<int>(value);
      } else if (param == "params.sigma") {
        s.sigma = value;
      } else {
        s.tau = {value};
      }

      const SocialGraph graph = s.graph();
      const ModelParams params = s.params();
      std::optional<LinearRule> rule;
      if (s.model == DynamicsModel::fixed) {
        rule = s.resolved_rule();
        const RuleValidation check = validate_rule(*rule, graph);
        if (!check.valid) {
          result.exit_code = kExitValidation;
          result.message = "sweep: rule fails validation at value " + format_double(value) +
                           ": " + check.message;
          return result;
        }
      }
      const SteadyOutcome outcome =
          steady_state_for(params, graph, s.model, rule, s.tolerance, options.max_iters);
      const SteadyStateReport& rep = outcome.report;

      SweepRow row;
      row.value = value;
      row.n = params.n();
      row.beta_star = rep.beta_star;
      row.c_ii_min = rep.c_star.diagonal().minCoeff();
      row.c_ii_max = rep.c_star.diagonal().maxCoeff();
      row.c_ii_mean = rep.c_star.diagonal().mean();
      row.gap = learning_gap(rep.c_star, params);
      row.iterations = rep.iterations;
      row.converged = rep.converged;
      row.residual = rep.residual;
      all_converged = all_converged && rep.converged;
      result.rows.push_back(row);

      csv << param << "," << format_double(row.value) << "," << row.n << ","
          << format_double(row.beta_star) << "," << format_double(row.c_ii_min) << ","
          << format_double(row.c_ii_max) << "," << format_double(row.c_ii_mean) << ","
          << format_double(row.gap) << "," << row.iterations << ","
          << (row.converged ? 1 : 0) << "," << format_double(row.residual) << "\n";
    }

    result.csv_path =
        write_file(options.out_dir, scenario.name + "_sweep.csv", csv.str());
    if (!all_converged) {
      result.exit_code = kExitNonConvergence;
      result.message = "sweep: some grid points did not converge";
    }
  } catch (const ScenarioError& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
  } catch (const std::runtime_error& e) {
    result.exit_code = kExitValidation;
    result.message = e.what();
  }
  return result;
}

namespace {

ReproduceItem check(const std::string& id, double expected, double achieved, double tolerance,
                    const std::string& detail = "") {
  ReproduceItem item;
  item.id = id;
  item.expected = expected;
  item.achieved = achieved;
  item.tolerance = tolerance;
  item.pass = std::abs(achieved - expected) <= tolerance;
  item.detail = detail;
  return item;
}

}  // namespace

std::vector<ReproduceItem> reproduce_published_values() {
  std::vector<ReproduceItem> items;
  const double sqrt2 = std::sqrt(2.0);

  // n = 2 best response steady state.
  {
    const ModelParams params = ModelParams::uniform(2, 1.0, 1.0);
    const SteadyStateReport rep = best_response_steady_state(params);
    items.push_back(check("best-response-n2-beta", sqrt2 - 1.0, rep.beta_star, 1e-8));
    items.push_back(check("best-response-n2-variance", 2.0 - sqrt2, rep.c_star(0, 0), 1e-6));
    items.push_back(check("best-response-n2-quoted", 0.58578, rep.c_star(0, 0), 1e-4));
  }

  // n = 2 fixed response at alpha = 0.60352, closed form and Lyapunov iteration.
  {
    const double closed = clique_fixed_variance(2, 0.60352);
    items.push_back(check("fixed-response-n2-quoted", 0.58472, closed, 1e-4));
    const ModelParams params = ModelParams::uniform(2, 1.0, 1.0);
    const LinearRule rule = uniform_clique_rule(params, 0.60352);
    const SteadyStateReport rep = fixed_response_steady_state(
        rule, params, CovarianceState::initial_from_measurements(params));
    items.push_back(check("fixed-response-n2-closed-vs-iterated", closed, rep.c_star(0, 0), 1e-10));
    const double br = best_response_steady_state(params).c_star(0, 0);
    ReproduceItem order;
    order.id = "fixed-beats-best-n2";
    order.expected = 1.0;
    order.achieved = closed < br ? 1.0 : 0.0;
    order.tolerance = 0.0;
    order.pass = closed < br;
    order.detail = "fixed " + format_double(closed) + " < best " + format_double(br);
    items.push_back(order);
  }

  // Large-n limits.
  {
    const LargeNLimits limits = large_n_limits();
    items.push_back(check("best-response-limit", 0.55496, limits.best_response_limit, 5e-6));
    const double beta = limits.beta_limit;
    const double cubic_residual =
        beta * beta * beta + 4.0 * beta * beta + 3.0 * beta - 1.0;
    items.push_back(check("best-response-limit-beta-cubic", 0.0, cubic_residual, 1e-12));
    items.push_back(
        check("fixed-response-limit", 0.55017, clique_fixed_variance_limit(0.59075), 5e-6));

    const CliqueStats big = CliqueStats::uniform(1000000, 1.0, 1.0);
    const double beta_numeric = clique_beta_fixed_point(big).beta_star;
    items.push_back(check("best-response-limit-numeric-n1e6", limits.best_response_limit,
                          (beta_numeric + 1.0) / (beta_numeric + 2.0), 1e-5));
    items.push_back(check("fixed-response-limit-numeric-n1e6", clique_fixed_variance_limit(0.59075),
                          clique_fixed_variance(1000000, 0.59075), 1e-5));
  }

  // Perfect learning: penultimate matches the full-information reference on
  // complete graphs; best response does the same only for n = 1.
  for (int n : {2, 4, 8}) {
    const ModelParams params = ModelParams::uniform(n, 1.0, 1.0);
    const CovarianceState c0 = CovarianceState::initial_from_measurements(params);
    const Eigen::MatrixXd oracle = kalman_oracle(params, c0, 8);
    PenultimateState state = penultimate_init(c0);
    double worst = 0.0;
    for (int t = 1; t <= 8; ++t) {
      const PenultimateStep step = penultimate_step(state, params);
      worst = std::max(worst,
                       (step.agent_variance - oracle.row(t - 1).transpose()).cwiseAbs().maxCoeff());
      state = step.state;
    }
    items.push_back(check("penultimate-perfect-n" + std::to_string(n) + "-t8", 0.0, worst, 1e-10));
  }
  {
    const ModelParams params = ModelParams::uniform(1, 1.0, 1.0);
    const CovarianceState c0 = CovarianceState::initial_from_measurements(params);
    const Eigen::MatrixXd oracle = kalman_oracle(params, c0, 8);
    const SocialGraph graph = SocialGraph::complete(1);
    CovarianceState state = c0;
    double worst = 0.0;
    for (int t = 1; t <= 8; ++t) {
      state = best_response_step(state, graph, params).next;
      worst = std::max(worst, std::abs(state.matrix()(0, 0) - oracle(t - 1, 0)));
    }
    items.push_back(check("best-response-perfect-n1-t8", 0.0, worst, 1e-10));
  }

  // Contraction bounds over random instances: sampled |f'| must stay below
  // max(f'(0), 1/27) within slack, and the shifted map has unit slope at the
  // origin by central difference.
  {
    std::mt19937_64 rng(20240817u);
    std::uniform_int_distribution<long> n_dist(1, 50);
    std::uniform_real_distribution<double> tau_dist(0.3, 3.0);
    std::uniform_real_distribution<double> sigma_dist(0.5, 2.0);
    double worst_excess = -1.0;
    for (int rep = 0; rep < 50; ++rep) {
      const long n = n_dist(rng);
      Eigen::VectorXd tau(n);
      for (long i = 0; i < n; ++i) tau(i) = tau_dist(rng);
      const ModelParams params(static_cast<int>(n), sigma_dist(rng), tau);
      const CliqueStats stats = CliqueStats::from(params);
      const double bound = std::max(clique_beta_map_derivative(0.0, stats), 1.0 / 27.0);
      for (int k = 0; k <= 1000; ++k) {
        const double beta = 100.0 * k / 1000.0;
        worst_excess = std::max(
            worst_excess, std::abs(clique_beta_map_derivative(beta, stats)) - bound);
      }
    }
    ReproduceItem item;
    item.id = "contraction-bound-50-random";
    item.expected = 0.0;
    item.achieved = worst_excess;
    item.tolerance = 1e-6;
    item.pass = worst_excess < 1e-6;
    item.detail = "max over instances of sampled |f'| minus max(f'(0), 1/27)";
    items.push_back(item);

    // g(x) = f(x - sigma^2) slope at 0, central difference, h = 1e-6.
    const ModelParams params = ModelParams::uniform(5, 1.0, 1.0);
    const double y = params.tau_sq_sum();
    const double z = params.tau_sq_dispersion();
    const double nn = params.n();
    auto g = [&](double x) {
      return y * x * (y + x) / (y * (y - (nn - 2.0) * nn * x) + z * x * (y + x));
    };
    const double h = 1e-6;
    items.push_back(check("shifted-map-unit-slope-at-zero", 1.0,
                          (g(h) - g(-h)) / (2.0 * h), 1e-6));
  }

  // Cubic cross-checks; the quadratic-sign-flipped variant must be flagged.
  {
    std::mt19937_64 rng(911u);
    std::uniform_int_distribution<int> n_dist(1, 12);
    std::uniform_real_distribution<double> tau_dist(0.3, 3.0);
    std::uniform_real_distribution<double> sigma_dist(0.2, 2.0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      const int n = n_dist(rng);
      Eigen::VectorXd tau(n);
      for (int i = 0; i < n; ++i) tau(i) = tau_dist(rng);
      const ModelParams params(n, sigma_dist(rng), tau);
      const CubicReport report = steady_state_cubic_roots(params);
      worst = std::max(worst, std::abs(report.positive_root - report.iteration_beta));
    }
    items.push_back(check("cubic-root-vs-iteration-50-random", 0.0, worst, 1e-8));

    const CubicReport n2 = steady_state_cubic_roots(ModelParams::uniform(2, 1.0, 1.0));
    ReproduceItem flag;
    flag.id = "cubic-n2-sign-discrepancy";
    flag.expected = 1.0;
    flag.achieved = (n2.agrees_with_iteration && !n2.published_form_consistent) ? 1.0 : 0.0;
    flag.tolerance = 0.0;
    flag.pass = flag.achieved == 1.0;
    flag.detail = n2.note;
    items.push_back(flag);
  }

  return items;
}

}  // namespace sociallearn
