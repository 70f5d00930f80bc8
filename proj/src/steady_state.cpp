#include "sociallearn/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sociallearn/estimation.hpp"
#include "sociallearn/tolerances.hpp"

namespace sociallearn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double tail_rate(const std::vector<double>& diffs) {
  // Geometric-rate estimate from the last few usable successive-difference
  // ratios, skipping the noise floor.
  double sum = 0.0;
  int count = 0;
  for (auto it = diffs.rbegin(); it + 1 != diffs.rend() && count < 3; ++it) {
    const double cur = *it;
    const double prevd = *(it + 1);
    if (prevd > 1e-300 && cur > 1e-300) {
      sum += cur / prevd;
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

void require_uniform_tau(const ModelParams& params, const char* who) {
  const double t0 = params.tau()(0);
  for (int i = 1; i < params.n(); ++i) {
    if (std::abs(params.tau()(i) - t0) > tol::kStructural * std::max(1.0, std::abs(t0))) {
      std::ostringstream msg;
      msg << who << ": requires uniform tau";
      throw ParameterError(msg.str());
    }
  }
}

std::vector<double> real_cubic_roots(const std::array<double, 4>& coeffs) {
  // coeffs = {c0, c1, c2, c3}; companion-matrix eigenvalues of the monic
  // normalization are robust near double roots.
  const double c3 = coeffs[3];
  if (c3 == 0.0) throw ParameterError("real_cubic_roots: leading coefficient is zero");
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(0, 2) = -coeffs[0] / c3;
  companion(1, 2) = -coeffs[1] / c3;
  companion(2, 2) = -coeffs[2] / c3;
  Eigen::EigenSolver<Eigen::Matrix3d> es(companion);
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) {
    const auto lambda = es.eigenvalues()(k);
    if (std::abs(lambda.imag()) <= 1e-10 * std::max(1.0, std::abs(lambda.real()))) {
      roots.push_back(lambda.real());
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double unique_positive_root(const std::vector<double>& roots) {
  double found = kNaN;
  for (double r : roots) {
    if (r > 0.0 && std::isnan(found)) found = r;
  }
  return found;
}

}  // namespace

const char* to_string(SteadyStateMethod method) {
  switch (method) {
    case SteadyStateMethod::iteration: return "iteration";
    case SteadyStateMethod::cubic: return "cubic";
    case SteadyStateMethod::lyapunov: return "lyapunov";
  }
  return "unknown";
}

const char* to_string(DynamicsModel model) {
  switch (model) {
    case DynamicsModel::fixed: return "fixed";
    case DynamicsModel::best: return "best";
    case DynamicsModel::penultimate: return "penultimate";
  }
  return "unknown";
}

BetaFixedPoint clique_beta_fixed_point(const CliqueStats& stats, double beta0, long max_iters) {
  if (!(beta0 >= 0.0)) throw ParameterError("clique_beta_fixed_point: beta0 must be >= 0");
  BetaFixedPoint result;
  result.trajectory.push_back(beta0);
  double beta = beta0;
  std::vector<double> diffs;
  for (long it = 0; it < max_iters; ++it) {
    const double next = clique_beta_map(beta, stats);
    const double diff = std::abs(next - beta);
    diffs.push_back(diff);
    if (result.trajectory.size() < 10000) result.trajectory.push_back(next);
    beta = next;
    if (diff < tol::kBetaIteration) {
      result.converged = true;
      result.iterations = it + 1;
      break;
    }
  }
  if (!result.converged) result.iterations = max_iters;
  result.beta_star = beta;
  result.rate_estimate = tail_rate(diffs);
  return result;
}

SteadyStateReport best_response_steady_state(const ModelParams& params, double beta0,
                                             long max_iters) {
  const CliqueStats stats = CliqueStats::from(params);
  const BetaFixedPoint fp = clique_beta_fixed_point(stats, beta0, max_iters);

  SteadyStateReport report;
  report.method = SteadyStateMethod::iteration;
  report.beta_star = fp.beta_star;
  report.iterations = fp.iterations;
  report.rate_estimate = fp.rate_estimate;
  report.converged = fp.converged;

  // C* = A^2 T + (beta* + sigma^2)(1 - a)(1 - a)'
  const int n = params.n();
  const double drifted = fp.beta_star + params.sigma() * params.sigma();
  Eigen::VectorXd one_minus_a(n);
  Eigen::VectorXd a_sq_t(n);
  for (int i = 0; i < n; ++i) {
    const double tau_sq = params.tau()(i) * params.tau()(i);
    const double a_i = drifted / (tau_sq + drifted);
    one_minus_a(i) = 1.0 - a_i;
    a_sq_t(i) = a_i * a_i * tau_sq;
  }
  Eigen::MatrixXd c_star = drifted * (one_minus_a * one_minus_a.transpose());
  c_star += Eigen::MatrixXd(a_sq_t.asDiagonal());
  report.c_star = c_star;

  const CovarianceState state(c_star, 0);
  const SocialGraph graph = SocialGraph::complete(n);
  const BestResponseStep round = best_response_step(state, graph, params);
  report.residual = (round.next.matrix() - c_star).cwiseAbs().maxCoeff();

  const BetaFixedPoint fp2 = clique_beta_fixed_point(stats, beta0 + 50.0, max_iters);
  report.start_independence = std::abs(fp2.beta_star - fp.beta_star);
  return report;
}

CubicReport steady_state_cubic_roots(const ModelParams& params) {
  const double y = params.tau_sq_sum();
  const double z = params.tau_sq_dispersion();
  const double nn = static_cast<double>(params.n());
  const double s = params.sigma() * params.sigma();

  CubicReport report;
  // Clearing the denominator of f(beta) = beta with x = beta + sigma^2:
  //   y x (y + x) - beta [y (y - (n-2) n x) + z x (y + x)] = 0.
  report.coeffs = {
      s * y * (y + s),
      s * (y * (2.0 + (nn - 2.0) * nn - z) - s * z),
      (nn - 1.0) * (nn - 1.0) * y - z * y - 2.0 * s * z,
      -z,
  };
  // The sign pattern that circulates in print flips the quadratic term.
  report.published_coeffs = report.coeffs;
  report.published_coeffs[2] = -report.coeffs[2];

  report.real_roots = real_cubic_roots(report.coeffs);
  report.positive_root = unique_positive_root(report.real_roots);
  report.published_real_roots = real_cubic_roots(report.published_coeffs);
  report.published_positive_root = unique_positive_root(report.published_real_roots);

  report.iteration_beta = clique_beta_fixed_point(CliqueStats::from(params)).beta_star;
  report.agrees_with_iteration =
      !std::isnan(report.positive_root) &&
      std::abs(report.positive_root - report.iteration_beta) <= 1e-6;
  report.published_form_consistent =
      !std::isnan(report.published_positive_root) &&
      std::abs(report.published_positive_root - report.iteration_beta) <= 1e-6;

  std::ostringstream note;
  if (!report.agrees_with_iteration) {
    note << "derived cubic root " << report.positive_root
         << " disagrees with iterated fixed point " << report.iteration_beta
         << " beyond 1e-6 (iteration is authoritative); ";
  }
  if (!report.published_form_consistent) {
    note << "quadratic-sign-flipped variant has positive root " << report.published_positive_root
         << ", inconsistent with the iterated fixed point " << report.iteration_beta
         << "; the flipped sign does not reproduce the dynamics";
  }
  report.note = note.str();
  return report;
}

SteadyStateReport fixed_response_steady_state(const LinearRule& rule, const ModelParams& params,
                                              const CovarianceState& c0, long max_iters,
                                              double tol) {
  SteadyStateReport report;
  report.method = SteadyStateMethod::lyapunov;
  if (rule.a.minCoeff() <= 0.0) {
    report.warning = "some measurement weights are 0; convergence is not guaranteed";
  }

  auto iterate = [&](const CovarianceState& start, long* iters_out,
                     std::vector<double>* diffs_out) -> CovarianceState {
    CovarianceState current = start;
    for (long it = 0; it < max_iters; ++it) {
      CovarianceState next = covariance_step(current, rule, params);
      const double diff = (next.matrix() - current.matrix()).cwiseAbs().maxCoeff();
      if (diffs_out) diffs_out->push_back(diff);
      current = std::move(next);
      if (diff < tol) {
        if (iters_out) *iters_out = it + 1;
        return current;
      }
    }
    if (iters_out) *iters_out = -1;
    return current;
  };

  std::vector<double> diffs;
  long iters = 0;
  CovarianceState fixed = iterate(c0, &iters, &diffs);
  report.converged = iters >= 0;
  report.iterations = report.converged ? iters : max_iters;
  report.rate_estimate = tail_rate(diffs);
  report.c_star = fixed.matrix();
  report.beta_star = fixed.beta();

  const CovarianceState once = covariance_step(fixed, rule, params);
  report.residual = (once.matrix() - fixed.matrix()).cwiseAbs().maxCoeff();

  if (report.converged) {
    const CovarianceState alt_start(
        c0.matrix() + Eigen::MatrixXd::Identity(c0.size(), c0.size()), c0.round());
    long alt_iters = 0;
    CovarianceState alt = iterate(alt_start, &alt_iters, nullptr);
    report.start_independence =
        alt_iters >= 0 ? (alt.matrix() - fixed.matrix()).cwiseAbs().maxCoeff() : kNaN;
  } else {
    report.start_independence = kNaN;
  }
  return report;
}

double clique_fixed_variance(long n, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("clique_fixed_variance: alpha must be > 0");
  if (alpha > 1.0) throw ParameterError("clique_fixed_variance: alpha must be <= 1");
  const double one_m = 1.0 - alpha;
  return alpha * alpha +
         one_m * one_m * (1.0 + alpha * alpha / static_cast<double>(n)) / ((2.0 - alpha) * alpha);
}

double clique_fixed_variance_limit(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ParameterError("clique_fixed_variance_limit: alpha must lie in (0, 1]");
  }
  return alpha * alpha + 1.0 / (alpha * (2.0 - alpha)) - 1.0;
}

UniformCliqueFixedPoint uniform_clique_fixed_point(long n, double alpha, double sigma,
                                                   double tau) {
  if (n < 1) throw ParameterError("uniform_clique_fixed_point: n must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ParameterError("uniform_clique_fixed_point: alpha must lie in (0, 1]");
  }
  const double one_m_sq = (1.0 - alpha) * (1.0 - alpha);
  const double pool = (alpha * alpha * tau * tau / static_cast<double>(n) +
                       one_m_sq * sigma * sigma) /
                      (1.0 - one_m_sq);
  const double agent = alpha * alpha * tau * tau + one_m_sq * (pool + sigma * sigma);
  return {pool, agent};
}

NonOptimalityReport non_optimality_report(const ModelParams& params,
                                          const std::vector<double>& alpha_grid) {
  require_uniform_tau(params, "non_optimality_report");
  if (alpha_grid.empty()) throw ParameterError("non_optimality_report: empty alpha grid");
  const double tau = params.tau()(0);

  NonOptimalityReport report;
  report.best_response_variance = best_response_steady_state(params).c_star(0, 0);
  report.best_fixed_variance = std::numeric_limits<double>::infinity();
  for (double alpha : alpha_grid) {
    const double v =
        uniform_clique_fixed_point(params.n(), alpha, params.sigma(), tau).agent_variance;
    report.grid.push_back({alpha, v});
    if (v < report.best_fixed_variance) {
      report.best_fixed_variance = v;
      report.best_alpha = alpha;
    }
  }
  report.gap = report.best_response_variance - report.best_fixed_variance;
  report.fixed_beats_best = report.best_fixed_variance < report.best_response_variance;
  return report;
}

LargeNLimits large_n_limits() {
  const double beta =
      (2.0 / 3.0) * std::sqrt(7.0) * std::cos(std::atan(3.0 * std::sqrt(3.0)) / 3.0) - 4.0 / 3.0;
  return {beta, (beta + 1.0) / (beta + 2.0)};
}

namespace {

double optimal_uniform_alpha(long n, double sigma, double tau) {
  // Coarse grid, then golden-section refinement around the grid optimum.
  const int grid = 2048;
  double best_alpha = 1.0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= grid; ++k) {
    const double alpha = static_cast<double>(k) / grid;
    const double v = uniform_clique_fixed_point(n, alpha, sigma, tau).agent_variance;
    if (v < best_value) {
      best_value = v;
      best_alpha = alpha;
    }
  }
  double lo = std::max(best_alpha - 2.0 / grid, 1e-9);
  double hi = std::min(best_alpha + 2.0 / grid, 1.0);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = uniform_clique_fixed_point(n, x1, sigma, tau).agent_variance;
  double f2 = uniform_clique_fixed_point(n, x2, sigma, tau).agent_variance;
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = uniform_clique_fixed_point(n, x1, sigma, tau).agent_variance;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = uniform_clique_fixed_point(n, x2, sigma, tau).agent_variance;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GapCurve asymptotic_learning_gap(const ModelParams& params, DynamicsModel model,
                                 const std::vector<long>& n_grid) {
  require_uniform_tau(params, "asymptotic_learning_gap");
  const double sigma = params.sigma();
  const double tau = params.tau()(0);
  const double sigma_sq = sigma * sigma;
  const double tau_sq = tau * tau;

  GapCurve curve;
  curve.target = sigma_sq * tau_sq / (sigma_sq + tau_sq);
  const double denom = (sigma_sq + tau_sq) * (sigma_sq + tau_sq);
  curve.floor_bound = sigma_sq * tau_sq * tau_sq * tau_sq * tau_sq / (denom * denom);

  for (long n : n_grid) {
    if (n < 1) throw ParameterError("asymptotic_learning_gap: n must be >= 1");
    GapPoint point;
    point.n = n;
    point.penultimate_bound = tau_sq * tau_sq * tau_sq / (static_cast<double>(n) * denom);
    point.alpha_used = kNaN;
    switch (model) {
      case DynamicsModel::best: {
        const CliqueStats stats = CliqueStats::uniform(n, sigma, tau);
        const double beta = clique_beta_fixed_point(stats).beta_star;
        point.agent_variance = best_response_agent_variance(beta, sigma, tau);
        break;
      }
      case DynamicsModel::fixed: {
        const double alpha = optimal_uniform_alpha(n, sigma, tau);
        point.alpha_used = alpha;
        point.agent_variance = uniform_clique_fixed_point(n, alpha, sigma, tau).agent_variance;
        break;
      }
      case DynamicsModel::penultimate: {
        const double pooled_meas = tau_sq / static_cast<double>(n);  // tau_*^2
        double v = pooled_meas;
        for (int it = 0; it < 1000000; ++it) {
          const double next = (v + sigma_sq) * pooled_meas / (v + sigma_sq + pooled_meas);
          const double diff = std::abs(next - v);
          v = next;
          if (diff < tol::kBetaIteration) break;
        }
        point.agent_variance = (v + sigma_sq) * tau_sq / (v + sigma_sq + tau_sq);
        break;
      }
    }
    point.gap = point.agent_variance - curve.target;
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace sociallearn
