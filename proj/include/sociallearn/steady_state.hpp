#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "sociallearn/dynamics.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/tolerances.hpp"

namespace sociallearn {

enum class SteadyStateMethod { iteration, cubic, lyapunov };

const char* to_string(SteadyStateMethod method);

struct SteadyStateReport {
  double beta_star = 0.0;
  Eigen::MatrixXd c_star;
  long iterations = 0;
  double rate_estimate = 0.0;  // empirical contraction factor
  SteadyStateMethod method = SteadyStateMethod::iteration;
  bool converged = false;
  double residual = 0.0;           // ||F(C*) - C*||_inf for the round map F
  double start_independence = 0.0; // steady-state distance from a second start
  std::string warning;             // set when a convergence precondition is unmet
};

/// Scalar fixed point of the clique pool-variance map by direct iteration.
struct BetaFixedPoint {
  double beta_star = 0.0;
  long iterations = 0;
  double rate_estimate = 0.0;
  bool converged = false;
  std::vector<double> trajectory;  // beta(0), beta(1), ...
};

BetaFixedPoint clique_beta_fixed_point(const CliqueStats& stats, double beta0 = 0.0,
                                       long max_iters = 1000000);

/// Complete-graph best-response steady state: iterates the pool-variance map
/// from beta0 to within tol::kBetaIteration, then reconstructs
/// C* = A^2 T + (beta* + sigma^2)(1 - a)(1 - a)'. The residual field reports
/// one further best-response round applied to C*.
SteadyStateReport best_response_steady_state(const ModelParams& params, double beta0 = 0.0,
                                             long max_iters = 1000000);

/// Cubic in beta obtained by clearing the denominator of f(beta) = beta.
/// coeffs are {c0, c1, c2, c3} with sum_k c_k beta^k = 0. The iterated fixed
/// point is authoritative; `published_*` evaluates the variant with the
/// opposite sign on the quadratic coefficient that circulates in print, and
/// `note` records the discrepancy when that variant's positive root does not
/// match the iteration.
struct CubicReport {
  std::array<double, 4> coeffs{};
  std::vector<double> real_roots;
  double positive_root = 0.0;  // NaN when absent
  double iteration_beta = 0.0;
  bool agrees_with_iteration = false;

  std::array<double, 4> published_coeffs{};
  std::vector<double> published_real_roots;
  double published_positive_root = 0.0;  // NaN when absent
  bool published_form_consistent = false;
  std::string note;
};

CubicReport steady_state_cubic_roots(const ModelParams& params);

/// Iterates the covariance round map with a constant rule until
/// ||dC||_inf < tol::kFixedPoint, verifies the stationarity equation
/// C = A^2 T + sigma^2 (P 1)(P 1)' + P C P' as a residual, and re-runs from a
/// second start to report independence of the initial condition. Rows with
/// a_i = 0 void the convergence guarantee; the report's `converged` flag is
/// the outcome either way.
SteadyStateReport fixed_response_steady_state(const LinearRule& rule, const ModelParams& params,
                                              const CovarianceState& c0, long max_iters = 200000,
                                              double tol = tol::kFixedPoint);

/// Closed-form steady per-agent variance of the uniform clique rule at
/// sigma = tau = 1: alpha^2 + (1 - alpha)^2 (1 + alpha^2/n)/((2 - alpha) alpha).
double clique_fixed_variance(long n, double alpha);

/// Its n -> infinity limit: alpha^2 + 1/(alpha (2 - alpha)) - 1.
double clique_fixed_variance_limit(double alpha);

/// Steady state of the uniform clique rule for general sigma and uniform tau,
/// via the scalar recurrence on the group-average estimator:
///   pool = alpha^2 tau^2 / n + (1 - alpha)^2 (pool + sigma^2)
///   agent = alpha^2 tau^2 + (1 - alpha)^2 (pool + sigma^2).
struct UniformCliqueFixedPoint {
  double pool_variance;
  double agent_variance;
};

UniformCliqueFixedPoint uniform_clique_fixed_point(long n, double alpha, double sigma, double tau);

/// Side-by-side steady-state variances: best response vs the uniform fixed
/// rule over an alpha grid. `fixed_beats_best` reports whether some grid
/// alpha strictly undercuts the best-response value.
struct AlphaComparison {
  double alpha;
  double fixed_variance;
};

struct NonOptimalityReport {
  double best_response_variance = 0.0;
  std::vector<AlphaComparison> grid;
  double best_alpha = 0.0;
  double best_fixed_variance = 0.0;
  double gap = 0.0;  // best_response_variance - best_fixed_variance
  bool fixed_beats_best = false;
};

/// Requires a complete graph and uniform tau.
NonOptimalityReport non_optimality_report(const ModelParams& params,
                                          const std::vector<double>& alpha_grid);

/// Closed-form large-n limits at sigma = tau = 1:
/// beta = (2/3) sqrt(7) cos((1/3) atan(3 sqrt(3))) - 4/3, variance (beta+1)/(beta+2).
struct LargeNLimits {
  double beta_limit;
  double best_response_limit;
};

LargeNLimits large_n_limits();

enum class DynamicsModel { fixed, best, penultimate };

const char* to_string(DynamicsModel model);

/// Steady-state excess variance over the full-information-per-round target
/// sigma^2 tau^2/(sigma^2 + tau^2), per n. For the fixed model the uniform
/// clique rule is optimized over alpha first (alpha_used records the
/// optimum); for best response the clique map fixed point is used; for
/// penultimate the pool recursion fixed point, with the 1/n upper bound
/// tau^6/(n (sigma^2 + tau^2)^2) attached per point. floor_bound carries
/// sigma^2 tau^8/(sigma^2 + tau^2)^4, the level no fixed-weight scheme can
/// beat (vacuous when sigma = 0).
struct GapPoint {
  long n;
  double agent_variance;
  double gap;
  double penultimate_bound;
  double alpha_used;  // NaN except for the fixed model
};

struct GapCurve {
  double target = 0.0;
  double floor_bound = 0.0;
  std::vector<GapPoint> points;
};

/// Requires uniform tau; params.n is ignored in favor of n_grid.
GapCurve asymptotic_learning_gap(const ModelParams& params, DynamicsModel model,
                                 const std::vector<long>& n_grid);

}  // namespace sociallearn
