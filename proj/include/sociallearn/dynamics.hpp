#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sociallearn/model.hpp"

namespace sociallearn {

/// Scalar summary of a complete-graph instance, enough to drive the
/// one-dimensional pool-variance map without forming n x n matrices.
/// For uniform tau: tau_sq_sum = n tau^2 and tau_sq_dispersion = n^2.
struct CliqueStats {
  long n;
  double sigma;
  double tau_sq_sum;         // sum_i tau_i^2
  double tau_sq_dispersion;  // (sum_i tau_i^2)(sum_i tau_i^-2)

  static CliqueStats from(const ModelParams& params) {
    return {params.n(), params.sigma(), params.tau_sq_sum(), params.tau_sq_dispersion()};
  }
  static CliqueStats uniform(long n, double sigma, double tau) {
    return {n, sigma, static_cast<double>(n) * tau * tau, static_cast<double>(n) * n};
  }
};

/// One exact covariance round:
///   C(t) = A^2 T + P C(t-1) P' + sigma^2 (P 1)(P 1)'
/// with T = diag(tau_i^2). The result is symmetrized as (M + M')/2 to kill
/// floating-point drift. Requires row sums a_i + sum_j p_ij = 1 within
/// tolerance (support is the caller's concern; pair with validate_rule).
CovarianceState covariance_step(const CovarianceState& prev, const LinearRule& rule,
                                const ModelParams& params);

/// Telescoped form of the same evolution over a rule sequence
/// (rules[s-1] applied at round c0.round()+s):
///   C(t) = sum_r Q(r,t) W(r) Q(r,t)'
/// where W(r) = A(r)^2 T + sigma^2 (P(r) 1)(P(r) 1)', W(0) = C(0), and
/// Q(r,t) = P(t) P(t-1) ... P(r+1). Equals repeated covariance_step exactly
/// up to rounding. An empty sequence returns c0.
CovarianceState covariance_closed_form(const CovarianceState& c0,
                                       const std::vector<LinearRule>& rules,
                                       const ModelParams& params);

/// Per-agent variance the clique best responder attains:
/// a = (beta + sigma^2)/(tau_i^2 + beta + sigma^2), then
/// a^2 tau_i^2 + (beta + sigma^2)(1 - a)^2.
double best_response_agent_variance(double beta, double sigma, double tau_i);

/// Outcome of one best-response round: the chosen rule, the next covariance,
/// and each agent's neighborhood pool variance (the beta_i it optimized
/// against).
struct BestResponseStep {
  LinearRule rule;
  CovarianceState next;
  Eigen::VectorXd pool_variance;
};

/// Each agent picks the minimum-variance unbiased weights over its
/// neighbors' previous estimates plus its fresh measurement:
///   q_i  = mvule weights on C restricted to the neighborhood,
///   a_i  = (beta_i + sigma^2)/(tau_i^2 + beta_i + sigma^2),
///   p_i  = (1 - a_i) q_i scattered onto the neighborhood.
/// Fresh measurement noise is independent of all previous-round errors, so
/// the cross term is exactly zero. Then advances via covariance_step.
BestResponseStep best_response_step(const CovarianceState& prev, const SocialGraph& graph,
                                    const ModelParams& params);

/// The one-dimensional map the complete-graph best response induces on the
/// pool variance beta = 1/(1' C^-1 1). With y = tau_sq_sum,
/// z = tau_sq_dispersion and x = beta + sigma^2:
///   f(beta) = y x (y + x) / (y (y - (n-2) n x) + z x (y + x)).
/// The denominator is strictly positive for all beta >= 0.
double clique_beta_map(double beta, const CliqueStats& stats);
double clique_beta_map(double beta, const ModelParams& params);

/// Analytic derivative f'(beta); the contraction analysis bounds it by
/// max(f'(0), 1/27) in absolute value.
double clique_beta_map_derivative(double beta, const CliqueStats& stats);

/// State of penultimate-prediction dynamics on the complete graph. Every
/// agent carries the same remembered value (the pooled estimate of the
/// previous round's state); `pool_variance` is its error variance V,
/// `pool_gain` the gain K applied to the pooled fresh measurement, and
/// `memory_weight[i]` the weight agent i puts on the remembered value when
/// fusing with its own measurement.
struct PenultimateState {
  double pool_variance = 0.0;
  double pool_gain = 0.0;
  Eigen::VectorXd memory_weight;
  int t = 0;
};

struct PenultimateStep {
  PenultimateState state;
  Eigen::VectorXd agent_variance;  // Var{Y_i(t) - S(t)} per agent
};

/// Round-0 state: the remembered value starts uninformative, so the pool is
/// the best combination of the initial estimators alone (V = beta of c0).
PenultimateState penultimate_init(const CovarianceState& c0);

/// One penultimate round:
///   K      = (V + sigma^2)/(V + sigma^2 + tau_*^2),
///   V_next = (V + sigma^2)(1 - K) = (V + sigma^2) tau_*^2/(V + sigma^2 + tau_*^2),
///   k_i    = tau_i^2/(V + sigma^2 + tau_i^2),
///   Var{Y_i - S} = (V + sigma^2) tau_i^2/(V + sigma^2 + tau_i^2),
/// with tau_* the pooled measurement deviation. V never exceeds tau_*^2
/// after the first update.
PenultimateStep penultimate_step(const PenultimateState& state, const ModelParams& params);

/// Estimator-error covariance of the penultimate round following `state`:
/// C_ij = k_i k_j (V + sigma^2) + [i == j] (1 - k_i)^2 tau_i^2.
Eigen::MatrixXd penultimate_covariance(const PenultimateState& state, const ModelParams& params);

/// Brute-force full-information reference. For each round r in 1..rounds,
/// builds the dense error covariance of the pool {Y(0)} u {M_j(s) : s < r}
/// relative to S(r) (block structure from independence of the drift and
/// measurement-noise increments), extracts the pooled minimum variance, and
/// fuses it with agent i's fresh measurement. Entry (r-1, i) of the result is
/// Var{Z_i(r) - S(r)}, the floor any linear scheme can reach. Pool matrices
/// larger than max_pool_dim raise CapacityError.
Eigen::MatrixXd kalman_oracle(const ModelParams& params, const CovarianceState& c0, int rounds,
                              int max_pool_dim = 1024);

}  // namespace sociallearn
