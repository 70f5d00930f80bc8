#include "sociallearn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sociallearn/estimation.hpp"
#include "sociallearn/tolerances.hpp"

namespace sociallearn {

namespace {

void check_step_dims(const CovarianceState& prev, const LinearRule& rule,
                     const ModelParams& params) {
  const int n = params.n();
  if (prev.size() != n) throw DimensionError("covariance_step: state size != params.n");
  if (rule.n() != n || rule.p.rows() != n || rule.p.cols() != n) {
    throw DimensionError("covariance_step: rule size != params.n");
  }
  const Eigen::VectorXd row_sums = rule.a + rule.p.rowwise().sum();
  if ((row_sums.array() - 1.0).abs().maxCoeff() > 1e-9) {
    throw ParameterError("covariance_step: rule rows do not sum to 1");
  }
}

Eigen::MatrixXd measurement_and_drift_term(const LinearRule& rule, const ModelParams& params) {
  const Eigen::VectorXd tau_sq = params.tau().array().square();
  const Eigen::VectorXd a_sq_t = rule.a.array().square() * tau_sq.array();
  const Eigen::VectorXd p_ones = rule.p.rowwise().sum();
  Eigen::MatrixXd w = params.sigma() * params.sigma() * (p_ones * p_ones.transpose());
  w += Eigen::MatrixXd(a_sq_t.asDiagonal());
  return w;
}

}  // namespace

CovarianceState covariance_step(const CovarianceState& prev, const LinearRule& rule,
                                const ModelParams& params) {
  check_step_dims(prev, rule, params);
  Eigen::MatrixXd next = measurement_and_drift_term(rule, params);
  next += rule.p * prev.matrix() * rule.p.transpose();
  next = 0.5 * (next + next.transpose()).eval();
  return CovarianceState(std::move(next), prev.round() + 1);
}

CovarianceState covariance_closed_form(const CovarianceState& c0,
                                       const std::vector<LinearRule>& rules,
                                       const ModelParams& params) {
  if (rules.empty()) return c0;
  const auto t = static_cast<int>(rules.size());
  for (const auto& rule : rules) check_step_dims(c0, rule, params);

  // Accumulate sum_r Q(r,t) W(r) Q(r,t)' walking r from t down to 0, growing
  // the product Q(r,t) = P(t) ... P(r+1) one factor at a time.
  Eigen::MatrixXd total = measurement_and_drift_term(rules[t - 1], params);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(params.n(), params.n());
  for (int r = t - 1; r >= 0; --r) {
    q = (q * rules[r].p).eval();
    const Eigen::MatrixXd w =
        r == 0 ? c0.matrix() : measurement_and_drift_term(rules[r - 1], params);
    total += q * w * q.transpose();
  }
  total = 0.5 * (total + total.transpose()).eval();
  return CovarianceState(std::move(total), c0.round() + t);
}

double best_response_agent_variance(double beta, double sigma, double tau_i) {
  const double drifted = beta + sigma * sigma;
  const double a = drifted / (tau_i * tau_i + drifted);
  return a * a * tau_i * tau_i + drifted * (1.0 - a) * (1.0 - a);
}

BestResponseStep best_response_step(const CovarianceState& prev, const SocialGraph& graph,
                                    const ModelParams& params) {
  const int n = params.n();
  if (prev.size() != n || graph.n() != n) {
    throw DimensionError("best_response_step: state/graph size != params.n");
  }
  const double sigma_sq = params.sigma() * params.sigma();

  LinearRule rule;
  rule.a.resize(n);
  rule.p = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd pool_variance(n);

  for (int i = 0; i < n; ++i) {
    const std::vector<int> nbrs = graph.neighbors(i);
    const auto m = static_cast<int>(nbrs.size());
    Eigen::MatrixXd sub(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) sub(r, c) = prev.matrix()(nbrs[r], nbrs[c]);
    }
    MvuleResult pooled;
    try {
      pooled = mvule_weights(sub);
    } catch (const DegenerateInputError& e) {
      std::ostringstream msg;
      msg << "best_response_step: degenerate neighborhood for agent " << i << ": " << e.what();
      throw DegenerateInputError(msg.str());
    }
    pool_variance(i) = pooled.variance;
    const double drifted = pooled.variance + sigma_sq;
    const double tau_sq = params.tau()(i) * params.tau()(i);
    const double a_i = drifted / (tau_sq + drifted);
    rule.a(i) = a_i;
    for (int r = 0; r < m; ++r) rule.p(i, nbrs[r]) = (1.0 - a_i) * pooled.weights(r);
  }

  CovarianceState next = covariance_step(prev, rule, params);
  return BestResponseStep{std::move(rule), std::move(next), std::move(pool_variance)};
}

double clique_beta_map(double beta, const CliqueStats& stats) {
  if (!(beta >= 0.0)) throw ParameterError("clique_beta_map: beta must be >= 0");
  const double y = stats.tau_sq_sum;
  const double z = stats.tau_sq_dispersion;
  const double nn = static_cast<double>(stats.n);
  const double x = beta + stats.sigma * stats.sigma;
  const double denom = y * (y - (nn - 2.0) * nn * x) + z * x * (y + x);
  if (!(denom > 0.0)) throw DegenerateInputError("clique_beta_map: nonpositive denominator");
  return y * x * (y + x) / denom;
}

double clique_beta_map(double beta, const ModelParams& params) {
  return clique_beta_map(beta, CliqueStats::from(params));
}

double clique_beta_map_derivative(double beta, const CliqueStats& stats) {
  if (!(beta >= 0.0)) throw ParameterError("clique_beta_map_derivative: beta must be >= 0");
  const double y = stats.tau_sq_sum;
  const double z = stats.tau_sq_dispersion;
  const double nn = static_cast<double>(stats.n);
  const double x = beta + stats.sigma * stats.sigma;
  const double denom = y * (y - (nn - 2.0) * nn * x) + z * x * (y + x);
  if (!(denom > 0.0)) {
    throw DegenerateInputError("clique_beta_map_derivative: nonpositive denominator");
  }
  return y * y * (y - (nn - 2.0) * x) * (nn * x + y) / (denom * denom);
}

PenultimateState penultimate_init(const CovarianceState& c0) {
  PenultimateState state;
  state.pool_variance = c0.beta();
  state.pool_gain = 0.0;
  state.memory_weight = Eigen::VectorXd::Zero(c0.size());
  state.t = c0.round();
  return state;
}

PenultimateStep penultimate_step(const PenultimateState& state, const ModelParams& params) {
  const int n = params.n();
  const double sigma_sq = params.sigma() * params.sigma();
  const double tau_star_sq = 1.0 / params.tau_sq_inv_sum();
  const double drifted = state.pool_variance + sigma_sq;

  PenultimateStep step;
  step.state.t = state.t + 1;
  step.state.pool_gain = drifted / (drifted + tau_star_sq);
  step.state.pool_variance = drifted * tau_star_sq / (drifted + tau_star_sq);
  step.state.memory_weight.resize(n);
  step.agent_variance.resize(n);
  for (int i = 0; i < n; ++i) {
    const double tau_sq = params.tau()(i) * params.tau()(i);
    step.state.memory_weight(i) = tau_sq / (drifted + tau_sq);
    step.agent_variance(i) = drifted * tau_sq / (drifted + tau_sq);
  }
  return step;
}

Eigen::MatrixXd penultimate_covariance(const PenultimateState& state, const ModelParams& params) {
  const int n = params.n();
  const double drifted = state.pool_variance + params.sigma() * params.sigma();
  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) {
    const double tau_sq = params.tau()(i) * params.tau()(i);
    k(i) = tau_sq / (drifted + tau_sq);
  }
  Eigen::MatrixXd c = drifted * (k * k.transpose());
  for (int i = 0; i < n; ++i) {
    const double tau_sq = params.tau()(i) * params.tau()(i);
    c(i, i) += (1.0 - k(i)) * (1.0 - k(i)) * tau_sq;
  }
  return c;
}

Eigen::MatrixXd kalman_oracle(const ModelParams& params, const CovarianceState& c0, int rounds,
                              int max_pool_dim) {
  const int n = params.n();
  if (c0.size() != n) throw DimensionError("kalman_oracle: c0 size != params.n");
  if (rounds < 1) throw ParameterError("kalman_oracle: rounds must be >= 1");
  if (static_cast<long>(n) * rounds > max_pool_dim) {
    std::ostringstream msg;
    msg << "kalman_oracle: pool dimension " << static_cast<long>(n) * rounds
        << " exceeds cap " << max_pool_dim;
    throw CapacityError(msg.str());
  }
  const double sigma_sq = params.sigma() * params.sigma();

  Eigen::MatrixXd result(rounds, n);
  for (int r = 1; r <= rounds; ++r) {
    // Pool at round r: the n initial estimators and all measurements of
    // rounds 1..r-1, with errors taken relative to S(r). Shared drift terms
    // produce min(r - s, r - s') sigma^2 cross-covariances.
    const int dim = n + n * (r - 1);
    Eigen::MatrixXd pool(dim, dim);
    for (int a = 0; a < dim; ++a) {
      const int s_a = a < n ? 0 : 1 + (a - n) / n;      // measurement round (0 = initial)
      const int agent_a = a < n ? a : (a - n) % n;
      for (int b = 0; b <= a; ++b) {
        const int s_b = b < n ? 0 : 1 + (b - n) / n;
        const int agent_b = b < n ? b : (b - n) % n;
        double cov = sigma_sq * (r - std::max(s_a, s_b));
        if (s_a == 0 && s_b == 0) {
          cov += c0.matrix()(agent_a, agent_b);
        } else if (s_a == s_b && agent_a == agent_b) {
          cov += params.tau()(agent_a) * params.tau()(agent_a);
        }
        pool(a, b) = cov;
        pool(b, a) = cov;
      }
    }
    const double pooled_variance = mvule_weights(pool).variance;
    for (int i = 0; i < n; ++i) {
      const double tau_sq = params.tau()(i) * params.tau()(i);
      result(r - 1, i) = pooled_variance * tau_sq / (pooled_variance + tau_sq);
    }
  }
  return result;
}

}  // namespace sociallearn
