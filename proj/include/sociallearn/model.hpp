#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "sociallearn/errors.hpp"

namespace sociallearn {

/// Parameters of the drifting-state model: n agents track a scalar random
/// walk with step deviation `sigma`; agent i's fresh measurement carries
/// noise deviation `tau[i]`.
///
/// tau_i = 0 is rejected: the weight formulas divide by tau_i^2. A noise-free
/// agent would simply copy its measurement, which needs no machinery.
class ModelParams {
 public:
  ModelParams(int n, double sigma, Eigen::VectorXd tau);

  /// All agents share one measurement deviation.
  static ModelParams uniform(int n, double sigma, double tau);

  int n() const { return n_; }
  double sigma() const { return sigma_; }
  const Eigen::VectorXd& tau() const { return tau_; }

  /// sum_i tau_i^2
  double tau_sq_sum() const { return tau_sq_sum_; }
  /// sum_i tau_i^-2
  double tau_sq_inv_sum() const { return tau_sq_inv_sum_; }
  /// (sum_i tau_i^2)(sum_i tau_i^-2); always >= n^2 by Cauchy-Schwarz.
  double tau_sq_dispersion() const { return tau_sq_sum_ * tau_sq_inv_sum_; }
  /// (sum_i tau_i^-2)^(-1/2): deviation of the pooled one-shot measurement.
  double tau_star() const;

 private:
  int n_;
  double sigma_;
  Eigen::VectorXd tau_;
  double tau_sq_sum_;
  double tau_sq_inv_sum_;
};

/// Directed social graph; edge (i, j) means agent i observes agent j's
/// previous-round estimate. Self-loops are mandatory: every agent sees its
/// own last estimate. Agents are 0-indexed, here and in every external
/// format. Stored as a dense boolean mask (the analytic regime is small n).
class SocialGraph {
 public:
  static SocialGraph complete(int n);
  /// Builds from an explicit ordered-pair list. Missing self-loops are an
  /// invariant violation and rejected.
  static SocialGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  bool has_edge(int i, int j) const { return adj_(i, j); }
  /// Sorted out-neighborhood of i (always contains i).
  std::vector<int> neighbors(int i) const;
  bool is_complete() const;

 private:
  SocialGraph(int n, Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adj)
      : n_(n), adj_(std::move(adj)) {}
  int n_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adj_;
};

/// One round's linear update: Y(t) = diag(a) M(t) + p Y(t-1).
/// Unbiasedness requires a_i + sum_j p_ij = 1 per row; p must vanish off the
/// graph's support. Entries of p may be negative (a best responder can short
/// a neighbor); fixed-response rules in the classical sense are nonnegative.
struct LinearRule {
  Eigen::VectorXd a;  // diagonal measurement weights
  Eigen::MatrixXd p;  // neighbor weights

  int n() const { return static_cast<int>(a.size()); }
};

struct SupportViolation {
  int i, j;
  double value;
};

/// Outcome of validate_rule. Row-sum excesses are signed (a_i + sum_j p_ij - 1).
struct RuleValidation {
  bool valid = false;
  Eigen::VectorXd row_sum_excess;
  std::vector<SupportViolation> support_violations;
  std::string message;  // empty when valid
};

/// Checks the two rule invariants (row sums within tol::kStructural, support
/// containment) against `graph`. Mismatched dimensions are structural and
/// throw DimensionError instead of being reported as a violation.
RuleValidation validate_rule(const LinearRule& rule, const SocialGraph& graph);

/// The symmetric complete-graph rule: a_i = alpha, p_ij = (1 - alpha)/n for
/// all i, j (self included). Requires 0 < alpha <= 1.
LinearRule uniform_clique_rule(const ModelParams& params, double alpha);

/// Symmetric PSD matrix of estimator-error covariances at round t, plus the
/// derived pooled variance beta = min variance of any weights-sum-to-one
/// combination of the agents' estimators (equals 1/(1' C^-1 1) when C is
/// nonsingular). Immutable after construction; construction enforces symmetry
/// within tol::kStructural and eigenvalues >= -tol::kPsdSlack.
class CovarianceState {
 public:
  CovarianceState(Eigen::MatrixXd c, int round);

  /// diag(tau_i^2) at round 0: every agent starts from one private measurement.
  static CovarianceState initial_from_measurements(const ModelParams& params);

  const Eigen::MatrixXd& matrix() const { return c_; }
  int round() const { return t_; }
  int size() const { return static_cast<int>(c_.rows()); }
  double beta() const { return beta_; }
  double min_eigenvalue() const { return lambda_min_; }

 private:
  Eigen::MatrixXd c_;
  int t_;
  double beta_;
  double lambda_min_;
};

}  // namespace sociallearn
