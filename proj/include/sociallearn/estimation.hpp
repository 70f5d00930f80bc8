#pragma once

#include <Eigen/Dense>

#include "sociallearn/errors.hpp"

namespace sociallearn {

/// Weights and achieved variance of a minimum-variance unbiased linear
/// combination. Weights sum to 1; they are not constrained to be nonnegative.
struct MvuleResult {
  Eigen::VectorXd weights;
  double variance;
};

/// Minimum-variance weights for combining unbiased estimators whose error
/// covariance is `cov` (symmetric PSD, m >= 1): minimizes w' C w subject to
/// sum(w) = 1.
///
/// Nonsingular C gives the classical w = C^-1 1 / (1' C^-1 1) with variance
/// 1/(1' C^-1 1). Singular C is handled spectrally: eigenvalues below
/// tol::kSpectralCut * lambda_max count as zero. If the all-ones vector has a
/// component in the null space, some combination is error-free and the
/// minimum is 0 (weights taken along that direction); otherwise the
/// pseudo-inverse formula applies. Weights may be non-unique in the singular
/// case; the variance is the unique minimum.
MvuleResult mvule_weights(const Eigen::MatrixXd& cov);

/// Optimal fusion of two independent unbiased estimators with error
/// variances var1, var2 > 0: weights (var2, var1)/(var1 + var2), variance
/// var1 var2/(var1 + var2).
MvuleResult fuse_two_independent(double var1, double var2);

/// (X + U Y V)^-1 via X^-1 - X^-1 U (Y^-1 + V X^-1 U)^-1 V X^-1.
/// X (n x n) and Y (k x k) must be nonsingular; a singular inner matrix
/// Y^-1 + V X^-1 U raises DegenerateInputError. k = 0 returns X^-1.
Eigen::MatrixXd woodbury_inverse(const Eigen::MatrixXd& x, const Eigen::MatrixXd& u,
                                 const Eigen::MatrixXd& y, const Eigen::MatrixXd& v);

namespace detail {
/// Shared core of mvule_weights for callers that already hold an
/// eigendecomposition of the (symmetrized) covariance.
MvuleResult pooled_from_eigen(const Eigen::MatrixXd& cov, const Eigen::VectorXd& evals,
                              const Eigen::MatrixXd& evecs);
}  // namespace detail

}  // namespace sociallearn
