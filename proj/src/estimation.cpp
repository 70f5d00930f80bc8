#include "sociallearn/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "sociallearn/tolerances.hpp"

namespace sociallearn {

namespace detail {

MvuleResult pooled_from_eigen(const Eigen::MatrixXd& cov, const Eigen::VectorXd& evals,
                              const Eigen::MatrixXd& evecs) {
  const auto m = evals.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
  const double lambda_max = std::max(evals(m - 1), 0.0);
  const double cut = tol::kSpectralCut * lambda_max;

  // Component of the ones vector inside the (numerical) null space. A
  // nonzero component means some unit-sum combination is error-free.
  Eigen::VectorXd null_dir = Eigen::VectorXd::Zero(m);
  double info = 0.0;  // 1' C^+ 1 over retained eigenvalues
  Eigen::VectorXd pinv_ones = Eigen::VectorXd::Zero(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double proj = evecs.col(k).dot(ones);
    if (evals(k) <= cut) {
      null_dir += proj * evecs.col(k);
    } else {
      info += proj * proj / evals(k);
      pinv_ones += (proj / evals(k)) * evecs.col(k);
    }
  }

  const double null_mass = null_dir.dot(ones);  // equals ||null_dir||^2
  if (null_mass > tol::kSpectralCut * static_cast<double>(m)) {
    Eigen::VectorXd w = null_dir / null_mass;
    const double var = std::max(0.0, w.dot(cov * w));
    return MvuleResult{std::move(w), var};
  }

  if (!(info > 0.0)) {
    throw DegenerateInputError("mvule_weights: no unbiased combination resolvable (1' C^+ 1 = 0)");
  }
  Eigen::VectorXd w = pinv_ones / info;
  const double var = std::max(0.0, w.dot(cov * w));
  return MvuleResult{std::move(w), var};
}

}  // namespace detail

MvuleResult mvule_weights(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() < 1) {
    throw DimensionError("mvule_weights: covariance must be square and non-empty");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if (asym > tol::kStructural * scale) {
    throw ParameterError("mvule_weights: covariance is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) {
    throw DegenerateInputError("mvule_weights: eigendecomposition failed");
  }
  const double lambda_max = std::max(es.eigenvalues()(cov.rows() - 1), 0.0);
  if (es.eigenvalues()(0) < -tol::kPsdSlack * std::max(1.0, lambda_max)) {
    throw ParameterError("mvule_weights: covariance is not PSD within slack");
  }
  return detail::pooled_from_eigen(sym, es.eigenvalues(), es.eigenvectors());
}

MvuleResult fuse_two_independent(double var1, double var2) {
  if (!(var1 > 0.0) || !(var2 > 0.0)) {
    throw ParameterError("fuse_two_independent: variances must be positive");
  }
  const double total = var1 + var2;
  Eigen::VectorXd w(2);
  w << var2 / total, var1 / total;
  return MvuleResult{std::move(w), var1 * var2 / total};
}

Eigen::MatrixXd woodbury_inverse(const Eigen::MatrixXd& x, const Eigen::MatrixXd& u,
                                 const Eigen::MatrixXd& y, const Eigen::MatrixXd& v) {
  const auto n = x.rows();
  const auto k = u.cols();
  if (x.cols() != n) throw DimensionError("woodbury_inverse: X must be square");
  if (u.rows() != n || v.cols() != n || y.rows() != k || y.cols() != k || v.rows() != k) {
    throw DimensionError("woodbury_inverse: inconsistent U/Y/V shapes");
  }

  Eigen::FullPivLU<Eigen::MatrixXd> x_lu(x);
  if (!x_lu.isInvertible()) throw DegenerateInputError("woodbury_inverse: X is singular");
  const Eigen::MatrixXd x_inv = x_lu.inverse();
  if (k == 0) return x_inv;

  Eigen::FullPivLU<Eigen::MatrixXd> y_lu(y);
  if (!y_lu.isInvertible()) throw DegenerateInputError("woodbury_inverse: Y is singular");

  const Eigen::MatrixXd inner = y_lu.inverse() + v * x_inv * u;
  Eigen::FullPivLU<Eigen::MatrixXd> inner_lu(inner);
  if (!inner_lu.isInvertible()) {
    throw DegenerateInputError("woodbury_inverse: inner matrix Y^-1 + V X^-1 U is singular");
  }
  return x_inv - x_inv * u * inner_lu.inverse() * v * x_inv;
}

}  // namespace sociallearn
