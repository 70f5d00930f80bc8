#include "sociallearn/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sociallearn/estimation.hpp"
#include "sociallearn/tolerances.hpp"

namespace sociallearn {

ModelParams::ModelParams(int n, double sigma, Eigen::VectorXd tau)
    : n_(n), sigma_(sigma), tau_(std::move(tau)) {
  if (n_ < 1) throw ParameterError("ModelParams: n must be >= 1");
  if (!(sigma_ >= 0.0)) throw ParameterError("ModelParams: sigma must be >= 0");
  if (tau_.size() != n_) throw DimensionError("ModelParams: tau must have length n");
  for (int i = 0; i < n_; ++i) {
    if (!(tau_(i) > 0.0)) throw ParameterError("ModelParams: tau entries must be > 0");
  }
  tau_sq_sum_ = tau_.array().square().sum();
  tau_sq_inv_sum_ = tau_.array().square().inverse().sum();
}

ModelParams ModelParams::uniform(int n, double sigma, double tau) {
  return ModelParams(n, sigma, Eigen::VectorXd::Constant(std::max(n, 1), tau));
}

double ModelParams::tau_star() const { return 1.0 / std::sqrt(tau_sq_inv_sum_); }

SocialGraph SocialGraph::complete(int n) {
  if (n < 1) throw ParameterError("SocialGraph: n must be >= 1");
  return SocialGraph(n, Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, true));
}

SocialGraph SocialGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) throw ParameterError("SocialGraph: n must be >= 1");
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adj =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n) {
      std::ostringstream msg;
      msg << "SocialGraph: edge (" << i << ", " << j << ") out of range [0, " << n << ")";
      throw ParameterError(msg.str());
    }
    adj(i, j) = true;
  }
  for (int i = 0; i < n; ++i) {
    if (!adj(i, i)) {
      std::ostringstream msg;
      msg << "SocialGraph: missing mandatory self-loop (" << i << ", " << i << ")";
      throw ParameterError(msg.str());
    }
  }
  return SocialGraph(n, std::move(adj));
}

std::vector<int> SocialGraph::neighbors(int i) const {
  if (i < 0 || i >= n_) throw ParameterError("SocialGraph: agent index out of range");
  std::vector<int> out;
  out.reserve(n_);
  for (int j = 0; j < n_; ++j) {
    if (adj_(i, j)) out.push_back(j);
  }
  return out;
}

bool SocialGraph::is_complete() const { return adj_.all(); }

RuleValidation validate_rule(const LinearRule& rule, const SocialGraph& graph) {
  const int n = graph.n();
  if (rule.a.size() != n || rule.p.rows() != n || rule.p.cols() != n) {
    throw DimensionError("validate_rule: rule and graph dimensions do not match");
  }
  RuleValidation result;
  result.row_sum_excess.resize(n);
  for (int i = 0; i < n; ++i) {
    result.row_sum_excess(i) = rule.a(i) + rule.p.row(i).sum() - 1.0;
    for (int j = 0; j < n; ++j) {
      if (rule.p(i, j) != 0.0 && !graph.has_edge(i, j)) {
        result.support_violations.push_back({i, j, rule.p(i, j)});
      }
    }
  }
  const bool rows_ok = result.row_sum_excess.cwiseAbs().maxCoeff() <= tol::kStructural;
  result.valid = rows_ok && result.support_violations.empty();
  if (!result.valid) {
    std::ostringstream msg;
    if (!rows_ok) {
      for (int i = 0; i < n; ++i) {
        if (std::abs(result.row_sum_excess(i)) > tol::kStructural) {
          msg << "row " << i << " weight-sum excess " << result.row_sum_excess(i) << "; ";
        }
      }
    }
    for (const auto& sv : result.support_violations) {
      msg << "p(" << sv.i << ", " << sv.j << ") = " << sv.value << " outside graph support; ";
    }
    result.message = msg.str();
  }
  return result;
}

LinearRule uniform_clique_rule(const ModelParams& params, double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) {
    throw ParameterError("uniform_clique_rule: alpha must lie in (0, 1]");
  }
  const int n = params.n();
  LinearRule rule;
  rule.a = Eigen::VectorXd::Constant(n, alpha);
  rule.p = Eigen::MatrixXd::Constant(n, n, (1.0 - alpha) / n);
  return rule;
}

CovarianceState::CovarianceState(Eigen::MatrixXd c, int round) : c_(std::move(c)), t_(round) {
  if (c_.rows() != c_.cols() || c_.rows() < 1) {
    throw DimensionError("CovarianceState: matrix must be square and non-empty");
  }
  if (t_ < 0) throw ParameterError("CovarianceState: round index must be >= 0");
  const double scale = std::max(1.0, c_.cwiseAbs().maxCoeff());
  const double asym = (c_ - c_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::kStructural * scale) {
    throw ParameterError("CovarianceState: matrix is not symmetric within tolerance");
  }
  c_ = 0.5 * (c_ + c_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c_);
  if (es.info() != Eigen::Success) {
    throw DegenerateInputError("CovarianceState: eigendecomposition failed");
  }
  lambda_min_ = es.eigenvalues()(0);
  if (lambda_min_ < -tol::kPsdSlack * scale) {
    throw ParameterError("CovarianceState: matrix is not PSD within slack");
  }
  beta_ = detail::pooled_from_eigen(c_, es.eigenvalues(), es.eigenvectors()).variance;
}

CovarianceState CovarianceState::initial_from_measurements(const ModelParams& params) {
  return CovarianceState(params.tau().array().square().matrix().asDiagonal(), 0);
}

}  // namespace sociallearn
