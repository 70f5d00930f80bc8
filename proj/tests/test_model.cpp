#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "sociallearn/model.hpp"
#include "sociallearn/tolerances.hpp"
#include "test_support.hpp"

using namespace sociallearn;

TEST_CASE("ModelParams validates and derives the tau aggregates") {
  Eigen::VectorXd tau(2);
  tau << 1.0, 2.0;
  const ModelParams params(2, 0.5, tau);
  CHECK(params.n() == 2);
  CHECK(params.tau_sq_sum() == doctest::Approx(5.0));
  CHECK(params.tau_sq_inv_sum() == doctest::Approx(1.25));
  CHECK(params.tau_sq_dispersion() == doctest::Approx(6.25));
  CHECK(params.tau_star() == doctest::Approx(1.0 / std::sqrt(1.25)));

  CHECK_THROWS_AS(ModelParams(0, 1.0, tau), ParameterError);
  CHECK_THROWS_AS(ModelParams(2, -1.0, tau), ParameterError);
  CHECK_THROWS_AS(ModelParams(3, 1.0, tau), DimensionError);
  Eigen::VectorXd bad = tau;
  bad(1) = 0.0;
  CHECK_THROWS_AS(ModelParams(2, 1.0, bad), ParameterError);
}

TEST_CASE("tau dispersion is at least n^2 for random tau vectors") {
  test_support::Rng rng(7001);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const ModelParams params(n, 1.0, test_support::random_tau(n, rng, 0.05, 10.0));
    CHECK(params.tau_sq_dispersion() >= static_cast<double>(n) * n - 1e-9);
  }
}

TEST_CASE("SocialGraph constructors and neighborhoods") {
  const SocialGraph complete = SocialGraph::complete(3);
  CHECK(complete.is_complete());
  CHECK(complete.neighbors(1) == std::vector<int>{0, 1, 2});

  const SocialGraph ring =
      SocialGraph::from_edges(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {2, 0}});
  CHECK_FALSE(ring.is_complete());
  CHECK(ring.has_edge(0, 1));
  CHECK_FALSE(ring.has_edge(1, 0));
  CHECK(ring.neighbors(0) == std::vector<int>{0, 1});

  CHECK_THROWS_AS(SocialGraph::from_edges(2, {{0, 0}, {0, 1}}), ParameterError);  // no (1,1)
  CHECK_THROWS_AS(SocialGraph::from_edges(2, {{0, 0}, {1, 1}, {1, 2}}), ParameterError);
}

TEST_CASE("validate_rule accepts and rejects per the row and support invariants") {
  const SocialGraph graph = SocialGraph::complete(2);

  LinearRule ok;
  ok.a = Eigen::VectorXd::Constant(2, 0.5);
  ok.p = Eigen::MatrixXd::Constant(2, 2, 0.25);
  CHECK(validate_rule(ok, graph).valid);

  LinearRule excess = ok;
  excess.p(0, 0) = 0.3;
  excess.p(0, 1) = 0.3;
  const RuleValidation bad_rows = validate_rule(excess, graph);
  CHECK_FALSE(bad_rows.valid);
  CHECK(bad_rows.row_sum_excess(0) == doctest::Approx(0.1));
  CHECK(bad_rows.row_sum_excess(1) == doctest::Approx(0.0));

  const SocialGraph no_edge = SocialGraph::from_edges(2, {{0, 0}, {1, 1}, {1, 0}});
  LinearRule off_support;
  off_support.a = Eigen::VectorXd::Constant(2, 0.5);
  off_support.p = Eigen::MatrixXd::Zero(2, 2);
  off_support.p(0, 0) = 0.25;
  off_support.p(0, 1) = 0.25;
  off_support.p(1, 0) = 0.25;
  off_support.p(1, 1) = 0.25;
  const RuleValidation bad_support = validate_rule(off_support, no_edge);
  CHECK_FALSE(bad_support.valid);
  REQUIRE(bad_support.support_violations.size() == 1);
  CHECK(bad_support.support_violations[0].i == 0);
  CHECK(bad_support.support_violations[0].j == 1);

  const SocialGraph bigger = SocialGraph::complete(3);
  CHECK_THROWS_AS(validate_rule(ok, bigger), DimensionError);
}

TEST_CASE("uniform_clique_rule spreads the remaining weight evenly") {
  const ModelParams params = ModelParams::uniform(2, 1.0, 1.0);
  const LinearRule rule = uniform_clique_rule(params, 0.60352);
  CHECK(rule.a(0) == doctest::Approx(0.60352));
  CHECK(rule.p(0, 1) == doctest::Approx(0.19824));
  CHECK(validate_rule(rule, SocialGraph::complete(2)).valid);

  const LinearRule lone = uniform_clique_rule(ModelParams::uniform(1, 1.0, 1.0), 1.0);
  CHECK(lone.a(0) == doctest::Approx(1.0));
  CHECK(lone.p(0, 0) == doctest::Approx(0.0));

  const LinearRule quad = uniform_clique_rule(ModelParams::uniform(4, 1.0, 1.0), 0.5);
  CHECK(quad.p(2, 3) == doctest::Approx(0.125));
  CHECK((quad.a + quad.p.rowwise().sum() - Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff() <
        1e-15);

  CHECK_THROWS_AS(uniform_clique_rule(params, 0.0), ParameterError);
  CHECK_THROWS_AS(uniform_clique_rule(params, 1.2), ParameterError);
}

TEST_CASE("valid nonnegative rules have probability-vector rows") {
  test_support::Rng rng(7002);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const SocialGraph graph = test_support::random_graph(n, rng);
    const LinearRule rule = test_support::random_rule(graph, rng);
    REQUIRE(validate_rule(rule, graph).valid);
    for (int i = 0; i < n; ++i) {
      CHECK(rule.a(i) >= 0.0);
      CHECK(rule.p.row(i).minCoeff() >= 0.0);
      CHECK(rule.a(i) + rule.p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("CovarianceState enforces symmetry and PSD and derives beta") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.2, 0.1, 1.0;
  CHECK_THROWS_AS(CovarianceState(asym, 0), ParameterError);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(CovarianceState(indefinite, 0), ParameterError);

  CHECK_THROWS_AS(CovarianceState(Eigen::MatrixXd::Identity(2, 2), -1), ParameterError);

  test_support::Rng rng(7003);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const Eigen::MatrixXd spd = test_support::random_spd(n, rng);
    const CovarianceState state(spd, 0);
    CHECK(state.beta() > 0.0);
    const Eigen::MatrixXd inv = spd.inverse();
    const double direct = 1.0 / (Eigen::VectorXd::Ones(n).transpose() * inv *
                                 Eigen::VectorXd::Ones(n))(0);
    CHECK(state.beta() == doctest::Approx(direct).epsilon(1e-9));
  }

  // All-zero covariance: a perfect pool, beta = 0.
  const CovarianceState zero(Eigen::MatrixXd::Zero(2, 2), 0);
  CHECK(zero.beta() == doctest::Approx(0.0));

  const ModelParams params(2, 1.0, (Eigen::VectorXd(2) << 1.0, 2.0).finished());
  const CovarianceState init = CovarianceState::initial_from_measurements(params);
  CHECK(init.round() == 0);
  CHECK(init.matrix()(0, 0) == doctest::Approx(1.0));
  CHECK(init.matrix()(1, 1) == doctest::Approx(4.0));
  CHECK(init.matrix()(0, 1) == doctest::Approx(0.0));
}
