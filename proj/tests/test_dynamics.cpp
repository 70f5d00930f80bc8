#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sociallearn/dynamics.hpp"
#include "sociallearn/estimation.hpp"
#include "sociallearn/steady_state.hpp"
#include "test_support.hpp"

using namespace sociallearn;

namespace {

LinearRule scalar_rule(double a, double p) {
  LinearRule rule;
  rule.a = Eigen::VectorXd::Constant(1, a);
  rule.p = Eigen::MatrixXd::Constant(1, 1, p);
  return rule;
}

}  // namespace

TEST_CASE("covariance_step reproduces the hand-evaluated scalar round") {
  // n=1, sigma=tau=1, C(0)=0, a=p=1/2: next = 1/4 + 0 + 1/4.
  const ModelParams params = ModelParams::uniform(1, 1.0, 1.0);
  const CovarianceState c0(Eigen::MatrixXd::Zero(1, 1), 0);
  const CovarianceState c1 = covariance_step(c0, scalar_rule(0.5, 0.5), params);
  CHECK(c1.matrix()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c1.round() == 1);
}

TEST_CASE("pure-measurement rules forget the previous state") {
  test_support::Rng rng(5001);
  for (int n : {1, 3, 5}) {
    const ModelParams params(n, 0.7, test_support::random_tau(n, rng));
    LinearRule rule;
    rule.a = Eigen::VectorXd::Ones(n);
    rule.p = Eigen::MatrixXd::Zero(n, n);
    const CovarianceState prev(test_support::random_spd(n, rng), 3);
    const CovarianceState next = covariance_step(prev, rule, params);
    const Eigen::MatrixXd expected = params.tau().array().square().matrix().asDiagonal();
    CHECK((next.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("iterating the uniform clique rule approaches the closed-form variance") {
  const ModelParams params = ModelParams::uniform(2, 1.0, 1.0);
  const LinearRule rule = uniform_clique_rule(params, 0.60352);
  CovarianceState state = CovarianceState::initial_from_measurements(params);
  for (int t = 0; t < 400; ++t) state = covariance_step(state, rule, params);
  CHECK(state.matrix()(0, 0) == doctest::Approx(clique_fixed_variance(2, 0.60352)).epsilon(1e-10));
}

TEST_CASE("covariance_closed_form base case and memoryless sequences") {
  test_support::Rng rng(5002);
  const int n = 3;
  const ModelParams params(n, 1.3, test_support::random_tau(n, rng));
  const SocialGraph graph = SocialGraph::complete(n);
  const CovarianceState c0(test_support::random_spd(n, rng), 0);

  const LinearRule rule = test_support::random_rule(graph, rng);
  const CovarianceState direct = covariance_step(c0, rule, params);
  const CovarianceState closed = covariance_closed_form(c0, {rule}, params);
  CHECK((direct.matrix() - closed.matrix()).cwiseAbs().maxCoeff() < 1e-13);

  CHECK((covariance_closed_form(c0, {}, params).matrix() - c0.matrix()).cwiseAbs().maxCoeff() ==
        0.0);

  LinearRule memoryless;
  memoryless.a = Eigen::VectorXd::Ones(n);
  memoryless.p = Eigen::MatrixXd::Zero(n, n);
  const CovarianceState after =
      covariance_closed_form(c0, {memoryless, memoryless, memoryless}, params);
  const Eigen::MatrixXd expected = params.tau().array().square().matrix().asDiagonal();
  CHECK((after.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("closed form over five rounds of one fixed rule") {
  const ModelParams params = ModelParams::uniform(2, 1.0, 1.0);
  const LinearRule rule = uniform_clique_rule(params, 0.7);
  const CovarianceState c0 = CovarianceState::initial_from_measurements(params);
  CovarianceState iterated = c0;
  std::vector<LinearRule> rules;
  for (int s = 0; s < 5; ++s) {
    iterated = covariance_step(iterated, rule, params);
    rules.push_back(rule);
  }
  const CovarianceState closed = covariance_closed_form(c0, rules, params);
  CHECK((closed.matrix() - iterated.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed form equals repeated stepping for random rule sequences") {
  test_support::Rng rng(5003);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int t = 1 + static_cast<int>(rng() % 10);
    const ModelParams params(n, 0.2 + 1.5 * (rng() % 100) / 100.0,
                             test_support::random_tau(n, rng));
    const SocialGraph graph = test_support::random_graph(n, rng);
    const CovarianceState c0(test_support::random_spd(n, rng), 0);
    std::vector<LinearRule> rules;
    for (int s = 0; s < t; ++s) rules.push_back(test_support::random_rule(graph, rng));

    CovarianceState iterated = c0;
    for (const auto& rule : rules) iterated = covariance_step(iterated, rule, params);
    const CovarianceState closed = covariance_closed_form(c0, rules, params);
    CHECK((closed.matrix() - iterated.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(closed.round() == t);
  }
}

TEST_CASE("best_response_step from a zero start matches the scalar filter") {
  const ModelParams params = ModelParams::uniform(1, 1.0, 1.0);
  const SocialGraph graph = SocialGraph::complete(1);
  const CovarianceState c0(Eigen::MatrixXd::Zero(1, 1), 0);
  const BestResponseStep step = best_response_step(c0, graph, params);
  CHECK(step.pool_variance(0) == doctest::Approx(0.0));
  CHECK(step.rule.a(0) == doctest::Approx(0.5));
  CHECK(step.next.matrix()(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("two-agent best response converges to the known steady values") {
  const ModelParams params = ModelParams::uniform(2, 1.0, 1.0);
  const SocialGraph graph = SocialGraph::complete(2);
  CovarianceState state = CovarianceState::initial_from_measurements(params);
  for (int t = 0; t < 200; ++t) state = best_response_step(state, graph, params).next;
  CHECK(state.beta() == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-10));
  CHECK(state.matrix()(0, 0) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
  CHECK(state.matrix()(1, 1) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("best response measurement weight respects its lower bound") {
  test_support::Rng rng(5004);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const ModelParams params(n, 0.3 + 2.0 * (rng() % 100) / 100.0,
                             test_support::random_tau(n, rng));
    const SocialGraph graph = test_support::random_graph(n, rng);
    const CovarianceState prev(test_support::random_spd(n, rng), 0);
    const BestResponseStep step = best_response_step(prev, graph, params);
    const double sigma_sq = params.sigma() * params.sigma();
    for (int i = 0; i < n; ++i) {
      const double tau_sq = params.tau()(i) * params.tau()(i);
      CHECK(step.rule.a(i) >= sigma_sq / (tau_sq + sigma_sq) - 1e-12);
    }
    CHECK(validate_rule(step.rule, graph).valid);
  }
}

TEST_CASE("one clique best-response round moves beta exactly by the scalar map") {
  test_support::Rng rng(5005);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const ModelParams params(n, 0.4 + 1.2 * (rng() % 100) / 100.0,
                             test_support::random_tau(n, rng));
    const SocialGraph graph = SocialGraph::complete(n);
    // Scale to spread beta over [0, 100].
    const double scale = std::pow(10.0, -1.0 + 3.0 * (rng() % 100) / 100.0);
    const CovarianceState prev(scale * test_support::random_spd(n, rng), 0);
    const BestResponseStep step = best_response_step(prev, graph, params);
    const double mapped = clique_beta_map(prev.beta(), params);
    CHECK(step.next.beta() == doctest::Approx(mapped).epsilon(1e-10));
  }
}

TEST_CASE("best response is optimal against a dense grid of alternative rows") {
  test_support::Rng rng(5006);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 3;
    const ModelParams params(n, 1.0, test_support::random_tau(n, rng));
    const SocialGraph graph = SocialGraph::complete(n);
    const Eigen::MatrixXd prev_c = test_support::random_spd(n, rng);
    const CovarianceState prev(prev_c, 0);
    const BestResponseStep step = best_response_step(prev, graph, params);
    const double sigma_sq = params.sigma() * params.sigma();

    for (int i = 0; i < n; ++i) {
      const double tau_sq = params.tau()(i) * params.tau()(i);
      const double achieved = step.next.matrix()(i, i);
      // Candidate row: weights w on the neighborhood, a = 1 - sum(w).
      for (double w0 = -0.5; w0 <= 1.6; w0 += 0.1) {
        for (double w1 = -0.5; w1 <= 1.6; w1 += 0.1) {
          for (double w2 = -0.5; w2 <= 1.6; w2 += 0.1) {
            Eigen::Vector3d w(w0, w1, w2);
            const double a = 1.0 - w.sum();
            const double candidate = a * a * tau_sq +
                                     double(w.transpose() * prev_c * w) +
                                     sigma_sq * w.sum() * w.sum();
            CHECK(achieved <= candidate + 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("clique_beta_map frozen evaluations") {
  const ModelParams two = ModelParams::uniform(2, 1.0, 1.0);
  CHECK(clique_beta_map(0.0, two) == doctest::Approx(0.375).epsilon(1e-14));

  const double fp = std::sqrt(2.0) - 1.0;
  CHECK(std::abs(clique_beta_map(fp, two) - fp) < 1e-12);

  // n = 1 reduces to the independent-fusion update.
  test_support::Rng rng(5007);
  for (int rep = 0; rep < 20; ++rep) {
    const double tau = 0.3 + 2.0 * (rng() % 100) / 100.0;
    const double sigma = 0.2 + 1.5 * (rng() % 100) / 100.0;
    const ModelParams one(1, sigma, Eigen::VectorXd::Constant(1, tau));
    const double beta = 3.0 * (rng() % 100) / 100.0;
    const double expected =
        fuse_two_independent(beta + sigma * sigma, tau * tau).variance;
    CHECK(clique_beta_map(beta, one) == doctest::Approx(expected).epsilon(1e-12));
  }

  CHECK_THROWS_AS(clique_beta_map(-0.1, two), ParameterError);
}

TEST_CASE("clique map contraction and derivative consistency") {
  test_support::Rng rng(5008);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const ModelParams params(n, 0.4 + 1.5 * (rng() % 100) / 100.0,
                             test_support::random_tau(n, rng));
    const CliqueStats stats = CliqueStats::from(params);
    const double k = std::max(clique_beta_map_derivative(0.0, stats), 1.0 / 27.0);

    for (int s = 0; s < 60; ++s) {
      const double b1 = 100.0 * (rng() % 1000) / 1000.0;
      const double b2 = 100.0 * (rng() % 1000) / 1000.0;
      CHECK(std::abs(clique_beta_map(b1, stats) - clique_beta_map(b2, stats)) <=
            (k + 1e-6) * std::abs(b1 - b2) + 1e-14);
    }

    // Analytic derivative vs central difference.
    for (double beta : {0.1, 1.0, 7.0, 42.0}) {
      const double h = 1e-6;
      const double numeric =
          (clique_beta_map(beta + h, stats) - clique_beta_map(beta - h, stats)) / (2.0 * h);
      CHECK(clique_beta_map_derivative(beta, stats) ==
            doctest::Approx(numeric).epsilon(1e-6));
    }
  }
}

TEST_CASE("the shifted clique map has unit slope at zero") {
  // g(x) = f(x - sigma^2) evaluated through its rational form; central
  // difference at a 1e-6 step.
  test_support::Rng rng(5013);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const ModelParams params(n, 1.0, test_support::random_tau(n, rng));
    const double y = params.tau_sq_sum();
    const double z = params.tau_sq_dispersion();
    const double nn = params.n();
    auto g = [&](double x) {
      return y * x * (y + x) / (y * (y - (nn - 2.0) * nn * x) + z * x * (y + x));
    };
    const double h = 1e-6;
    CHECK((g(h) - g(-h)) / (2.0 * h) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("penultimate recursion hits the bisection fixed point") {
  // sigma = 1, tau_* = 1: V* solves V^2 + V - 1 = 0.
  const double oracle = test_support::bisect(
      [](double v) { return (v + 1.0) / (v + 2.0) - v; }, 0.0, 2.0);
  CHECK(oracle == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));

  const ModelParams params = ModelParams::uniform(1, 1.0, 1.0);
  PenultimateState state = penultimate_init(CovarianceState::initial_from_measurements(params));
  for (int t = 0; t < 200; ++t) state = penultimate_step(state, params).state;
  CHECK(state.pool_variance == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("penultimate state invariants and base case") {
  test_support::Rng rng(5009);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const ModelParams params(n, 0.3 + (rng() % 100) / 50.0, test_support::random_tau(n, rng));
    const CovarianceState c0(test_support::random_spd(n, rng), 0);
    PenultimateState state = penultimate_init(c0);
    CHECK(state.pool_variance == doctest::Approx(c0.beta()));
    const double tau_star_sq = 1.0 / params.tau_sq_inv_sum();
    for (int t = 0; t < 12; ++t) {
      const PenultimateStep step = penultimate_step(state, params);
      CHECK(step.state.pool_gain >= 0.0);
      CHECK(step.state.pool_gain <= 1.0);
      CHECK(step.state.memory_weight.minCoeff() >= 0.0);
      CHECK(step.state.memory_weight.maxCoeff() <= 1.0);
      CHECK(step.state.pool_variance >= 0.0);
      CHECK(step.state.pool_variance <= tau_star_sq + 1e-15);
      CHECK(step.agent_variance.minCoeff() >= 0.0);
      state = step.state;
    }
  }
}

TEST_CASE("penultimate steady state approaches the per-round target at rate 1/n") {
  for (long n : {10L, 100L, 1000L}) {
    const ModelParams params = ModelParams::uniform(static_cast<int>(n), 1.0, 1.0);
    PenultimateState state =
        penultimate_init(CovarianceState::initial_from_measurements(params));
    Eigen::VectorXd agent_variance;
    for (int t = 0; t < 400; ++t) {
      const PenultimateStep step = penultimate_step(state, params);
      state = step.state;
      agent_variance = step.agent_variance;
    }
    const double gap = agent_variance(0) - 0.5;
    CHECK(gap >= 0.0);
    CHECK(gap <= 1.0 / (4.0 * static_cast<double>(n)));
  }
}

TEST_CASE("kalman_oracle frozen scalar case") {
  const ModelParams params = ModelParams::uniform(1, 1.0, 1.0);
  const CovarianceState c0(Eigen::MatrixXd::Identity(1, 1), 0);
  const Eigen::MatrixXd oracle = kalman_oracle(params, c0, 1);
  CHECK(oracle(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("penultimate prediction achieves the full-information floor on cliques") {
  test_support::Rng rng(5010);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const ModelParams params(n, 0.3 + 1.5 * (rng() % 100) / 100.0,
                             test_support::random_tau(n, rng));
    const CovarianceState c0 = CovarianceState::initial_from_measurements(params);
    const Eigen::MatrixXd oracle = kalman_oracle(params, c0, 8);
    PenultimateState state = penultimate_init(c0);
    for (int t = 1; t <= 8; ++t) {
      const PenultimateStep step = penultimate_step(state, params);
      CHECK((step.agent_variance - oracle.row(t - 1).transpose()).cwiseAbs().maxCoeff() < 1e-10);
      state = step.state;
    }
  }
}

TEST_CASE("single-agent best response equals the oracle at every round") {
  test_support::Rng rng(5011);
  for (int rep = 0; rep < 10; ++rep) {
    const double tau = 0.4 + 2.0 * (rng() % 100) / 100.0;
    const double sigma = 0.3 + 1.5 * (rng() % 100) / 100.0;
    const ModelParams params(1, sigma, Eigen::VectorXd::Constant(1, tau));
    const CovarianceState c0 = CovarianceState::initial_from_measurements(params);
    const Eigen::MatrixXd oracle = kalman_oracle(params, c0, 10);
    const SocialGraph graph = SocialGraph::complete(1);
    CovarianceState state = c0;
    for (int t = 1; t <= 10; ++t) {
      state = best_response_step(state, graph, params).next;
      CHECK(state.matrix()(0, 0) == doctest::Approx(oracle(t - 1, 0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("kalman_oracle pool cap raises a capacity error") {
  const ModelParams params = ModelParams::uniform(4, 1.0, 1.0);
  const CovarianceState c0 = CovarianceState::initial_from_measurements(params);
  CHECK_THROWS_AS(kalman_oracle(params, c0, 100, 64), CapacityError);
}

TEST_CASE("penultimate_covariance diagonal matches the per-agent step variances") {
  test_support::Rng rng(5012);
  const int n = 4;
  const ModelParams params(n, 1.1, test_support::random_tau(n, rng));
  PenultimateState state =
      penultimate_init(CovarianceState::initial_from_measurements(params));
  for (int t = 0; t < 5; ++t) {
    const Eigen::MatrixXd c = penultimate_covariance(state, params);
    const PenultimateStep step = penultimate_step(state, params);
    CHECK((c.diagonal() - step.agent_variance).cwiseAbs().maxCoeff() < 1e-14);
    // PSD with positive diagonal.
    CHECK(CovarianceState(c, 0).min_eigenvalue() > -1e-12);
    state = step.state;
  }
}
