#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "sociallearn/dynamics.hpp"
#include "sociallearn/model.hpp"
#include "sociallearn/steady_state.hpp"

namespace sociallearn {

enum class NoiseFamily { gaussian, uniform };

/// Trajectory-level simulation setup. Defaults: S(0) ~ N(s0_mean, s0_stddev^2),
/// Y_i(0) = S(0) + fresh noise with variance c0_diag[i] (diag(tau_i^2) when
/// unset). Best-response agents use the exactly propagated covariance
/// recursion for their weights; penultimate requires a complete graph.
struct SimulationConfig {
  SimulationConfig(ModelParams params_, SocialGraph graph_, DynamicsModel model_)
      : params(std::move(params_)), graph(std::move(graph_)), model(model_) {}

  ModelParams params;
  SocialGraph graph;
  DynamicsModel model;
  std::optional<LinearRule> rule;  // required for the fixed model
  int horizon = 1;
  long trajectories = 1;
  std::uint64_t seed = 0;
  NoiseFamily noise = NoiseFamily::gaussian;
  Eigen::VectorXd c0_diag;  // empty -> tau_i^2
  double s0_mean = 0.0;
  double s0_stddev = 1.0;
  long budget = 1000000000;  // cap on n * horizon * trajectories
  int threads = 0;           // 0 -> hardware concurrency
  bool enforce_convexity = true;
};

/// Sample moments of the estimator errors Y_i(t) - S(t) at one round.
/// cov_stderr(i, j) is the asymptotic standard error of cov_error(i, j);
/// mean_stderr the standard error of mean_error.
struct EmpiricalMoments {
  Eigen::VectorXd mean_error;
  Eigen::MatrixXd cov_error;
  Eigen::MatrixXd cov_stderr;
  Eigen::VectorXd mean_stderr;
};

struct RoundMoments {
  int t = 0;
  EmpiricalMoments moments;
  // Penultimate only, t >= 1: moments of the shared remembered value's error
  // against the previous round's state.
  double memory_mean_error = 0.0;
  double memory_mean_stderr = 0.0;
  bool has_memory_stats = false;
};

struct SimulationResult {
  std::vector<RoundMoments> rounds;  // t = 0 .. horizon
  long trajectories = 0;
};

/// Runs `trajectories` independent sample paths and reduces moments in a
/// fixed block-pairwise order, so results are bit-identical for every thread
/// count. Throws CapacityError when n * horizon * trajectories exceeds the
/// configured budget.
SimulationResult simulate(const SimulationConfig& config);

struct UnbiasednessRound {
  int t = 0;
  Eigen::VectorXd mean_error;
  Eigen::VectorXd mean_stderr;
  bool within_4se = false;
};

struct UnbiasednessReport {
  std::vector<UnbiasednessRound> rounds;
  bool all_ok = false;
};

/// Checks that mean estimator errors stay within 4 standard errors of zero
/// at every recorded round.
UnbiasednessReport unbiasedness_check(const SimulationConfig& config);

}  // namespace sociallearn
