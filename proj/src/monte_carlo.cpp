#include "sociallearn/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "sociallearn/counter_rng.hpp"
#include "sociallearn/estimation.hpp"
#include "sociallearn/tolerances.hpp"

namespace sociallearn {

namespace {

constexpr long kBlockSize = 4096;

struct RoundPlan {
  Eigen::VectorXd a;  // fixed/best: measurement weights
  Eigen::MatrixXd p;  // fixed/best: neighbor weights
  Eigen::VectorXd memory_weight;  // penultimate: k_i
  double pool_gain = 0.0;         // penultimate: K
};

struct Plan {
  std::vector<RoundPlan> rounds;      // index t-1 for rounds 1..horizon
  Eigen::VectorXd init_pool_weights;  // penultimate: weights forming E(0)
  Eigen::VectorXd measurement_pool;   // penultimate: q_i = tau_*^2 / tau_i^2
};

// Per-block running sums; merging blocks in a fixed pairwise order keeps the
// reduction identical for any thread count.
struct BlockAccumulator {
  long count = 0;
  std::vector<Eigen::VectorXd> sum_err;
  std::vector<Eigen::MatrixXd> sum_outer;
  std::vector<double> sum_mem;
  std::vector<double> sum_mem_sq;

  BlockAccumulator() = default;
  BlockAccumulator(int rounds, int n)
      : sum_err(rounds, Eigen::VectorXd::Zero(n)),
        sum_outer(rounds, Eigen::MatrixXd::Zero(n, n)),
        sum_mem(rounds, 0.0),
        sum_mem_sq(rounds, 0.0) {}

  void merge(const BlockAccumulator& other) {
    count += other.count;
    for (std::size_t r = 0; r < sum_err.size(); ++r) {
      sum_err[r] += other.sum_err[r];
      sum_outer[r] += other.sum_outer[r];
      sum_mem[r] += other.sum_mem[r];
      sum_mem_sq[r] += other.sum_mem_sq[r];
    }
  }
};

Plan build_plan(const SimulationConfig& config, const Eigen::VectorXd& c0_diag) {
  const int n = config.params.n();
  Plan plan;
  plan.rounds.resize(config.horizon);

  switch (config.model) {
    case DynamicsModel::fixed: {
      if (!config.rule) throw ParameterError("simulate: fixed model requires a rule");
      if (config.rule->n() != n || config.rule->p.rows() != n || config.rule->p.cols() != n) {
        throw DimensionError("simulate: rule size != params.n");
      }
      if (config.enforce_convexity) {
        const RuleValidation check = validate_rule(*config.rule, config.graph);
        if (!check.valid) throw ParameterError("simulate: invalid rule: " + check.message);
      }
      for (auto& round : plan.rounds) {
        round.a = config.rule->a;
        round.p = config.rule->p;
      }
      break;
    }
    case DynamicsModel::best: {
      CovarianceState state(c0_diag.asDiagonal(), 0);
      for (int t = 0; t < config.horizon; ++t) {
        BestResponseStep step = best_response_step(state, config.graph, config.params);
        plan.rounds[t].a = step.rule.a;
        plan.rounds[t].p = step.rule.p;
        state = std::move(step.next);
      }
      break;
    }
    case DynamicsModel::penultimate: {
      if (!config.graph.is_complete()) {
        throw ParameterError("simulate: penultimate model requires a complete graph");
      }
      const CovarianceState c0(c0_diag.asDiagonal(), 0);
      plan.init_pool_weights = mvule_weights(c0.matrix()).weights;
      const double tau_star_sq = 1.0 / config.params.tau_sq_inv_sum();
      plan.measurement_pool.resize(n);
      for (int i = 0; i < n; ++i) {
        plan.measurement_pool(i) =
            tau_star_sq / (config.params.tau()(i) * config.params.tau()(i));
      }
      PenultimateState state = penultimate_init(c0);
      for (int t = 0; t < config.horizon; ++t) {
        PenultimateStep step = penultimate_step(state, config.params);
        plan.rounds[t].memory_weight = step.state.memory_weight;
        plan.rounds[t].pool_gain = step.state.pool_gain;
        state = std::move(step.state);
      }
      break;
    }
  }
  return plan;
}

void run_block(const SimulationConfig& config, const Plan& plan, const Eigen::VectorXd& c0_diag,
               long first, long last, BlockAccumulator* acc) {
  const int n = config.params.n();
  const bool gaussian = config.noise == NoiseFamily::gaussian;
  const CounterRng rng(config.seed);
  using Role = CounterRng::Role;

  Eigen::VectorXd y(n), m(n), err(n);
  Eigen::VectorXd c0_stddev = c0_diag.cwiseSqrt();

  for (long traj = first; traj < last; ++traj) {
    double s = config.s0_mean + rng.zero_mean(gaussian, config.s0_stddev, traj, 0, 0,
                                              Role::state_init);
    for (int i = 0; i < n; ++i) {
      y(i) = s + rng.zero_mean(gaussian, c0_stddev(i), traj, 0, i, Role::estimate_init);
    }
    err = y.array() - s;
    acc->sum_err[0] += err;
    acc->sum_outer[0] += err * err.transpose();

    double pool = 0.0;  // penultimate shared estimate E(t-1)
    if (config.model == DynamicsModel::penultimate) pool = plan.init_pool_weights.dot(y);

    for (int t = 1; t <= config.horizon; ++t) {
      const double s_prev = s;
      s += rng.zero_mean(gaussian, config.params.sigma(), traj, t, 0, Role::drift);
      for (int i = 0; i < n; ++i) {
        m(i) = s + rng.zero_mean(gaussian, config.params.tau()(i), traj, t, i,
                                 Role::measurement);
      }
      const RoundPlan& round = plan.rounds[t - 1];
      if (config.model == DynamicsModel::penultimate) {
        const double mem_err = pool - s_prev;
        acc->sum_mem[t] += mem_err;
        acc->sum_mem_sq[t] += mem_err * mem_err;
        for (int i = 0; i < n; ++i) {
          y(i) = round.memory_weight(i) * pool + (1.0 - round.memory_weight(i)) * m(i);
        }
        pool = (1.0 - round.pool_gain) * pool + round.pool_gain * plan.measurement_pool.dot(m);
      } else {
        y = (round.a.array() * m.array()).matrix() + round.p * y;
      }
      err = y.array() - s;
      acc->sum_err[t] += err;
      acc->sum_outer[t] += err * err.transpose();
    }
    acc->count += 1;
  }
}

}  // namespace

SimulationResult simulate(const SimulationConfig& config) {
  const int n = config.params.n();
  if (config.graph.n() != n) throw DimensionError("simulate: graph size != params.n");
  if (config.horizon < 1) throw ParameterError("simulate: horizon must be >= 1");
  if (config.trajectories < 1) throw ParameterError("simulate: trajectories must be >= 1");
  if (static_cast<long>(n) * config.horizon * config.trajectories > config.budget) {
    throw CapacityError("simulate: n * horizon * trajectories exceeds the configured budget");
  }

  Eigen::VectorXd c0_diag = config.c0_diag.size() > 0
                                ? config.c0_diag
                                : Eigen::VectorXd(config.params.tau().array().square());
  if (c0_diag.size() != n) throw DimensionError("simulate: c0_diag size != params.n");
  if ((c0_diag.array() < 0.0).any()) {
    throw ParameterError("simulate: c0_diag entries must be >= 0");
  }

  const Plan plan = build_plan(config, c0_diag);
  const int rounds = config.horizon + 1;

  const long blocks = (config.trajectories + kBlockSize - 1) / kBlockSize;
  std::vector<BlockAccumulator> accs(blocks, BlockAccumulator(rounds, n));

  long threads = config.threads > 0 ? config.threads
                                    : static_cast<long>(std::thread::hardware_concurrency());
  threads = std::max(1L, std::min(threads, blocks));

  if (threads == 1) {
    for (long b = 0; b < blocks; ++b) {
      run_block(config, plan, c0_diag, b * kBlockSize,
                std::min(config.trajectories, (b + 1) * kBlockSize), &accs[b]);
    }
  } else {
    std::atomic<long> next_block{0};
    auto worker = [&]() {
      for (;;) {
        const long b = next_block.fetch_add(1);
        if (b >= blocks) return;
        run_block(config, plan, c0_diag, b * kBlockSize,
                  std::min(config.trajectories, (b + 1) * kBlockSize), &accs[b]);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Fixed pairwise tree reduction over block index.
  std::size_t active = accs.size();
  while (active > 1) {
    std::size_t out = 0;
    for (std::size_t i = 0; i + 1 < active; i += 2) {
      accs[i].merge(accs[i + 1]);
      if (out != i) accs[out] = std::move(accs[i]);
      ++out;
    }
    if (active % 2 == 1) {
      if (out != active - 1) accs[out] = std::move(accs[active - 1]);
      ++out;
    }
    active = out;
  }
  const BlockAccumulator& total = accs[0];
  const double count = static_cast<double>(total.count);
  const double denom = std::max(1.0, count - 1.0);

  SimulationResult result;
  result.trajectories = total.count;
  result.rounds.resize(rounds);
  for (int t = 0; t < rounds; ++t) {
    RoundMoments& rm = result.rounds[t];
    rm.t = t;
    EmpiricalMoments& em = rm.moments;
    em.mean_error = total.sum_err[t] / count;
    em.cov_error =
        (total.sum_outer[t] - count * (em.mean_error * em.mean_error.transpose())) / denom;
    em.cov_stderr.resize(n, n);
    em.mean_stderr.resize(n);
    for (int i = 0; i < n; ++i) {
      em.mean_stderr(i) = std::sqrt(std::max(0.0, em.cov_error(i, i)) / count);
      for (int j = 0; j < n; ++j) {
        const double v = em.cov_error(i, i) * em.cov_error(j, j) +
                         em.cov_error(i, j) * em.cov_error(i, j);
        em.cov_stderr(i, j) = std::sqrt(std::max(0.0, v) / count);
      }
    }
    if (config.model == DynamicsModel::penultimate && t >= 1) {
      rm.has_memory_stats = true;
      rm.memory_mean_error = total.sum_mem[t] / count;
      const double var =
          (total.sum_mem_sq[t] - count * rm.memory_mean_error * rm.memory_mean_error) / denom;
      rm.memory_mean_stderr = std::sqrt(std::max(0.0, var) / count);
    }
  }
  return result;
}

UnbiasednessReport unbiasedness_check(const SimulationConfig& config) {
  const SimulationResult sim = simulate(config);
  UnbiasednessReport report;
  report.all_ok = true;
  for (const auto& rm : sim.rounds) {
    UnbiasednessRound row;
    row.t = rm.t;
    row.mean_error = rm.moments.mean_error;
    row.mean_stderr = rm.moments.mean_stderr;
    row.within_4se =
        (row.mean_error.cwiseAbs().array() <= 4.0 * row.mean_stderr.array()).all();
    report.all_ok = report.all_ok && row.within_4se;
    report.rounds.push_back(std::move(row));
  }
  return report;
}

}  // namespace sociallearn
