#include "hetgp/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace hetgp {

void OptimizerConfig::validate() const {
  if (m_elites < 1 || m_elites > k_samples)
    throw std::invalid_argument("OptimizerConfig: need 1 <= m_elites <= k_samples");
  if (time_budget <= 0.0 && max_iters < 1)
    throw std::invalid_argument("OptimizerConfig: need a positive time budget or max_iters >= 1");
  if (steps_per_interval < 1)
    throw std::invalid_argument("OptimizerConfig: steps_per_interval must be >= 1");
}

std::vector<int> select_elites(const std::vector<double>& costs, int m) {
  if (m < 1 || m > static_cast<int>(costs.size()))
    throw std::invalid_argument("select_elites: need 1 <= m <= batch size");
  std::vector<int> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + m, order.end(), [&](int a, int b) {
    return costs[a] != costs[b] ? costs[a] < costs[b] : a < b;
  });
  order.resize(m);
  return order;
}

Vector elite_weighted_mean(const std::vector<Trajectory>& elites,
                           const std::vector<double>& costs) {
  if (elites.empty() || elites.size() != costs.size())
    throw std::invalid_argument("elite_weighted_mean: need matching non-empty elites/costs");

  Vector accum = Vector::Zero(elites.front().values.size());
  double weight_sum = 0.0;
  for (size_t m = 0; m < elites.size(); ++m) {
    if (costs[m] <= kZeroCostTol)
      throw std::logic_error("elite_weighted_mean: zero-cost elite reached weighting");
    const double w = 1.0 / costs[m];
    accum += w * elites[m].values;
    weight_sum += w;
  }
  return accum / weight_sum;
}

namespace {

using Clock = std::chrono::steady_clock;

struct BatchOutcome {
  std::vector<Trajectory> samples;
  std::vector<double> costs;
  std::vector<uint8_t> evaluated;
  bool deadline_hit = false;
};

// Sample-and-evaluate the batch; sample 0 is the current mean. Work is
// chunked over workers; each sample draws from its own RNG substream, so the
// partition cannot change the numbers.
void run_batch(const PrecisionFactor& factor, const Vector& mean, const SignedDistanceField& sdf,
               const CostParams& params, const InterpTable& table, const OptimizerConfig& config,
               uint64_t stream_base, std::optional<Clock::time_point> deadline,
               BatchOutcome& out) {
  const int k_total = config.k_samples;
  out.samples.assign(k_total, Trajectory{});
  out.costs.assign(k_total, 0.0);
  out.evaluated.assign(k_total, 0);
  std::atomic<bool> expired{false};

  auto work = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      if (deadline) {
        if (expired.load(std::memory_order_relaxed)) return;
        if (Clock::now() >= *deadline) {
          expired.store(true, std::memory_order_relaxed);
          return;
        }
      }
      out.samples[k] =
          k == 0 ? Trajectory{factor.grid, factor.dim, mean}
                 : sample(factor, mean,
                          standard_normal_vector(mean.size(), config.seed, stream_base + k));
      out.costs[k] = trajectory_cost(out.samples[k], sdf, params, table);
      out.evaluated[k] = 1;
    }
  };

  int workers = config.worker_count > 0 ? config.worker_count
                                        : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, k_total);
  if (workers == 1) {
    work(0, k_total);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const int begin = static_cast<int>(static_cast<long>(k_total) * w / workers);
      const int end = static_cast<int>(static_cast<long>(k_total) * (w + 1) / workers);
      pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  out.deadline_hit = expired.load();
}

}  // namespace

PlanResult plan(const GpPrior& prior, const SignedDistanceField& sdf, const CostParams& params,
                const OptimizerConfig& config, const IterationObserver& observer) {
  config.validate();

  // Factorized once; every iteration samples through this same object.
  const PrecisionFactor factor = factorize(prior);
  const InterpTable table(prior.grid, prior.noise, prior.dim, config.steps_per_interval);

  const auto t_start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (!config.deterministic())
    deadline = t_start + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(config.time_budget));

  PlanResult result;
  result.best_cost = std::numeric_limits<double>::infinity();
  Vector mean = prior.mean;
  if (config.record_history) result.mean_history.push_back(mean);

  BatchOutcome batch;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    run_batch(factor, mean, sdf, params, table, config,
              static_cast<uint64_t>(iter) * config.k_samples, deadline, batch);
    result.iterations = iter + 1;
    for (uint8_t e : batch.evaluated) result.samples_evaluated += e;

    // First zero-cost sample in batch order wins; sample 0 is the mean, so a
    // feasible mean terminates immediately.
    bool solved = false;
    for (int k = 0; k < config.k_samples; ++k) {
      if (!batch.evaluated[k]) continue;
      if (batch.costs[k] <= kZeroCostTol) {
        result.solved = true;
        result.best = batch.samples[k];
        result.best_cost = 0.0;
        solved = true;
        break;
      }
      if (batch.costs[k] < result.best_cost) {
        result.best_cost = batch.costs[k];
        result.best = batch.samples[k];
      }
    }
    if (solved) break;
    if (batch.deadline_hit) break;

    const std::vector<int> order = select_elites(batch.costs, config.m_elites);
    std::vector<Trajectory> elites;
    std::vector<double> elite_costs;
    elites.reserve(order.size());
    elite_costs.reserve(order.size());
    for (int idx : order) {
      elites.push_back(batch.samples[idx]);
      elite_costs.push_back(batch.costs[idx]);
    }
    mean = elite_weighted_mean(elites, elite_costs);

    if (config.record_history) {
      result.mean_history.push_back(mean);
      result.final_elites = std::move(elites);
    }
    if (observer)
      observer(IterationSnapshot{iter, &factor, result.best_cost, &mean});
    if (deadline && Clock::now() >= *deadline) break;
  }

  if (result.best.values.size() == 0) {
    // Budget expired before a single evaluation; report the mean itself.
    result.best = Trajectory{factor.grid, factor.dim, mean};
    result.best_cost = trajectory_cost(result.best, sdf, params, table);
    result.solved = result.best_cost <= kZeroCostTol;
    if (result.solved) result.best_cost = 0.0;
  }

  result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t_start).count();
  return result;
}

}  // namespace hetgp
