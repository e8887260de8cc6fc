#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hetgp/environment.hpp"
#include "hetgp/gp_prior.hpp"
#include "hetgp/interpolation.hpp"
#include "hetgp/sampler.hpp"

namespace hetgp {

struct OptimizerConfig {
  int k_samples = 400;
  int m_elites = 3;
  double time_budget = 1.0;     // seconds wall clock; <= 0 disables (deterministic mode)
  int max_iters = 1000;
  int steps_per_interval = 5;
  uint64_t seed = 0;
  int worker_count = 0;         // 0 = hardware concurrency
  bool record_history = false;  // keep mean snapshots and final elites

  void validate() const;
  bool deterministic() const { return time_budget <= 0.0; }
};

struct PlanResult {
  bool solved = false;
  Trajectory best;  // the collision-free solution when solved, else best seen
  double best_cost = 0.0;
  int iterations = 0;
  long samples_evaluated = 0;
  double elapsed_seconds = 0.0;
  std::vector<Vector> mean_history;       // populated when record_history
  std::vector<Trajectory> final_elites;   // elites of the last completed iteration
};

/// Per-iteration view for tests and tracing. The factor pointer is stable
/// across iterations: the covariance is factorized once and never updated.
struct IterationSnapshot {
  int iteration = 0;
  const PrecisionFactor* factor = nullptr;
  double best_cost_so_far = 0.0;
  const Vector* mean = nullptr;
};
using IterationObserver = std::function<void(const IterationSnapshot&)>;

/// Indices of the m lowest costs, ties broken by lower index.
std::vector<int> select_elites(const std::vector<double>& costs, int m);

/// Cost-weighted average of elite trajectories, weights w = 1/cost per
/// support state. All costs must be strictly positive; a zero-cost elite
/// would have terminated the search before selection.
Vector elite_weighted_mean(const std::vector<Trajectory>& elites,
                           const std::vector<double>& costs);

/// Stochastic trajectory optimization: sample K trajectories around the
/// current mean (the mean itself rides along as sample 0), evaluate collision
/// costs in parallel, return the first zero-cost sample, otherwise move the
/// mean to the weighted average of the M cheapest samples and repeat. The
/// sampling covariance stays fixed throughout.
PlanResult plan(const GpPrior& prior, const SignedDistanceField& sdf, const CostParams& params,
                const OptimizerConfig& config, const IterationObserver& observer = nullptr);

}  // namespace hetgp
