#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hetgp/maze_gen.hpp"
#include "hetgp/optimizer.hpp"

namespace hetgp {

/// Benchmark problems share one trajectory parameterization: the paper-scale
/// 20 s horizon split into 10 support intervals.
struct ProblemParams {
  double t_total = 20.0;
  int n_support = 11;  // support states 0..N with N = 10
  double sigma0_sq = 1e-6;
  double sigmaN_sq = 1e-6;
  /// Power of the homoscedastic comparison arm; <= 0 selects the
  /// equal-total-power match t_total^2 / 12.
  double constant_qc = 0.0;

  NoiseProfile profile(const std::string& arm) const;
};

/// Maze benchmark geometry. Mazes of every logical size inflate to the same
/// physical footprint, so finer grids mean narrower corridors.
struct MazeDefaults {
  double extent = 30.0;  // outer maze dimension, meters
  double wall_thickness = 0.2;
  double resolution = 0.05;

  MazeSpec spec_for(int n, uint64_t seed) const;
};

/// A start/goal-obstructed open scene: blocks adjacent to both endpoints
/// force early and late detours while the middle stays free.
MazeEnvironment make_obstructed_scene(uint64_t seed);

struct CampaignConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path out_dir;
  std::vector<std::string> arms{"parabolic"};
  ProblemParams problem;
  OptimizerConfig optimizer;
  CostParams cost;
  bool parallel_corpus = false;
};

struct RunRecord {
  std::string arm;
  std::string maze_id;
  int maze_size = 0;
  uint64_t seed = 0;
  bool ok = true;  // row valid; false records a per-maze failure
  std::string error;
  bool solved = false;
  double cost = 0.0;
  int iterations = 0;
  long samples_evaluated = 0;
  double elapsed_ms = 0.0;
};

struct SummaryRow {
  std::string arm;
  int maze_size = 0;
  int k = 0;
  double t_max_ms = 0.0;
  double success_rate_pct = 0.0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  int n = 0;
};

struct CampaignReport {
  std::vector<RunRecord> raw;
  std::vector<SummaryRow> summary;
};

/// Build the goal-conditioned prior for one environment and arm.
GpPrior prior_for(const MazeEnvironment& env, const NoiseProfile& noise,
                  const ProblemParams& params);

/// Plan one stored environment; optionally writes <out>/result.json and an
/// SVG rendering.
PlanResult plan_environment(const MazeEnvironment& env, const std::string& arm,
                            const ProblemParams& params, const OptimizerConfig& opt,
                            const CostParams& cost);

/// Run every arm over every corpus directory; writes raw.csv and summary.csv
/// under config.out_dir and returns the same data. In deterministic mode
/// (time budget disabled) the timing columns are left empty so reruns are
/// byte-identical.
CampaignReport run_campaign(const CampaignConfig& config);

/// CSV serialization used by run_campaign (exposed for tests).
std::string raw_csv(const std::vector<RunRecord>& records, bool deterministic);
std::string summary_csv(const std::vector<SummaryRow>& rows, bool deterministic);

/// Result-file schema for a single planning run.
void write_result_json(const std::filesystem::path& path, const MazeEnvironment& env,
                       const std::string& arm, const ProblemParams& params,
                       const OptimizerConfig& opt, const CostParams& cost,
                       const PlanResult& result);

}  // namespace hetgp
