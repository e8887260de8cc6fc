#include "hetgp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hetgp/interpolation.hpp"
#include "hetgp/rng.hpp"

namespace hetgp {

NoiseProfile ProblemParams::profile(const std::string& arm) const {
  if (arm == "parabolic") return NoiseProfile::parabolic(t_total);
  if (arm == "constant")
    return constant_qc > 0.0 ? NoiseProfile::constant(constant_qc)
                             : NoiseProfile::matched_constant(t_total);
  throw std::invalid_argument("unknown arm '" + arm + "' (expected parabolic or constant)");
}

MazeSpec MazeDefaults::spec_for(int n, uint64_t seed) const {
  MazeSpec spec;
  spec.grid_cells = n;
  spec.cell_size = extent / n;
  spec.wall_thickness = wall_thickness;
  spec.resolution = resolution;
  spec.seed = seed;
  return spec;
}

MazeEnvironment make_obstructed_scene(uint64_t seed) {
  constexpr double kExtent = 30.0;
  constexpr double kRes = 0.05;
  constexpr double kWall = 0.2;
  Rng rng(seed, 0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

  MazeEnvironment env;
  env.spec.grid_cells = 0;  // not a maze
  env.spec.seed = seed;
  env.spec.cell_size = kExtent;
  env.spec.wall_thickness = kWall;
  env.spec.resolution = kRes;
  const int cells = static_cast<int>(std::lround(kExtent / kRes));
  env.occupancy = OccupancyGrid::make(cells, cells, kRes, 0.0, 0.0);

  auto& grid = env.occupancy;
  const auto paint = [&](double x0, double x1, double y0, double y1) {
    for (int iy = 0; iy < grid.height; ++iy) {
      const double cy = grid.cell_center_y(iy);
      if (cy < y0 || cy > y1) continue;
      for (int ix = 0; ix < grid.width; ++ix) {
        const double cx = grid.cell_center_x(ix);
        if (cx >= x0 && cx <= x1) grid.set(ix, iy, true);
      }
    }
  };
  paint(0, kExtent, 0, kWall);
  paint(0, kExtent, kExtent - kWall, kExtent);
  paint(0, kWall, 0, kExtent);
  paint(kExtent - kWall, kExtent, 0, kExtent);

  const double sy = 15.0 + uniform(-2.0, 2.0);
  const double gy = 15.0 + uniform(-2.0, 2.0);
  env.start = Eigen::Vector2d(4.0, sy);
  env.goal = Eigen::Vector2d(26.0, gy);

  // One block just ahead of each endpoint: long on one side of the line of
  // sight, short on the other, so the detour has to happen near the endpoint.
  const auto block = [&](double face_x, double center_y, bool ahead) {
    const double thickness = uniform(1.0, 2.0);
    const double long_side = uniform(5.0, 8.0);
    const double short_side = uniform(1.5, 2.5);
    const bool long_below = rng.below(2) == 1;
    const double x0 = ahead ? face_x : face_x - thickness;
    const double x1 = ahead ? face_x + thickness : face_x;
    const double y0 = center_y - (long_below ? long_side : short_side);
    const double y1 = center_y + (long_below ? short_side : long_side);
    paint(x0, x1, y0, y1);
  };
  block(env.start.x() + uniform(0.9, 1.4), sy, true);
  block(env.goal.x() - uniform(0.9, 1.4), gy, false);
  return env;
}

GpPrior prior_for(const MazeEnvironment& env, const NoiseProfile& noise,
                  const ProblemParams& params) {
  const TimeGrid grid(params.t_total, params.n_support);
  return build_prior(env.start, env.goal, grid, noise, params.sigma0_sq, params.sigmaN_sq);
}

PlanResult plan_environment(const MazeEnvironment& env, const std::string& arm,
                            const ProblemParams& params, const OptimizerConfig& opt,
                            const CostParams& cost) {
  const GpPrior prior = prior_for(env, params.profile(arm), params);
  const SignedDistanceField sdf = build_sdf(env.occupancy);
  return plan(prior, sdf, cost, opt, nullptr);
}

namespace {

std::vector<std::filesystem::path> corpus_entries(const std::filesystem::path& corpus_dir) {
  std::vector<std::filesystem::path> dirs;
  if (!std::filesystem::is_directory(corpus_dir))
    throw std::runtime_error("corpus directory not found: " + corpus_dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir))
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "meta.json"))
      dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty())
    throw std::runtime_error("corpus is empty: " + corpus_dir.string());
  return dirs;
}

std::string format_ms(double ms, bool deterministic) {
  if (deterministic) return "";
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << ms;
  return out.str();
}

}  // namespace

std::string raw_csv(const std::vector<RunRecord>& records, bool deterministic) {
  std::ostringstream out;
  out << "arm,maze_id,maze_size,seed,status,solved,cost,iterations,samples_evaluated,elapsed_ms\n";
  for (const auto& r : records) {
    out << r.arm << ',' << r.maze_id << ',' << r.maze_size << ',' << r.seed << ','
        << (r.ok ? "ok" : "error") << ',' << (r.solved ? 1 : 0) << ',' << std::setprecision(17)
        << r.cost << ',' << r.iterations << ',' << r.samples_evaluated << ','
        << format_ms(r.elapsed_ms, deterministic) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows, bool deterministic) {
  std::ostringstream out;
  out << "arm,maze_size,k,t_max_ms,success_rate_pct,mean_ms,median_ms,n\n";
  for (const auto& r : rows) {
    out << r.arm << ',' << r.maze_size << ',' << r.k << ',' << r.t_max_ms << ','
        << std::fixed << std::setprecision(1) << r.success_rate_pct << ','
        << format_ms(r.mean_ms, deterministic) << ',' << format_ms(r.median_ms, deterministic)
        << ',' << r.n << '\n';
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

CampaignReport run_campaign(const CampaignConfig& config) {
  const auto entries = corpus_entries(config.corpus_dir);
  const bool deterministic = config.optimizer.deterministic();

  CampaignReport report;
  report.raw.resize(entries.size() * config.arms.size());

  const auto run_one = [&](size_t arm_idx, size_t maze_idx) {
    const std::string& arm = config.arms[arm_idx];
    RunRecord& rec = report.raw[arm_idx * entries.size() + maze_idx];
    rec.arm = arm;
    rec.maze_id = entries[maze_idx].filename().string();
    try {
      const MazeEnvironment env = load_maze(entries[maze_idx]);
      rec.maze_size = env.spec.grid_cells;
      rec.seed = env.spec.seed;
      const PlanResult result = plan_environment(env, arm, config.problem, config.optimizer,
                                                 config.cost);
      rec.solved = result.solved;
      rec.cost = result.best_cost;
      rec.iterations = result.iterations;
      rec.samples_evaluated = result.samples_evaluated;
      rec.elapsed_ms = result.elapsed_seconds * 1e3;
    } catch (const std::exception& ex) {
      rec.ok = false;
      rec.error = ex.what();
    }
  };

  if (config.parallel_corpus) {
    std::cout << "note: --parallel-corpus active, reported timings are not comparable\n";
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    const size_t total = entries.size() * config.arms.size();
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          run_one(i / entries.size(), i % entries.size());
      });
    for (auto& t : pool) t.join();
  } else {
    for (size_t a = 0; a < config.arms.size(); ++a)
      for (size_t m = 0; m < entries.size(); ++m) run_one(a, m);
  }

  // Aggregate per (arm, maze size).
  std::map<std::pair<std::string, int>, std::vector<const RunRecord*>> groups;
  for (const auto& rec : report.raw) groups[{rec.arm, rec.maze_size}].push_back(&rec);
  for (const auto& [key, recs] : groups) {
    SummaryRow row;
    row.arm = key.first;
    row.maze_size = key.second;
    row.k = config.optimizer.k_samples;
    row.t_max_ms = deterministic ? 0.0 : config.optimizer.time_budget * 1e3;
    row.n = static_cast<int>(recs.size());
    int solved = 0;
    std::vector<double> times;
    for (const auto* r : recs) {
      solved += r->solved ? 1 : 0;
      if (r->ok) times.push_back(r->elapsed_ms);
    }
    row.success_rate_pct = 100.0 * solved / static_cast<double>(recs.size());
    if (!times.empty()) {
      row.mean_ms = 0.0;
      for (double t : times) row.mean_ms += t;
      row.mean_ms /= static_cast<double>(times.size());
      std::sort(times.begin(), times.end());
      const size_t mid = times.size() / 2;
      row.median_ms =
          times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    }
    report.summary.push_back(row);
  }

  std::filesystem::create_directories(config.out_dir);
  std::ofstream raw_out(config.out_dir / "raw.csv");
  raw_out << raw_csv(report.raw, deterministic);
  std::ofstream summary_out(config.out_dir / "summary.csv");
  summary_out << summary_csv(report.summary, deterministic);

  std::cout << "arm         size   K     t_max   success%   mean ms   median ms   n\n";
  for (const auto& r : report.summary) {
    std::cout << std::left << std::setw(12) << r.arm << std::setw(7) << r.maze_size
              << std::setw(6) << r.k << std::setw(8) << r.t_max_ms << std::setw(11) << std::fixed
              << std::setprecision(1) << r.success_rate_pct << std::setw(10)
              << std::setprecision(1) << r.mean_ms << std::setw(12) << r.median_ms << r.n << '\n';
    std::cout.unsetf(std::ios::fixed);
  }
  return report;
}

void write_result_json(const std::filesystem::path& path, const MazeEnvironment& env,
                       const std::string& arm, const ProblemParams& params,
                       const OptimizerConfig& opt, const CostParams& cost,
                       const PlanResult& result) {
  nlohmann::json j;
  j["arm"] = arm;
  j["config"] = {{"k_samples", opt.k_samples},
                 {"m_elites", opt.m_elites},
                 {"time_budget_s", opt.time_budget},
                 {"max_iters", opt.max_iters},
                 {"steps_per_interval", opt.steps_per_interval},
                 {"seed", opt.seed},
                 {"worker_count", opt.worker_count},
                 {"t_total", params.t_total},
                 {"n_support", params.n_support},
                 {"sigma0_sq", params.sigma0_sq},
                 {"sigmaN_sq", params.sigmaN_sq},
                 {"robot_radius", cost.robot_radius},
                 {"safety_margin", cost.safety_margin}};
  j["environment"] = {{"seed", env.spec.seed},
                      {"n", env.spec.grid_cells},
                      {"start", {env.start.x(), env.start.y()}},
                      {"goal", {env.goal.x(), env.goal.y()}}};
  j["outcome"] = {{"solved", result.solved},
                  {"best_cost", result.best_cost},
                  {"iterations", result.iterations},
                  {"samples_evaluated", result.samples_evaluated}};
  if (!opt.deterministic()) j["outcome"]["elapsed_ms"] = result.elapsed_seconds * 1e3;

  if (result.best.values.size() > 0) {
    const InterpTable table(result.best.grid, params.profile(arm), result.best.dim,
                            opt.steps_per_interval);
    const Trajectory dense = densify(result.best, table);
    std::vector<double> xs, ys;
    xs.reserve(dense.grid.n_support());
    ys.reserve(dense.grid.n_support());
    for (int i = 0; i < dense.grid.n_support(); ++i) {
      const auto p = position_block(dense.values, i, dense.dim);
      xs.push_back(p[0]);
      ys.push_back(p[1]);
    }
    j["trajectory"] = {{"x", xs}, {"y", ys}};
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace hetgp
