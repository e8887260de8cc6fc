#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hetgp/bench.hpp"
#include "hetgp/interpolation.hpp"
#include "hetgp/maze_gen.hpp"
#include "hetgp/optimizer.hpp"
#include "hetgp/svg.hpp"

namespace {

using namespace hetgp;

struct CommonOptions {
  ProblemParams problem;
  OptimizerConfig optimizer;
  CostParams cost;
  bool deterministic = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--k-samples", optimizer.k_samples, "samples per iteration (K)");
    cmd->add_option("--m-elites", optimizer.m_elites, "elites per iteration (M)");
    cmd->add_option("--t-max", optimizer.time_budget, "wall-clock budget in seconds");
    cmd->add_option("--max-iters", optimizer.max_iters, "iteration cap");
    cmd->add_option("--steps-per-interval", optimizer.steps_per_interval,
                    "interpolated cost checks per support interval (S)");
    cmd->add_option("--seed", optimizer.seed, "base RNG seed")->envname("HETGP_SEED");
    cmd->add_option("--workers", optimizer.worker_count, "worker threads (0 = hardware)");
    cmd->add_flag("--deterministic", deterministic,
                  "replace the wall-clock budget with the iteration cap");
    cmd->add_option("--t-total", problem.t_total, "trajectory duration in seconds");
    cmd->add_option("--n-support", problem.n_support, "number of support states");
    cmd->add_option("--sigma0-sq", problem.sigma0_sq, "start anchor variance");
    cmd->add_option("--sigmaN-sq", problem.sigmaN_sq, "goal anchor variance");
    cmd->add_option("--constant-qc", problem.constant_qc,
                    "q_c of the constant arm (default: equal total power)");
    cmd->add_option("--robot-radius", cost.robot_radius, "robot radius in meters");
    cmd->add_option("--safety-margin", cost.safety_margin, "hinge safety margin in meters");
  }

  OptimizerConfig finalized_optimizer() const {
    OptimizerConfig opt = optimizer;
    if (deterministic) opt.time_budget = 0.0;
    return opt;
  }
};

int cmd_generate(int size, int count, uint64_t seed, const std::filesystem::path& out_dir,
                 const std::string& kind, const MazeDefaults& defaults, double cell_size,
                 double robot_radius) {
  std::filesystem::create_directories(out_dir);
  int written = 0;
  for (int i = 0; i < count; ++i) {
    const uint64_t env_seed = seed + static_cast<uint64_t>(i);
    std::ostringstream name;
    name << (kind == "scene" ? "scene_" : "maze_") << std::setw(4) << std::setfill('0') << i + 1;
    const auto dir = out_dir / name.str();
    try {
      if (kind == "scene") {
        save_maze(make_obstructed_scene(env_seed), dir);
      } else {
        MazeSpec spec = defaults.spec_for(size, env_seed);
        if (cell_size > 0.0) spec.cell_size = cell_size;
        save_maze(inflate(wilson_maze(size, env_seed), spec, robot_radius), dir);
      }
      ++written;
    } catch (const std::exception& ex) {
      std::cerr << "skipping " << dir << ": " << ex.what() << '\n';
    }
  }
  std::cout << "wrote " << written << " environments to " << out_dir << '\n';
  return written == count ? 0 : 1;
}

void plot_plan(const std::filesystem::path& path, const MazeEnvironment& env,
               const std::string& arm, const ProblemParams& params, const OptimizerConfig& opt,
               const PlanResult& result) {
  const auto& grid = env.occupancy;
  SvgWriter svg(grid.origin_x, grid.origin_y, grid.origin_x + grid.width * grid.resolution,
                grid.origin_y + grid.height * grid.resolution);
  draw_occupancy(svg, grid);

  const NoiseProfile noise = params.profile(arm);
  if (!result.final_elites.empty()) {
    const InterpTable table(result.final_elites.front().grid, noise,
                            result.final_elites.front().dim, opt.steps_per_interval);
    for (const auto& elite : result.final_elites)
      draw_trajectory(svg, densify(elite, table), "#7fbf7f", 1.0, 0.6);
  }
  if (result.best.values.size() > 0) {
    const InterpTable table(result.best.grid, noise, result.best.dim, opt.steps_per_interval);
    draw_trajectory(svg, densify(result.best, table), result.solved ? "#1f4fff" : "#bf3f3f", 2.5);
  }
  svg.circle(env.start.x(), env.start.y(), 0.35, "#2a9d2a");
  svg.circle(env.goal.x(), env.goal.y(), 0.35, "#d23a3a");
  svg.write(path);
}

int cmd_plan(const std::filesystem::path& maze_dir, const std::string& arm,
             const CommonOptions& common, const std::filesystem::path& result_path,
             const std::filesystem::path& plot_path) {
  const MazeEnvironment env = load_maze(maze_dir);
  OptimizerConfig opt = common.finalized_optimizer();
  if (!plot_path.empty()) opt.record_history = true;

  const GpPrior prior = prior_for(env, common.problem.profile(arm), common.problem);
  const SignedDistanceField sdf = build_sdf(env.occupancy);
  const PlanResult result = plan(prior, sdf, common.cost, opt);

  std::cout << (result.solved ? "solved" : "failed") << " after " << result.iterations
            << " iterations, " << result.samples_evaluated << " samples";
  if (!opt.deterministic())
    std::cout << ", " << std::fixed << std::setprecision(1) << result.elapsed_seconds * 1e3
              << " ms";
  std::cout << " (best cost " << std::setprecision(6) << result.best_cost << ")\n";

  if (!result_path.empty())
    write_result_json(result_path, env, arm, common.problem, opt, common.cost, result);
  if (!plot_path.empty()) plot_plan(plot_path, env, arm, common.problem, opt, result);
  return result.solved ? 0 : 2;
}

int cmd_plot_prior(const std::filesystem::path& out_path, const ProblemParams& params,
                   int n_samples, uint64_t seed) {
  const TimeGrid grid(params.t_total, params.n_support);
  const Vector start = Vector::Zero(1);
  const Vector goal = Vector::Zero(1);

  struct Panel {
    std::string label;
    NoiseProfile noise;
  };
  const std::vector<Panel> panels{{"constant q_c (equal power)",
                                   NoiseProfile::matched_constant(params.t_total)},
                                  {"parabolic q_c", NoiseProfile::parabolic(params.t_total)}};

  // Collect densified sample fans for both profiles on a shared y scale.
  constexpr int kPlotSteps = 8;
  std::vector<std::vector<std::vector<std::pair<double, double>>>> fans;
  double y_max = 1.0;
  for (const auto& panel : panels) {
    const GpPrior prior =
        build_prior(start, goal, grid, panel.noise, params.sigma0_sq, params.sigmaN_sq);
    const InterpTable table(grid, panel.noise, 1, kPlotSteps);
    const auto batch = sample_batch(factorize(prior), prior.mean, n_samples, seed);
    std::vector<std::vector<std::pair<double, double>>> fan;
    for (const auto& traj : batch) {
      const Trajectory dense = densify(traj, table);
      std::vector<std::pair<double, double>> curve;
      for (int i = 0; i < dense.grid.n_support(); ++i) {
        const double p = position_block(dense.values, i, 1)[0];
        curve.emplace_back(dense.grid.time(i), p);
        y_max = std::max(y_max, std::abs(p));
      }
      fan.push_back(std::move(curve));
    }
    fans.push_back(std::move(fan));
  }

  const double T = params.t_total;
  const double gap = 0.15 * T;
  const double panel_h = 2.0 * y_max;
  SvgWriter svg(-gap, -y_max - 0.18 * panel_h, 3 * T + 3 * gap, y_max + 0.12 * panel_h, 1200);

  const char* colors[2] = {"#4878cf", "#d65f5f"};
  for (size_t p = 0; p < fans.size(); ++p) {
    const double off = p * (T + gap);
    svg.rect(off, -y_max, T, panel_h, "#f5f5f5");
    svg.line(off, 0.0, off + T, 0.0, "#999", 1.0);
    for (const auto& curve : fans[p]) {
      std::vector<std::pair<double, double>> shifted;
      shifted.reserve(curve.size());
      for (const auto& [t, y] : curve) shifted.emplace_back(off + t, std::clamp(y, -y_max, y_max));
      svg.polyline(shifted, colors[p], 1.0, 0.55);
    }
    svg.text(off, -y_max - 0.1 * panel_h, panels[p].label);
  }

  // q_c(t) curve, normalized into the third panel.
  const double off = 2 * (T + gap);
  const NoiseProfile parabolic = NoiseProfile::parabolic(T);
  const double q_max = parabolic(0.0);
  svg.rect(off, -y_max, T, panel_h, "#f5f5f5");
  std::vector<std::pair<double, double>> q_curve;
  for (int i = 0; i <= 200; ++i) {
    const double t = T * i / 200.0;
    q_curve.emplace_back(off + t, -y_max + panel_h * parabolic(t) / q_max);
  }
  svg.polyline(q_curve, "#2a9d2a", 1.8);
  std::ostringstream label;
  label << "q_c(t) parabolic, peak " << q_max;
  svg.text(off, -y_max - 0.1 * panel_h, label.str());

  svg.write(out_path);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic GP trajectory planning benchmark"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::ignore_all);

  // generate
  auto* generate = app.add_subcommand("generate", "write a maze or scene corpus");
  int gen_size = 3, gen_count = 10;
  uint64_t gen_seed = 1;
  std::string gen_kind = "maze";
  std::filesystem::path gen_out = "corpus";
  MazeDefaults maze_defaults;
  double gen_cell_size = 0.0, gen_robot_radius = 0.5;
  generate->add_option("--size", gen_size, "logical maze size n (n x n)");
  generate->add_option("--count", gen_count, "number of environments");
  generate->add_option("--seed", gen_seed, "first seed; environment i uses seed + i")
      ->envname("HETGP_SEED");
  generate->add_option("--out", gen_out, "output corpus directory");
  generate->add_option("--kind", gen_kind, "maze | scene")
      ->check(CLI::IsMember({"maze", "scene"}));
  generate->add_option("--extent", maze_defaults.extent, "outer maze dimension in meters");
  generate->add_option("--cell-size", gen_cell_size,
                       "meters per maze cell (default extent / size)");
  generate->add_option("--wall", maze_defaults.wall_thickness, "wall thickness in meters");
  generate->add_option("--resolution", maze_defaults.resolution, "raster resolution");
  generate->add_option("--robot-radius", gen_robot_radius, "clearance check radius");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "plan a single stored environment");
  std::filesystem::path plan_maze, plan_result = "result.json", plan_plot;
  std::string plan_arm = "parabolic";
  CommonOptions plan_common;
  plan_cmd->add_option("--maze", plan_maze, "environment directory")->required();
  plan_cmd->add_option("--arm", plan_arm, "noise profile: parabolic | constant");
  plan_cmd->add_option("--out", plan_result, "result JSON path (empty to skip)");
  plan_cmd->add_option("--plot", plan_plot, "write an SVG rendering to this path");
  plan_common.attach(plan_cmd);

  // campaign
  auto* campaign_cmd = app.add_subcommand("campaign", "run arms over a corpus, write CSVs");
  CampaignConfig campaign;
  std::string arms_csv = "parabolic";
  CommonOptions campaign_common;
  campaign_cmd->add_option("--corpus", campaign.corpus_dir, "corpus directory")->required();
  campaign_cmd->add_option("--out", campaign.out_dir, "output directory")->required();
  campaign_cmd->add_option("--arms", arms_csv, "comma-separated arms, e.g. parabolic,constant");
  campaign_cmd->add_flag("--parallel-corpus", campaign.parallel_corpus,
                         "run mazes concurrently (timings not comparable)");
  campaign_common.attach(campaign_cmd);

  // plot-prior
  auto* plot_prior_cmd = app.add_subcommand("plot-prior", "render prior sample fans and q_c(t)");
  std::filesystem::path prior_out = "prior.svg";
  int prior_samples = 30;
  CommonOptions prior_common;
  plot_prior_cmd->add_option("--out", prior_out, "output SVG path");
  plot_prior_cmd->add_option("--samples", prior_samples, "samples per fan");
  prior_common.attach(plot_prior_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed())
      return cmd_generate(gen_size, gen_count, gen_seed, gen_out, gen_kind, maze_defaults,
                          gen_cell_size, gen_robot_radius);
    if (plan_cmd->parsed())
      return cmd_plan(plan_maze, plan_arm, plan_common, plan_result, plan_plot);
    if (campaign_cmd->parsed()) {
      campaign.problem = campaign_common.problem;
      campaign.optimizer = campaign_common.finalized_optimizer();
      campaign.cost = campaign_common.cost;
      std::stringstream arms(arms_csv);
      campaign.arms.clear();
      for (std::string arm; std::getline(arms, arm, ',');)
        if (!arm.empty()) campaign.arms.push_back(arm);
      run_campaign(campaign);
      return 0;
    }
    if (plot_prior_cmd->parsed())
      return cmd_plot_prior(prior_out, prior_common.problem, prior_samples,
                            prior_common.optimizer.seed);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
