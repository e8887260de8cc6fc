#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hetgp/bench.hpp"
#include "hetgp/svg.hpp"

using namespace hetgp;

namespace {

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("maze defaults inflate every size to the same footprint") {
  const MazeDefaults defaults;
  for (int n : {3, 4, 5}) {
    const MazeSpec spec = defaults.spec_for(n, 1);
    CHECK(spec.cell_size * n == doctest::Approx(defaults.extent));
    CHECK(spec.grid_cells == n);
  }
}

TEST_CASE("obstructed scenes are deterministic, obstructed, and solvable") {
  const MazeEnvironment a = make_obstructed_scene(42);
  const MazeEnvironment b = make_obstructed_scene(42);
  CHECK(a.occupancy.cells == b.occupancy.cells);
  CHECK(a.start == b.start);
  CHECK(a.goal == b.goal);

  for (uint64_t seed : {1u, 2u, 3u, 4u}) {
    const MazeEnvironment env = make_obstructed_scene(seed);
    const SignedDistanceField sdf = build_sdf(env.occupancy);
    CHECK(query_distance(sdf, env.start.x(), env.start.y()) > 0.6);
    CHECK(query_distance(sdf, env.goal.x(), env.goal.y()) > 0.6);
    CHECK(solvable_path_exists(sdf, env.start, env.goal, 0.5));

    // The straight line start-goal must be blocked near an endpoint.
    const ProblemParams params;
    const GpPrior prior = prior_for(env, NoiseProfile::parabolic(20.0), params);
    const InterpTable table(prior.grid, prior.noise, 2, 5);
    CHECK(trajectory_cost(Trajectory{prior.grid, 2, prior.mean}, sdf, CostParams{0.5, 0.1},
                          table) > 0.0);
  }
}

TEST_CASE("profile selection covers both arms and rejects unknown names") {
  ProblemParams params;
  CHECK(params.profile("parabolic").kind() == NoiseProfile::Kind::kParabolic);
  CHECK(params.profile("constant").kind() == NoiseProfile::Kind::kConstant);
  CHECK(params.profile("constant").constant_value() ==
        doctest::Approx(20.0 * 20.0 / 12.0));
  params.constant_qc = 2.0;
  CHECK(params.profile("constant").constant_value() == doctest::Approx(2.0));
  CHECK_THROWS_AS(params.profile("gaussian"), std::invalid_argument);
}

TEST_CASE("CSV emitters pin the documented schemas") {
  RunRecord rec;
  rec.arm = "parabolic";
  rec.maze_id = "maze_0001";
  rec.maze_size = 3;
  rec.seed = 9;
  rec.solved = true;
  rec.cost = 0.0;
  rec.iterations = 4;
  rec.samples_evaluated = 1600;
  rec.elapsed_ms = 12.5;

  const std::string raw = raw_csv({rec}, false);
  CHECK(raw.find("arm,maze_id,maze_size,seed,status,solved,cost,iterations,"
                 "samples_evaluated,elapsed_ms\n") == 0);
  CHECK(raw.find("parabolic,maze_0001,3,9,ok,1,0,4,1600,12.500") != std::string::npos);

  const std::string raw_det = raw_csv({rec}, true);
  CHECK(raw_det.find(",1600,\n") != std::string::npos);  // timing blank when deterministic

  SummaryRow row;
  row.arm = "parabolic";
  row.maze_size = 3;
  row.k = 400;
  row.t_max_ms = 1000.0;
  row.success_rate_pct = 92.0;
  row.mean_ms = 171.0;
  row.median_ms = 103.0;
  row.n = 100;
  const std::string summary = summary_csv({row}, false);
  CHECK(summary.find("arm,maze_size,k,t_max_ms,success_rate_pct,mean_ms,median_ms,n\n") == 0);
  CHECK(summary.find("parabolic,3,400,1000,92.0,171.000,103.000,100") != std::string::npos);
}

TEST_CASE("campaigns run deterministically over a small corpus") {
  const auto corpus = fresh_dir("hetgp_test_corpus");
  const MazeDefaults defaults;
  for (int i = 0; i < 3; ++i) {
    const uint64_t seed = 50 + i;
    char name[16];
    std::snprintf(name, sizeof name, "maze_%04d", i + 1);
    save_maze(inflate(wilson_maze(3, seed), defaults.spec_for(3, seed)), corpus / name);
  }

  CampaignConfig config;
  config.corpus_dir = corpus;
  config.out_dir = fresh_dir("hetgp_test_campaign");
  config.arms = {"parabolic", "constant"};
  config.optimizer.k_samples = 64;
  config.optimizer.m_elites = 3;
  config.optimizer.time_budget = 0.0;  // deterministic
  config.optimizer.max_iters = 8;
  config.optimizer.seed = 7;
  config.optimizer.worker_count = 2;

  const CampaignReport report = run_campaign(config);
  CHECK(report.raw.size() == 6);
  CHECK(report.summary.size() == 2);
  for (const auto& row : report.summary) {
    CHECK(row.n == 3);
    CHECK(row.success_rate_pct >= 0.0);
    CHECK(row.success_rate_pct <= 100.0);
    int solved = 0;
    for (const auto& rec : report.raw)
      if (rec.arm == row.arm && rec.solved) ++solved;
    CHECK(row.success_rate_pct == doctest::Approx(100.0 * solved / 3.0));
  }

  const std::string raw_first = file_bytes(config.out_dir / "raw.csv");
  run_campaign(config);
  CHECK(file_bytes(config.out_dir / "raw.csv") == raw_first);

  SUBCASE("an empty corpus is rejected before any run") {
    CampaignConfig bad = config;
    bad.corpus_dir = fresh_dir("hetgp_test_empty");
    CHECK_THROWS(run_campaign(bad));
  }

  std::filesystem::remove_all(corpus);
  std::filesystem::remove_all(config.out_dir);
}

TEST_CASE("a trivially open environment solves immediately and re-validates") {
  MazeEnvironment env;
  env.occupancy = OccupancyGrid::make(240, 240, 0.05, 0.0, 0.0);
  for (int i = 0; i < 240; ++i) {
    env.occupancy.set(i, 0, true);
    env.occupancy.set(i, 239, true);
    env.occupancy.set(0, i, true);
    env.occupancy.set(239, i, true);
  }
  env.start = Eigen::Vector2d(2.0, 6.0);
  env.goal = Eigen::Vector2d(10.0, 6.0);

  OptimizerConfig opt;
  opt.k_samples = 32;
  opt.time_budget = 0.0;
  opt.max_iters = 4;
  const ProblemParams params;
  const PlanResult result = plan_environment(env, "parabolic", params, opt, CostParams{0.5, 0.1});
  CHECK(result.solved);
  CHECK(result.best_cost == 0.0);

  const auto dir = fresh_dir("hetgp_test_result");
  write_result_json(dir / "result.json", env, "parabolic", params, opt, CostParams{0.5, 0.1},
                    result);
  nlohmann::json parsed;
  std::ifstream in(dir / "result.json");
  in >> parsed;
  CHECK(parsed.at("outcome").at("solved").get<bool>());
  CHECK(parsed.at("trajectory").at("x").size() == 51);

  // Stored densified positions re-validate as collision free.
  const SignedDistanceField sdf = build_sdf(env.occupancy);
  const CostParams cost{0.5, 0.1};
  for (size_t i = 0; i < parsed.at("trajectory").at("x").size(); ++i) {
    const double x = parsed["trajectory"]["x"][i].get<double>();
    const double y = parsed["trajectory"]["y"][i].get<double>();
    CHECK(query_distance(sdf, x, y) > cost.robot_radius + cost.safety_margin - 1e-9);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("SVG output is well formed") {
  SvgWriter svg(0.0, 0.0, 10.0, 10.0, 400.0);
  OccupancyGrid grid = OccupancyGrid::make(20, 20, 0.5, 0.0, 0.0);
  for (int i = 5; i < 12; ++i) grid.set(i, 9, true);
  draw_occupancy(svg, grid);
  svg.circle(1.0, 1.0, 0.4, "#2a9d2a");
  svg.polyline({{0.5, 0.5}, {4.0, 6.0}, {9.0, 9.0}}, "#1f4fff");
  const std::string doc = svg.str();
  CHECK(doc.rfind("<?xml", 0) == 0);
  CHECK(doc.find("<svg ") != std::string::npos);
  CHECK(doc.find("</svg>") != std::string::npos);
  CHECK(doc.find("<rect ") != std::string::npos);
  CHECK(doc.find("<polyline ") != std::string::npos);
  CHECK(doc.find("NaN") == std::string::npos);
}
