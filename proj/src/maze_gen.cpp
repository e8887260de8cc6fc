#include "hetgp/maze_gen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hetgp/rng.hpp"

namespace hetgp {

int MazeTree::passage_count() const {
  int count = 0;
  for (uint8_t v : open_right) count += v;
  for (uint8_t v : open_up) count += v;
  return count;
}

MazeTree wilson_maze(int n, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("wilson_maze: n must be >= 2");
  constexpr long kWalkStepCap = 10'000'000;

  MazeTree tree;
  tree.n = n;
  tree.open_right.assign(static_cast<size_t>(n) * n, 0);
  tree.open_up.assign(static_cast<size_t>(n) * n, 0);

  const int n_cells = n * n;
  Rng rng(seed, 0);
  std::vector<uint8_t> in_tree(n_cells, 0);
  in_tree[static_cast<size_t>(rng.below(n_cells))] = 1;

  // next_dir[c]: direction of the latest walk through c (0:+x 1:-x 2:+y 3:-y);
  // loop erasure falls out of retracing these pointers, which later visits
  // overwrite.
  std::vector<int8_t> next_dir(n_cells, -1);
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  long steps = 0;

  for (int origin = 0; origin < n_cells; ++origin) {
    if (in_tree[origin]) continue;

    int cur = origin;
    while (!in_tree[cur]) {
      if (++steps > kWalkStepCap)
        throw std::runtime_error("wilson_maze: walk step cap exceeded for seed " +
                                 std::to_string(seed));
      const int ix = cur % n;
      const int iy = cur / n;
      int dir;
      do {
        dir = static_cast<int>(rng.below(4));
      } while (ix + dx[dir] < 0 || ix + dx[dir] >= n || iy + dy[dir] < 0 || iy + dy[dir] >= n);
      next_dir[cur] = static_cast<int8_t>(dir);
      cur = (iy + dy[dir]) * n + (ix + dx[dir]);
    }

    // Carve the loop-erased path.
    cur = origin;
    while (!in_tree[cur]) {
      in_tree[cur] = 1;
      const int ix = cur % n;
      const int iy = cur / n;
      const int dir = next_dir[cur];
      switch (dir) {
        case 0: tree.open_right[cur] = 1; break;
        case 1: tree.open_right[tree.cell(ix - 1, iy)] = 1; break;
        case 2: tree.open_up[cur] = 1; break;
        default: tree.open_up[tree.cell(ix, iy - 1)] = 1; break;
      }
      cur = (iy + dy[dir]) * n + (ix + dx[dir]);
    }
  }
  return tree;
}

namespace {

void paint_rect(OccupancyGrid& grid, double x0, double x1, double y0, double y1) {
  // Mark every cell whose center falls inside the rectangle.
  const auto first_index = [&](double w, double origin) {
    return std::max(0, static_cast<int>(std::ceil((w - origin) / grid.resolution - 0.5)));
  };
  const int ix0 = first_index(x0, grid.origin_x);
  const int iy0 = first_index(y0, grid.origin_y);
  for (int iy = iy0; iy < grid.height && grid.cell_center_y(iy) <= y1; ++iy)
    for (int ix = ix0; ix < grid.width && grid.cell_center_x(ix) <= x1; ++ix)
      grid.set(ix, iy, true);
}

}  // namespace

MazeEnvironment inflate(const MazeTree& tree, const MazeSpec& spec, double robot_radius) {
  if (!(spec.wall_thickness < spec.cell_size))
    throw std::invalid_argument("inflate: wall_thickness must be below cell_size");
  const int n = tree.n;
  const double cs = spec.cell_size;
  const double wt = spec.wall_thickness;
  const double extent = n * cs + wt;  // boundary walls protrude wt/2 outward
  const int cells = static_cast<int>(std::lround(extent / spec.resolution));

  MazeEnvironment env;
  env.spec = spec;
  env.occupancy = OccupancyGrid::make(cells, cells, spec.resolution, -wt / 2.0, -wt / 2.0);
  env.start = Eigen::Vector2d(cs / 2.0, cs / 2.0);
  env.goal = Eigen::Vector2d((n - 0.5) * cs, (n - 0.5) * cs);

  auto& grid = env.occupancy;
  const double h = wt / 2.0;
  // Outer boundary.
  paint_rect(grid, -h, h, -h, n * cs + h);
  paint_rect(grid, n * cs - h, n * cs + h, -h, n * cs + h);
  paint_rect(grid, -h, n * cs + h, -h, h);
  paint_rect(grid, -h, n * cs + h, n * cs - h, n * cs + h);
  // Walls on closed interior edges, extended by wt/2 so corner posts close.
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int c = tree.cell(ix, iy);
      if (ix + 1 < n && !tree.open_right[c])
        paint_rect(grid, (ix + 1) * cs - h, (ix + 1) * cs + h, iy * cs - h, (iy + 1) * cs + h);
      if (iy + 1 < n && !tree.open_up[c])
        paint_rect(grid, ix * cs - h, (ix + 1) * cs + h, (iy + 1) * cs - h, (iy + 1) * cs + h);
    }
  }

  const SignedDistanceField sdf = build_sdf(grid);
  const double start_clear = query_distance(sdf, env.start.x(), env.start.y());
  const double goal_clear = query_distance(sdf, env.goal.x(), env.goal.y());
  if (start_clear <= robot_radius || goal_clear <= robot_radius)
    throw std::invalid_argument("inflate: cell_size leaves insufficient clearance for robot");
  return env;
}

bool solvable_path_exists(const SignedDistanceField& sdf, const Eigen::Vector2d& start,
                          const Eigen::Vector2d& goal, double robot_radius) {
  const auto to_cell = [&](const Eigen::Vector2d& p, int& ix, int& iy) {
    ix = static_cast<int>(std::floor((p.x() - sdf.origin_x) / sdf.resolution));
    iy = static_cast<int>(std::floor((p.y() - sdf.origin_y) / sdf.resolution));
    return ix >= 0 && ix < sdf.width && iy >= 0 && iy < sdf.height;
  };
  int sx, sy, gx, gy;
  if (!to_cell(start, sx, sy) || !to_cell(goal, gx, gy)) return false;
  if (sdf.at(sx, sy) <= robot_radius || sdf.at(gx, gy) <= robot_radius) return false;

  std::vector<uint8_t> seen(static_cast<size_t>(sdf.width) * sdf.height, 0);
  std::deque<std::pair<int, int>> queue{{sx, sy}};
  seen[static_cast<size_t>(sy) * sdf.width + sx] = 1;
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  while (!queue.empty()) {
    const auto [ix, iy] = queue.front();
    queue.pop_front();
    if (ix == gx && iy == gy) return true;
    for (int d = 0; d < 4; ++d) {
      const int nx = ix + dx[d];
      const int ny = iy + dy[d];
      if (nx < 0 || nx >= sdf.width || ny < 0 || ny >= sdf.height) continue;
      auto& flag = seen[static_cast<size_t>(ny) * sdf.width + nx];
      if (flag || sdf.at(nx, ny) <= robot_radius) continue;
      flag = 1;
      queue.emplace_back(nx, ny);
    }
  }
  return false;
}

bool solvable_path_exists(const MazeEnvironment& env, double robot_radius) {
  return solvable_path_exists(build_sdf(env.occupancy), env.start, env.goal, robot_radius);
}

void save_maze(const MazeEnvironment& env, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& grid = env.occupancy;
  nlohmann::json meta{{"resolution", grid.resolution},
                      {"origin_x", grid.origin_x},
                      {"origin_y", grid.origin_y},
                      {"seed", env.spec.seed},
                      {"n", env.spec.grid_cells},
                      {"cell_size", env.spec.cell_size},
                      {"wall_thickness", env.spec.wall_thickness},
                      {"start", {env.start.x(), env.start.y()}},
                      {"goal", {env.goal.x(), env.goal.y()}}};
  save_occupancy_pgm(grid, dir / "occupancy.pgm", dir / "occupancy.json");
  std::ofstream out(dir / "meta.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
}

MazeEnvironment load_maze(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw std::runtime_error("cannot open " + (dir / "meta.json").string());
  nlohmann::json meta;
  in >> meta;

  MazeEnvironment env;
  env.occupancy = load_occupancy_pgm(dir / "occupancy.pgm", dir / "occupancy.json");
  env.start = Eigen::Vector2d(meta.at("start")[0].get<double>(), meta.at("start")[1].get<double>());
  env.goal = Eigen::Vector2d(meta.at("goal")[0].get<double>(), meta.at("goal")[1].get<double>());
  env.spec.grid_cells = meta.value("n", 0);
  env.spec.seed = meta.value("seed", uint64_t{0});
  env.spec.cell_size = meta.value("cell_size", 0.0);
  env.spec.wall_thickness = meta.value("wall_thickness", 0.0);
  env.spec.resolution = env.occupancy.resolution;
  return env;
}

}  // namespace hetgp
