#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "hetgp/maze_gen.hpp"
#include "oracles.hpp"

using namespace hetgp;

TEST_CASE("2x2 maze is a spanning tree with three passages") {
  const MazeTree tree = wilson_maze(2, 7);
  CHECK(tree.passage_count() == 3);
  CHECK(oracles::is_spanning_tree(tree));
}

TEST_CASE("every generated maze is connected and acyclic") {
  for (int n : {2, 3, 4, 5})
    for (uint64_t seed : {0u, 1u, 2u, 3u, 4u}) {
      const MazeTree tree = wilson_maze(n, seed);
      CHECK(tree.passage_count() == n * n - 1);
      CHECK(oracles::is_spanning_tree(tree));
    }
  CHECK_THROWS_AS(wilson_maze(1, 0), std::invalid_argument);
}

TEST_CASE("the 3x3 grid graph has 192 spanning trees") {
  CHECK(oracles::spanning_tree_count(2) == 4);
  CHECK(oracles::spanning_tree_count(3) == 192);
}

TEST_CASE("generation is deterministic in (n, seed)") {
  const MazeTree a = wilson_maze(4, 99);
  const MazeTree b = wilson_maze(4, 99);
  CHECK(a.open_right == b.open_right);
  CHECK(a.open_up == b.open_up);
  CHECK(oracles::tree_edge_bits(wilson_maze(4, 100)) != oracles::tree_edge_bits(a));

  MazeSpec spec;
  spec.grid_cells = 3;
  spec.cell_size = 2.0;
  spec.wall_thickness = 0.2;
  spec.resolution = 0.05;
  spec.seed = 99;
  const MazeEnvironment env_a = inflate(wilson_maze(3, 99), spec);
  const MazeEnvironment env_b = inflate(wilson_maze(3, 99), spec);
  CHECK(env_a.occupancy.cells == env_b.occupancy.cells);
}

TEST_CASE("inflation geometry: corridors, walls and endpoint cells") {
  MazeSpec spec;
  spec.grid_cells = 3;
  spec.cell_size = 2.0;
  spec.wall_thickness = 0.2;
  spec.resolution = 0.05;
  const MazeTree tree = wilson_maze(3, 5);
  const MazeEnvironment env = inflate(tree, spec, 0.5);
  const SignedDistanceField sdf = build_sdf(env.occupancy);

  // Cell centers sit half a cell from the nearest wall line: clearance
  // (cell_size - wall)/2 = 0.9 m, above the 0.5 m robot radius.
  const double start_clear = query_distance(sdf, env.start.x(), env.start.y());
  CHECK(start_clear > 0.5);
  CHECK(start_clear == doctest::Approx(0.9).epsilon(0.06));  // raster quantization

  // A closed interior edge carries a wall: the edge midpoint is inside it.
  bool found_closed = false;
  for (int iy = 0; iy < 3 && !found_closed; ++iy)
    for (int ix = 0; ix + 1 < 3 && !found_closed; ++ix)
      if (!tree.open_right[tree.cell(ix, iy)]) {
        found_closed = true;
        const double wall_x = (ix + 1) * spec.cell_size;
        const double wall_y = (iy + 0.5) * spec.cell_size;
        CHECK(query_distance(sdf, wall_x, wall_y) <= spec.wall_thickness / 2.0);
      }
    CHECK(found_closed);

  // Start and goal map back to their logical cells.
  CHECK(static_cast<int>(env.start.x() / spec.cell_size) == 0);
  CHECK(static_cast<int>(env.start.y() / spec.cell_size) == 0);
  CHECK(static_cast<int>(env.goal.x() / spec.cell_size) == 2);
  CHECK(static_cast<int>(env.goal.y() / spec.cell_size) == 2);

  // A robot too large for the corridors is rejected.
  CHECK_THROWS_AS(inflate(tree, spec, 1.0), std::invalid_argument);
}

TEST_CASE("default-scale mazes keep a solvable corridor path") {
  MazeSpec spec;
  spec.grid_cells = 5;
  spec.cell_size = 6.0;
  spec.wall_thickness = 0.2;
  spec.resolution = 0.05;
  for (uint64_t seed : {11u, 12u}) {
    spec.seed = seed;
    const MazeEnvironment env = inflate(wilson_maze(5, seed), spec);
    CHECK(solvable_path_exists(env, 0.5));
    CHECK(solvable_path_exists(env, 0.0));
  }
}

TEST_CASE("a sealed maze reports no path") {
  MazeSpec spec;
  spec.grid_cells = 3;
  spec.cell_size = 2.0;
  spec.wall_thickness = 0.2;
  spec.resolution = 0.05;
  MazeEnvironment env = inflate(wilson_maze(3, 21), spec);

  // Wall off a full column of cells through the maze middle.
  auto& grid = env.occupancy;
  const int wall_ix = grid.width / 2;
  for (int iy = 0; iy < grid.height; ++iy)
    for (int ix = wall_ix - 2; ix <= wall_ix + 2; ++ix) grid.set(ix, iy, true);
  CHECK_FALSE(solvable_path_exists(env, 0.5));
  CHECK_FALSE(solvable_path_exists(env, 0.0));
}

TEST_CASE("maze directories round-trip bitwise") {
  MazeSpec spec;
  spec.grid_cells = 4;
  spec.cell_size = 7.5;
  spec.wall_thickness = 0.2;
  spec.resolution = 0.05;
  spec.seed = 31;
  const MazeEnvironment env = inflate(wilson_maze(4, 31), spec);

  const auto dir_a = std::filesystem::temp_directory_path() / "hetgp_maze_a";
  const auto dir_b = std::filesystem::temp_directory_path() / "hetgp_maze_b";
  save_maze(env, dir_a);
  save_maze(env, dir_b);

  const auto file_bytes = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(file_bytes(dir_a / "occupancy.pgm") == file_bytes(dir_b / "occupancy.pgm"));
  CHECK(file_bytes(dir_a / "meta.json") == file_bytes(dir_b / "meta.json"));

  const MazeEnvironment loaded = load_maze(dir_a);
  CHECK(loaded.occupancy.cells == env.occupancy.cells);
  CHECK(loaded.start == env.start);
  CHECK(loaded.goal == env.goal);
  CHECK(loaded.spec.grid_cells == 4);
  CHECK(loaded.spec.seed == 31);

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}
