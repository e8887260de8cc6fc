#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hetgp/environment.hpp"

namespace hetgp {

struct MazeSpec {
  int grid_cells = 3;            // logical n x n maze
  double cell_size = 10.0;       // meters per logical cell
  double wall_thickness = 0.2;   // meters
  uint64_t seed = 0;
  double resolution = 0.05;      // raster meters per cell
};

/// Spanning tree over the n x n logical cell graph. open_right[c] means no
/// wall between cell c and its +x neighbor; open_up likewise for +y.
struct MazeTree {
  int n = 0;
  std::vector<uint8_t> open_right;
  std::vector<uint8_t> open_up;

  int cell(int ix, int iy) const { return iy * n + ix; }
  int passage_count() const;
};

struct MazeEnvironment {
  OccupancyGrid occupancy;
  Eigen::Vector2d start;
  Eigen::Vector2d goal;
  MazeSpec spec;
};

/// Uniform spanning tree via Wilson's loop-erased random walks. Every
/// spanning tree of the cell graph is produced with equal probability.
MazeTree wilson_maze(int n, uint64_t seed);

/// Rasterize a maze to metric occupancy: walls of wall_thickness centered on
/// every closed edge and on the outer boundary, start/goal at the centers of
/// the corner cells. Throws if the corner cells leave less clearance than
/// the given robot radius.
MazeEnvironment inflate(const MazeTree& tree, const MazeSpec& spec, double robot_radius = 0.5);

/// BFS over raster cells with sdf > robot_radius between start and goal.
bool solvable_path_exists(const MazeEnvironment& env, double robot_radius);
bool solvable_path_exists(const SignedDistanceField& sdf, const Eigen::Vector2d& start,
                          const Eigen::Vector2d& goal, double robot_radius);

/// On-disk maze layout: <dir>/occupancy.pgm plus <dir>/meta.json carrying the
/// raster header, start/goal, and the generating spec.
void save_maze(const MazeEnvironment& env, const std::filesystem::path& dir);
MazeEnvironment load_maze(const std::filesystem::path& dir);

}  // namespace hetgp
