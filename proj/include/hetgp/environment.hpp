#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hetgp/interpolation.hpp"
#include "hetgp/sampler.hpp"

namespace hetgp {

/// Costs at or below this are treated as exactly zero (collision free).
inline constexpr double kZeroCostTol = 1e-12;

/// Rasterized 2D workspace. Cell (ix, iy) covers the square whose center is
/// origin + (ix + 0.5, iy + 0.5) * resolution; true means occupied.
struct OccupancyGrid {
  int width = 0;
  int height = 0;
  double resolution = 0.05;  // meters per cell
  double origin_x = 0.0;     // world coordinates of the lower-left grid corner
  double origin_y = 0.0;
  std::vector<uint8_t> cells;

  bool occupied(int ix, int iy) const { return cells[static_cast<size_t>(iy) * width + ix] != 0; }
  void set(int ix, int iy, bool value) {
    cells[static_cast<size_t>(iy) * width + ix] = value ? 1 : 0;
  }
  double cell_center_x(int ix) const { return origin_x + (ix + 0.5) * resolution; }
  double cell_center_y(int iy) const { return origin_y + (iy + 0.5) * resolution; }

  static OccupancyGrid make(int width, int height, double resolution, double origin_x,
                            double origin_y);
};

/// Euclidean signed distance to the nearest obstacle, positive in free
/// space, negative inside obstacles. Distances run between cell centers and
/// are capped in magnitude at the grid diagonal.
struct SignedDistanceField {
  int width = 0;
  int height = 0;
  double resolution = 0.05;
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::vector<double> values;

  double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * width + ix]; }
  double diagonal() const { return std::hypot(width * resolution, height * resolution); }
};

struct CostParams {
  double robot_radius = 0.5;  // meters
  double safety_margin = 0.1;
};

/// Exact Euclidean distance transform of the grid (two-pass squared-distance
/// algorithm), signed by occupancy.
SignedDistanceField build_sdf(const OccupancyGrid& grid);

/// Bilinear interpolation of the field at a world point. Points outside the
/// grid extent count as deep collision and return -diagonal.
double query_distance(const SignedDistanceField& sdf, double x, double y);

/// Obstacle hinge: max(safety_margin + robot_radius - d, 0).
double hinge_cost(double distance, const CostParams& params);

/// Sum of hinge costs over the N*S + 1 densified positions of a trajectory.
double trajectory_cost(const Trajectory& traj, const SignedDistanceField& sdf,
                       const CostParams& params, const InterpTable& table);

bool is_collision_free(const Trajectory& traj, const SignedDistanceField& sdf,
                       const CostParams& params, const InterpTable& table);

// Serialization. Occupancy grids persist as binary PGM (P5, maxval 255,
// 0 = occupied, 255 = free) plus a JSON sidecar holding {resolution,
// origin_x, origin_y}; distance fields persist as a little-endian float32
// raster with the same sidecar.

void save_occupancy_pgm(const OccupancyGrid& grid, const std::filesystem::path& pgm_path,
                        const std::filesystem::path& json_path);
OccupancyGrid load_occupancy_pgm(const std::filesystem::path& pgm_path,
                                 const std::filesystem::path& json_path);

void save_sdf_raster(const SignedDistanceField& sdf, const std::filesystem::path& raster_path,
                     const std::filesystem::path& json_path);
SignedDistanceField load_sdf_raster(const std::filesystem::path& raster_path,
                                    const std::filesystem::path& json_path);

}  // namespace hetgp
