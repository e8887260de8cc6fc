#include "hetgp/environment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace hetgp {

static_assert(std::endian::native == std::endian::little,
              "raster serialization assumes a little-endian host");

OccupancyGrid OccupancyGrid::make(int width, int height, double resolution, double origin_x,
                                  double origin_y) {
  if (width < 1 || height < 1) throw std::invalid_argument("OccupancyGrid: empty dimensions");
  if (!(resolution > 0.0)) throw std::invalid_argument("OccupancyGrid: resolution must be > 0");
  OccupancyGrid g;
  g.width = width;
  g.height = height;
  g.resolution = resolution;
  g.origin_x = origin_x;
  g.origin_y = origin_y;
  g.cells.assign(static_cast<size_t>(width) * height, 0);
  return g;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared distance transform over a sampled function, lower envelope of
// parabolas (Felzenszwalb & Huttenlocher, http://cs.brown.edu/people/pfelzens/dt/).
// Cells with f == inf carry no parabola.
void edt_1d(const std::vector<double>& f, int n, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  int first = 0;
  while (first < n && f[first] == kInf) ++first;
  if (first == n) {
    std::fill(d.begin(), d.begin() + n, kInf);
    return;
  }

  const auto intersect = [&](int q, int p) {
    return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
           (2.0 * q - 2.0 * p);
  };

  int k = 0;
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }

  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

// Squared distance (in cells) from every cell to the nearest seed cell.
std::vector<double> edt_squared(const OccupancyGrid& grid, bool seed_value) {
  const int w = grid.width;
  const int h = grid.height;
  std::vector<double> field(static_cast<size_t>(w) * h);
  for (int iy = 0; iy < h; ++iy)
    for (int ix = 0; ix < w; ++ix)
      field[static_cast<size_t>(iy) * w + ix] = grid.occupied(ix, iy) == seed_value ? 0.0 : kInf;

  const int n_max = std::max(w, h);
  std::vector<double> f(n_max), d(n_max), z(n_max + 1);
  std::vector<int> v(n_max);

  for (int ix = 0; ix < w; ++ix) {  // columns
    for (int iy = 0; iy < h; ++iy) f[iy] = field[static_cast<size_t>(iy) * w + ix];
    edt_1d(f, h, d, v, z);
    for (int iy = 0; iy < h; ++iy) field[static_cast<size_t>(iy) * w + ix] = d[iy];
  }
  for (int iy = 0; iy < h; ++iy) {  // rows
    for (int ix = 0; ix < w; ++ix) f[ix] = field[static_cast<size_t>(iy) * w + ix];
    edt_1d(f, w, d, v, z);
    for (int ix = 0; ix < w; ++ix) field[static_cast<size_t>(iy) * w + ix] = d[ix];
  }
  return field;
}

}  // namespace

SignedDistanceField build_sdf(const OccupancyGrid& grid) {
  if (grid.width < 1 || grid.height < 1) throw std::invalid_argument("build_sdf: empty grid");

  SignedDistanceField sdf;
  sdf.width = grid.width;
  sdf.height = grid.height;
  sdf.resolution = grid.resolution;
  sdf.origin_x = grid.origin_x;
  sdf.origin_y = grid.origin_y;
  sdf.values.resize(grid.cells.size());

  const std::vector<double> sq_to_occupied = edt_squared(grid, true);
  const std::vector<double> sq_to_free = edt_squared(grid, false);
  const double cap = sdf.diagonal();

  for (size_t i = 0; i < sdf.values.size(); ++i) {
    const bool occ = grid.cells[i] != 0;
    const double sq = occ ? sq_to_free[i] : sq_to_occupied[i];
    const double dist = sq == kInf ? cap : std::min(std::sqrt(sq) * grid.resolution, cap);
    sdf.values[i] = occ ? -dist : dist;
  }
  return sdf;
}

double query_distance(const SignedDistanceField& sdf, double x, double y) {
  const double extent_x = sdf.width * sdf.resolution;
  const double extent_y = sdf.height * sdf.resolution;
  if (x < sdf.origin_x || x > sdf.origin_x + extent_x || y < sdf.origin_y ||
      y > sdf.origin_y + extent_y)
    return -sdf.diagonal();

  // Grid coordinates with cell centers on integers; near the border the
  // fractional part clamps so the query degrades to the nearest cell row.
  const double gx = (x - sdf.origin_x) / sdf.resolution - 0.5;
  const double gy = (y - sdf.origin_y) / sdf.resolution - 0.5;
  const int x0 = std::clamp(static_cast<int>(std::floor(gx)), 0, sdf.width - 2);
  const int y0 = std::clamp(static_cast<int>(std::floor(gy)), 0, sdf.height - 2);
  const double fx = std::clamp(gx - x0, 0.0, 1.0);
  const double fy = std::clamp(gy - y0, 0.0, 1.0);

  const double v00 = sdf.at(x0, y0);
  const double v10 = sdf.at(x0 + 1, y0);
  const double v01 = sdf.at(x0, y0 + 1);
  const double v11 = sdf.at(x0 + 1, y0 + 1);
  return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
}

double hinge_cost(double distance, const CostParams& params) {
  return std::max(params.safety_margin + params.robot_radius - distance, 0.0);
}

double trajectory_cost(const Trajectory& traj, const SignedDistanceField& sdf,
                       const CostParams& params, const InterpTable& table) {
  const int dim = traj.dim;
  if (dim != 2) throw std::invalid_argument("trajectory_cost: workspace cost needs dim == 2");
  const int steps = table.steps();
  const int n_int = traj.grid.n_intervals();

  double cost = 0.0;
  auto add = [&](double px, double py) {
    cost += hinge_cost(query_distance(sdf, px, py), params);
  };

  Eigen::Vector2d pos;
  for (int i = 0; i < n_int; ++i) {
    const auto th_i = state_block(traj.values, i, dim);
    const auto th_next = state_block(traj.values, i + 1, dim);
    add(th_i[0], th_i[1]);
    for (int j = 1; j < steps; ++j) {
      const InterpCoeffs& c = table.coeffs(i, j);
      pos.noalias() = c.lambda.topRows<2>() * th_i;
      pos.noalias() += c.psi.topRows<2>() * th_next;
      add(pos[0], pos[1]);
    }
  }
  const auto last = state_block(traj.values, n_int, dim);
  add(last[0], last[1]);
  return cost;
}

bool is_collision_free(const Trajectory& traj, const SignedDistanceField& sdf,
                       const CostParams& params, const InterpTable& table) {
  return trajectory_cost(traj, sdf, params, table) <= kZeroCostTol;
}

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

void write_header_json(const std::filesystem::path& path, double resolution, double ox, double oy,
                       int width = 0, int height = 0) {
  nlohmann::json j{{"resolution", resolution}, {"origin_x", ox}, {"origin_y", oy}};
  if (width > 0) {
    // Flat rasters carry no intrinsic dimensions, so record them here.
    j["width"] = width;
    j["height"] = height;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

void save_occupancy_pgm(const OccupancyGrid& grid, const std::filesystem::path& pgm_path,
                        const std::filesystem::path& json_path) {
  std::ofstream out(pgm_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + pgm_path.string());
  out << "P5\n" << grid.width << " " << grid.height << "\n255\n";
  std::vector<uint8_t> row(grid.width);
  for (int iy = 0; iy < grid.height; ++iy) {
    for (int ix = 0; ix < grid.width; ++ix) row[ix] = grid.occupied(ix, iy) ? 0 : 255;
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  write_header_json(json_path, grid.resolution, grid.origin_x, grid.origin_y);
}

OccupancyGrid load_occupancy_pgm(const std::filesystem::path& pgm_path,
                                 const std::filesystem::path& json_path) {
  std::ifstream in(pgm_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + pgm_path.string());
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  in >> magic >> width >> height >> maxval;
  if (magic != "P5" || maxval != 255 || width < 1 || height < 1)
    throw std::runtime_error("not a supported PGM file: " + pgm_path.string());
  in.get();  // single whitespace after the header

  const nlohmann::json j = read_json_file(json_path);
  OccupancyGrid grid = OccupancyGrid::make(width, height, j.at("resolution").get<double>(),
                                           j.at("origin_x").get<double>(),
                                           j.at("origin_y").get<double>());
  std::vector<uint8_t> row(width);
  for (int iy = 0; iy < height; ++iy) {
    in.read(reinterpret_cast<char*>(row.data()), row.size());
    if (!in) throw std::runtime_error("truncated PGM file: " + pgm_path.string());
    for (int ix = 0; ix < width; ++ix) grid.set(ix, iy, row[ix] == 0);
  }
  return grid;
}

void save_sdf_raster(const SignedDistanceField& sdf, const std::filesystem::path& raster_path,
                     const std::filesystem::path& json_path) {
  std::ofstream out(raster_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + raster_path.string());
  std::vector<float> row(sdf.width);
  for (int iy = 0; iy < sdf.height; ++iy) {
    for (int ix = 0; ix < sdf.width; ++ix) row[ix] = static_cast<float>(sdf.at(ix, iy));
    out.write(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(float));
  }
  write_header_json(json_path, sdf.resolution, sdf.origin_x, sdf.origin_y, sdf.width, sdf.height);
}

SignedDistanceField load_sdf_raster(const std::filesystem::path& raster_path,
                                    const std::filesystem::path& json_path) {
  std::ifstream in(raster_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + raster_path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<size_t>(in.tellg());
  in.seekg(0);
  if (bytes % sizeof(float) != 0)
    throw std::runtime_error("raster size is not a float32 multiple: " + raster_path.string());
  std::vector<float> raw(bytes / sizeof(float));
  in.read(reinterpret_cast<char*>(raw.data()), bytes);

  const nlohmann::json j = read_json_file(json_path);
  SignedDistanceField sdf;
  sdf.resolution = j.at("resolution").get<double>();
  sdf.origin_x = j.at("origin_x").get<double>();
  sdf.origin_y = j.at("origin_y").get<double>();
  if (j.contains("width") && j.contains("height")) {
    sdf.width = j.at("width").get<int>();
    sdf.height = j.at("height").get<int>();
  } else {
    // Square raster when the sidecar does not carry dimensions.
    const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(raw.size()))));
    sdf.width = sdf.height = side;
  }
  if (static_cast<size_t>(sdf.width) * sdf.height != raw.size())
    throw std::runtime_error("raster dimensions do not match payload: " + raster_path.string());
  sdf.values.assign(raw.begin(), raw.end());
  return sdf;
}

}  // namespace hetgp
