#include "hetgp/svg.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace hetgp {

SvgWriter::SvgWriter(double x0, double y0, double x1, double y1, double width_px)
    : x0_(x0), y0_(y0), x1_(x1), y1_(y1), scale_(width_px / (x1 - x0)) {
  if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("SvgWriter: empty world rectangle");
  body_ << std::setprecision(7);
}

void SvgWriter::rect(double x, double y, double w, double h, const std::string& fill) {
  body_ << "<rect x=\"" << tx(x) << "\" y=\"" << ty(y + h) << "\" width=\"" << w * scale_
        << "\" height=\"" << h * scale_ << "\" fill=\"" << fill << "\"/>\n";
}

void SvgWriter::circle(double x, double y, double radius, const std::string& fill) {
  body_ << "<circle cx=\"" << tx(x) << "\" cy=\"" << ty(y) << "\" r=\"" << radius * scale_
        << "\" fill=\"" << fill << "\"/>\n";
}

void SvgWriter::line(double xa, double ya, double xb, double yb, const std::string& stroke,
                     double stroke_width) {
  body_ << "<line x1=\"" << tx(xa) << "\" y1=\"" << ty(ya) << "\" x2=\"" << tx(xb) << "\" y2=\""
        << ty(yb) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width << "\"/>\n";
}

void SvgWriter::polyline(const std::vector<std::pair<double, double>>& points,
                         const std::string& stroke, double stroke_width, double opacity) {
  body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width
        << "\" stroke-opacity=\"" << opacity << "\" points=\"";
  for (const auto& [x, y] : points) body_ << tx(x) << "," << ty(y) << " ";
  body_ << "\"/>\n";
}

void SvgWriter::text(double x, double y, const std::string& content, double size_px) {
  body_ << "<text x=\"" << tx(x) << "\" y=\"" << ty(y) << "\" font-family=\"sans-serif\" "
        << "font-size=\"" << size_px << "\">" << content << "</text>\n";
}

std::string SvgWriter::str() const {
  const double w = (x1_ - x0_) * scale_;
  const double h = (y1_ - y0_) * scale_;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

void SvgWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << str();
}

void draw_occupancy(SvgWriter& svg, const OccupancyGrid& grid, const std::string& fill) {
  const double res = grid.resolution;
  for (int iy = 0; iy < grid.height; ++iy) {
    int run_start = -1;
    for (int ix = 0; ix <= grid.width; ++ix) {
      const bool occ = ix < grid.width && grid.occupied(ix, iy);
      if (occ && run_start < 0) run_start = ix;
      if (!occ && run_start >= 0) {
        svg.rect(grid.origin_x + run_start * res, grid.origin_y + iy * res,
                 (ix - run_start) * res, res, fill);
        run_start = -1;
      }
    }
  }
}

void draw_trajectory(SvgWriter& svg, const Trajectory& traj, const std::string& stroke,
                     double stroke_width, double opacity) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(traj.grid.n_support());
  for (int i = 0; i < traj.grid.n_support(); ++i) {
    const auto p = position_block(traj.values, i, traj.dim);
    pts.emplace_back(p[0], p[1]);
  }
  svg.polyline(pts, stroke, stroke_width, opacity);
}

}  // namespace hetgp
