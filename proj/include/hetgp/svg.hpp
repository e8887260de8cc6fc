#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "hetgp/environment.hpp"
#include "hetgp/sampler.hpp"

namespace hetgp {

/// Minimal SVG document builder with a y-up world-to-page transform.
class SvgWriter {
 public:
  /// Page maps the world rectangle [x0,x1]x[y0,y1] onto width_px pixels.
  SvgWriter(double x0, double y0, double x1, double y1, double width_px = 800.0);

  void rect(double x, double y, double w, double h, const std::string& fill);
  void circle(double x, double y, double radius, const std::string& fill);
  void line(double x0, double y0, double x1, double y1, const std::string& stroke,
            double stroke_width = 1.5);
  void polyline(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
                double stroke_width = 1.5, double opacity = 1.0);
  void text(double x, double y, const std::string& content, double size_px = 14.0);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

  double px_per_unit() const { return scale_; }

 private:
  double tx(double x) const { return (x - x0_) * scale_; }
  double ty(double y) const { return (y1_ - y) * scale_; }

  double x0_, y0_, x1_, y1_, scale_;
  std::ostringstream body_;
};

/// Occupied cells as row-merged rectangles.
void draw_occupancy(SvgWriter& svg, const OccupancyGrid& grid, const std::string& fill = "#333");

/// Positions of a trajectory as a polyline.
void draw_trajectory(SvgWriter& svg, const Trajectory& traj, const std::string& stroke,
                     double stroke_width = 1.5, double opacity = 1.0);

}  // namespace hetgp
