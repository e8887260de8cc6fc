#pragma once

#include <vector>

#include "hetgp/sampler.hpp"
#include "hetgp/types.hpp"

namespace hetgp {

/// Coefficient pair of the O(1) GP interpolation
///   theta(tau) = Lambda(tau) theta_i + Psi(tau) theta_{i+1}
/// for tau inside the support interval [t_i, t_{i+1}]. Between-support mean
/// values follow the same interpolation applied to the mean itself, which for
/// a constant-velocity mean coincides with its exact evaluation, so the mean
/// terms cancel and only the two neighbor states remain.
struct InterpCoeffs {
  Matrix lambda;
  Matrix psi;
};

/// Exact coefficients for one query time inside one interval.
InterpCoeffs interp_coeffs(double t_i, double t_next, double tau, const NoiseProfile& noise,
                           int dim);

/// Precomputed coefficients for S equidistant steps per support interval.
/// Time-varying profiles need one table row per interval; a constant profile
/// shares a single row across all intervals.
class InterpTable {
 public:
  InterpTable(const TimeGrid& grid, const NoiseProfile& noise, int dim, int steps_per_interval);

  int steps() const { return steps_; }
  int dim() const { return dim_; }
  const TimeGrid& grid() const { return grid_; }

  /// Coefficients for offset j in {1, ..., S-1} of interval i.
  const InterpCoeffs& coeffs(int interval, int j) const {
    return rows_[shared_ ? 0 : interval][j - 1];
  }

 private:
  TimeGrid grid_;
  int dim_;
  int steps_;
  bool shared_;
  std::vector<std::vector<InterpCoeffs>> rows_;
};

/// State at an arbitrary tau in [0, t_total] from the bracketing support pair.
StateVector interpolate(const Trajectory& traj, const NoiseProfile& noise, double tau);

/// Dense resampling: N*S + 1 states at uniform spacing dt/S. Support states
/// are passed through bitwise; in-between states come from the table.
Trajectory densify(const Trajectory& traj, const InterpTable& table);

}  // namespace hetgp
