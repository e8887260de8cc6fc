#include "hetgp/interpolation.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

#include "hetgp/gp_prior.hpp"

namespace hetgp {

InterpCoeffs interp_coeffs(double t_i, double t_next, double tau, const NoiseProfile& noise,
                           int dim) {
  if (!(t_next > t_i)) throw std::invalid_argument("interp_coeffs: empty interval");
  if (tau < t_i || tau > t_next)
    throw std::invalid_argument("interp_coeffs: tau outside [t_i, t_{i+1}]");

  const int s = state_size(dim);
  if (tau == t_i) return {Matrix::Identity(s, s), Matrix::Zero(s, s)};
  if (tau == t_next) return {Matrix::Zero(s, s), Matrix::Identity(s, s)};

  const Matrix q_interval = process_noise_block(t_i, t_next, noise, dim);
  Eigen::LLT<Matrix> llt(q_interval);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("interp_coeffs: interval noise block is singular");

  const Matrix q_partial = process_noise_block(t_i, tau, noise, dim);
  InterpCoeffs c;
  c.psi = llt.solve(transition(t_next - tau, dim) * q_partial.transpose()).transpose();
  c.lambda = transition(tau - t_i, dim) - c.psi * transition(t_next - t_i, dim);
  return c;
}

namespace {

// Single evaluation path shared by interpolate() and densify() so the two
// agree bitwise for identical tau.
template <typename BlockA, typename BlockB>
Vector interp_apply(const InterpCoeffs& c, const BlockA& th_i, const BlockB& th_next) {
  Vector out = c.lambda * th_i;
  out.noalias() += c.psi * th_next;
  return out;
}

}  // namespace

InterpTable::InterpTable(const TimeGrid& grid, const NoiseProfile& noise, int dim,
                         int steps_per_interval)
    : grid_(grid), dim_(dim), steps_(steps_per_interval),
      shared_(noise.kind() == NoiseProfile::Kind::kConstant) {
  if (steps_per_interval < 1) throw std::invalid_argument("InterpTable: steps must be >= 1");
  const int n_rows = shared_ ? 1 : grid.n_intervals();
  const double dt = grid.dt();
  rows_.resize(n_rows);
  for (int i = 0; i < n_rows; ++i) {
    rows_[i].reserve(steps_ - 1);
    const double t_i = grid.time(i);
    for (int j = 1; j < steps_; ++j)
      rows_[i].push_back(interp_coeffs(t_i, t_i + dt, t_i + dt * j / steps_, noise, dim));
  }
}

StateVector interpolate(const Trajectory& traj, const NoiseProfile& noise, double tau) {
  const TimeGrid& grid = traj.grid;
  if (tau < 0.0 || tau > grid.t_total())
    throw std::invalid_argument("interpolate: tau outside [0, t_total]");

  const double dt = grid.dt();
  int interval = std::min(static_cast<int>(tau / dt), grid.n_intervals() - 1);
  if (tau == grid.time(interval)) return traj.state(interval);
  if (tau == grid.time(interval + 1)) return traj.state(interval + 1);

  const InterpCoeffs c =
      interp_coeffs(grid.time(interval), grid.time(interval + 1), tau, noise, traj.dim);
  const Vector state = interp_apply(c, state_block(traj.values, interval, traj.dim),
                                    state_block(traj.values, interval + 1, traj.dim));
  return StateVector{state.head(traj.dim), state.tail(traj.dim)};
}

Trajectory densify(const Trajectory& traj, const InterpTable& table) {
  const int dim = traj.dim;
  const int s = state_size(dim);
  const int n_int = traj.grid.n_intervals();
  const int steps = table.steps();

  Trajectory dense{TimeGrid(traj.grid.t_total(), n_int * steps + 1), dim,
                   Vector(static_cast<Eigen::Index>(s) * (n_int * steps + 1))};
  for (int i = 0; i < n_int; ++i) {
    const auto th_i = state_block(traj.values, i, dim);
    const auto th_next = state_block(traj.values, i + 1, dim);
    state_block(dense.values, i * steps, dim) = th_i;
    for (int j = 1; j < steps; ++j)
      state_block(dense.values, i * steps + j, dim) =
          interp_apply(table.coeffs(i, j), th_i, th_next);
  }
  state_block(dense.values, n_int * steps, dim) = state_block(traj.values, n_int, dim);
  return dense;
}

}  // namespace hetgp
