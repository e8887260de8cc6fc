#pragma once

#include <vector>

#include "hetgp/types.hpp"

namespace hetgp {

/// Goal-conditioned Gaussian-process trajectory prior in factored sparse form.
///
/// The distribution over the stacked support states is N(mean, K) where the
/// precision K^-1 is block tridiagonal; only its diagonal and lower
/// off-diagonal bands are stored. Both trajectory endpoints are anchored by
/// fictitious observations with variances anchor_var_start / anchor_var_goal.
struct GpPrior {
  int dim = 0;
  TimeGrid grid{1.0, 2};
  NoiseProfile noise = NoiseProfile::constant(1.0);
  double anchor_var_start = 1e-6;
  double anchor_var_goal = 1e-6;

  Vector mean;                       // 2*dim*(N+1) stacked states
  std::vector<Matrix> prec_diag;     // N+1 blocks, 2D x 2D
  std::vector<Matrix> prec_offdiag;  // N blocks, lower band of K^-1

  int n_support() const { return grid.n_support(); }
  Eigen::Index stacked_size() const {
    return static_cast<Eigen::Index>(state_size(dim)) * grid.n_support();
  }
};

/// State transition of the constant-velocity (white-noise-on-acceleration)
/// model over a time step: [[I, dt*I], [0, I]].
Matrix transition(double dt, int dim);

/// Process-noise covariance accumulated between two times,
/// Q_{a,b} = integral of Phi(t_b,s) L q_c(s) L^T Phi(t_b,s)^T ds with L = [0; I].
///
/// Constant profiles use the closed form; time-varying profiles use 3-point
/// Gauss-Legendre quadrature per panel, exact for polynomial q_c up to
/// degree 4 (the parabolic profile included).
Matrix process_noise_block(double t_a, double t_b, const NoiseProfile& noise, int dim);

/// Constant-velocity straight line: positions interpolate start -> goal,
/// velocity is (goal - start) / t_total at every support state.
Vector straight_line_mean(const Vector& start, const Vector& goal, const TimeGrid& grid);

/// Evaluate the straight-line mean state at an arbitrary time tau.
StateVector straight_line_state(const Vector& start, const Vector& goal, const TimeGrid& grid,
                                double tau);

/// Assemble the goal-conditioned prior. The block-tridiagonal precision is
/// built directly from transition and noise blocks, never materializing a
/// dense matrix, and the mean is the constant-velocity straight line.
GpPrior build_prior(const Vector& start, const Vector& goal, const TimeGrid& grid,
                    const NoiseProfile& noise, double sigma0_sq = 1e-6,
                    double sigmaN_sq = 1e-6);

/// Dense materializations for small instances (test oracle support).
Matrix dense_precision(const GpPrior& prior);
Matrix dense_kernel(const GpPrior& prior);

}  // namespace hetgp
