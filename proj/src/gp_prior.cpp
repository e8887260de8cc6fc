#include "hetgp/gp_prior.hpp"

#include <Eigen/Cholesky>

#include <array>
#include <cmath>
#include <stdexcept>

namespace hetgp {

Matrix transition(double dt, int dim) {
  if (dt < 0.0) throw std::invalid_argument("transition: dt must be non-negative");
  const int s = state_size(dim);
  Matrix phi = Matrix::Identity(s, s);
  phi.topRightCorner(dim, dim) = dt * Matrix::Identity(dim, dim);
  return phi;
}

namespace {

// Scalar moments of q_c against powers of (t_b - s):
//   m[k] = integral_{t_a}^{t_b} q_c(s) (t_b - s)^k ds,  k = 0, 1, 2.
// Q_{a,b} is assembled from these since Phi(t_b,s) L = [(t_b - s) I; I].
std::array<double, 3> noise_moments(double t_a, double t_b, const NoiseProfile& noise) {
  if (noise.kind() == NoiseProfile::Kind::kConstant) {
    const double d = t_b - t_a;
    const double q = noise.constant_value();
    return {q * d, q * d * d / 2.0, q * d * d * d / 3.0};
  }
  // Composite 3-point Gauss-Legendre: exact for integrands of degree <= 5,
  // which covers the parabolic profile (degree 4 after the (t_b-s)^2 factor).
  static const double kNode = std::sqrt(3.0 / 5.0);
  static constexpr double kW0 = 5.0 / 9.0;
  static constexpr double kW1 = 8.0 / 9.0;
  const int panels = noise.kind() == NoiseProfile::Kind::kParabolic ? 1 : noise.quad_panels();

  std::array<double, 3> m{0.0, 0.0, 0.0};
  const double panel_width = (t_b - t_a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = t_a + p * panel_width;
    const double mid = lo + 0.5 * panel_width;
    const double half = 0.5 * panel_width;
    const double nodes[3] = {mid - kNode * half, mid, mid + kNode * half};
    const double weights[3] = {kW0 * half, kW1 * half, kW0 * half};
    for (int g = 0; g < 3; ++g) {
      const double s = nodes[g];
      const double q = noise(s);
      const double r = t_b - s;
      m[0] += weights[g] * q;
      m[1] += weights[g] * q * r;
      m[2] += weights[g] * q * r * r;
    }
  }
  return m;
}

}  // namespace

Matrix process_noise_block(double t_a, double t_b, const NoiseProfile& noise, int dim) {
  if (!(t_b > t_a)) throw std::invalid_argument("process_noise_block: t_b must exceed t_a");
  const auto m = noise_moments(t_a, t_b, noise);
  const int s = state_size(dim);
  Matrix q = Matrix::Zero(s, s);
  const Matrix eye = Matrix::Identity(dim, dim);
  q.topLeftCorner(dim, dim) = m[2] * eye;
  q.topRightCorner(dim, dim) = m[1] * eye;
  q.bottomLeftCorner(dim, dim) = m[1] * eye;
  q.bottomRightCorner(dim, dim) = m[0] * eye;
  return q;
}

Vector straight_line_mean(const Vector& start, const Vector& goal, const TimeGrid& grid) {
  if (start.size() != goal.size())
    throw std::invalid_argument("straight_line_mean: start/goal dimension mismatch");
  const int dim = static_cast<int>(start.size());
  const int n = grid.n_support();
  const Vector velocity = (goal - start) / grid.t_total();

  Vector mean(static_cast<Eigen::Index>(state_size(dim)) * n);
  for (int i = 0; i < n; ++i) {
    const double alpha = static_cast<double>(i) / grid.n_intervals();
    auto block = state_block(mean, i, dim);
    block.head(dim) = start + alpha * (goal - start);
    block.tail(dim) = velocity;
  }
  return mean;
}

StateVector straight_line_state(const Vector& start, const Vector& goal, const TimeGrid& grid,
                                double tau) {
  const Vector velocity = (goal - start) / grid.t_total();
  return StateVector{start + (tau / grid.t_total()) * (goal - start), velocity};
}

GpPrior build_prior(const Vector& start, const Vector& goal, const TimeGrid& grid,
                    const NoiseProfile& noise, double sigma0_sq, double sigmaN_sq) {
  if (!(sigma0_sq > 0.0) || !(sigmaN_sq > 0.0))
    throw std::invalid_argument("build_prior: anchor variances must be positive");
  if (start.size() != goal.size())
    throw std::invalid_argument("build_prior: start/goal dimension mismatch");

  const int dim = static_cast<int>(start.size());
  const int s = state_size(dim);
  const int n_int = grid.n_intervals();

  GpPrior prior;
  prior.dim = dim;
  prior.grid = grid;
  prior.noise = noise;
  prior.anchor_var_start = sigma0_sq;
  prior.anchor_var_goal = sigmaN_sq;
  prior.mean = straight_line_mean(start, goal, grid);
  prior.prec_diag.assign(grid.n_support(), Matrix::Zero(s, s));
  prior.prec_offdiag.assign(n_int, Matrix::Zero(s, s));

  const Matrix phi = transition(grid.dt(), dim);
  prior.prec_diag[0] = Matrix::Identity(s, s) / sigma0_sq;
  prior.prec_diag[n_int] = Matrix::Identity(s, s) / sigmaN_sq;

  for (int i = 0; i < n_int; ++i) {
    const Matrix q = process_noise_block(grid.time(i), grid.time(i + 1), noise, dim);
    Eigen::LLT<Matrix> llt(q);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite(i);
    const Matrix q_inv = llt.solve(Matrix::Identity(s, s));

    prior.prec_diag[i] += phi.transpose() * q_inv * phi;
    prior.prec_diag[i + 1] += q_inv;
    prior.prec_offdiag[i] = -q_inv * phi;
  }
  return prior;
}

Matrix dense_precision(const GpPrior& prior) {
  const int s = state_size(prior.dim);
  const Eigen::Index total = prior.stacked_size();
  Matrix k_inv = Matrix::Zero(total, total);
  for (int i = 0; i < prior.grid.n_support(); ++i)
    k_inv.block(i * s, i * s, s, s) = prior.prec_diag[i];
  for (int i = 0; i < prior.grid.n_intervals(); ++i) {
    k_inv.block((i + 1) * s, i * s, s, s) = prior.prec_offdiag[i];
    k_inv.block(i * s, (i + 1) * s, s, s) = prior.prec_offdiag[i].transpose();
  }
  return k_inv;
}

Matrix dense_kernel(const GpPrior& prior) {
  if (prior.grid.n_intervals() > 50)
    throw std::invalid_argument("dense_kernel: instance too large for dense inversion");
  const Matrix k_inv = dense_precision(prior);
  Eigen::LLT<Matrix> llt(k_inv);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(-1);
  return llt.solve(Matrix::Identity(k_inv.rows(), k_inv.cols()));
}

}  // namespace hetgp
