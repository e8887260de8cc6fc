#include "hetgp/sampler.hpp"

#include <Eigen/Cholesky>

#include <stdexcept>
#include <thread>

namespace hetgp {

void PrecisionFactor::solve_transpose_in_place(Vector& z) const {
  // L^T is upper block-bidiagonal: solve L^T x = z from the last state down.
  const int s = state_size(dim);
  const int last = grid.n_support() - 1;
  diag[last].transpose().triangularView<Eigen::Upper>().solveInPlace(
      z.segment(static_cast<Eigen::Index>(last) * s, s));
  for (int i = last - 1; i >= 0; --i) {
    auto zi = z.segment(static_cast<Eigen::Index>(i) * s, s);
    zi.noalias() -= subdiag[i].transpose() * z.segment(static_cast<Eigen::Index>(i + 1) * s, s);
    diag[i].transpose().triangularView<Eigen::Upper>().solveInPlace(zi);
  }
}

PrecisionFactor factorize(const GpPrior& prior) {
  const int s = state_size(prior.dim);
  const int n = prior.grid.n_support();

  PrecisionFactor factor;
  factor.dim = prior.dim;
  factor.grid = prior.grid;
  factor.diag.resize(n);
  factor.subdiag.resize(n - 1);

  Matrix pivot = prior.prec_diag[0];
  for (int i = 0; i < n; ++i) {
    Eigen::LLT<Matrix> llt(pivot);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite(i);
    factor.diag[i] = llt.matrixL();
    if (i + 1 < n) {
      // Subdiagonal block: O_i L_ii^-T, then the next Schur pivot.
      Matrix sub = prior.prec_offdiag[i];
      factor.diag[i].transpose().triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(
          sub);
      factor.subdiag[i] = sub;
      pivot = prior.prec_diag[i + 1] - sub * sub.transpose();
    }
  }
  return factor;
}

Trajectory sample(const PrecisionFactor& factor, const Vector& mean, const Vector& z) {
  const Eigen::Index expected =
      static_cast<Eigen::Index>(state_size(factor.dim)) * factor.grid.n_support();
  if (mean.size() != expected || z.size() != expected)
    throw std::invalid_argument("sample: mean/z size mismatch with factor");

  Vector perturbation = z;
  factor.solve_transpose_in_place(perturbation);
  return Trajectory{factor.grid, factor.dim, mean + perturbation};
}

Vector standard_normal_vector(Eigen::Index size, uint64_t seed, uint64_t stream) {
  Rng rng(seed, stream);
  Vector z(size);
  for (Eigen::Index i = 0; i < size; ++i) z[i] = rng.normal();
  return z;
}

std::vector<Trajectory> sample_batch(const PrecisionFactor& factor, const Vector& mean,
                                     int count, uint64_t seed, uint64_t stream_offset,
                                     int worker_count) {
  if (count < 1) throw std::invalid_argument("sample_batch: count must be >= 1");
  const Eigen::Index size = mean.size();

  std::vector<Trajectory> batch(count);
  auto fill_range = [&](int begin, int end) {
    for (int k = begin; k < end; ++k)
      batch[k] = sample(factor, mean, standard_normal_vector(size, seed, stream_offset + k));
  };

  if (worker_count <= 1 || count == 1) {
    fill_range(0, count);
    return batch;
  }
  const int workers = std::min(worker_count, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(static_cast<long>(count) * w / workers);
    const int end = static_cast<int>(static_cast<long>(count) * (w + 1) / workers);
    pool.emplace_back(fill_range, begin, end);
  }
  for (auto& t : pool) t.join();
  return batch;
}

}  // namespace hetgp
