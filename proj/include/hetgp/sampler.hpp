#pragma once

#include <cstdint>
#include <vector>

#include "hetgp/gp_prior.hpp"
#include "hetgp/rng.hpp"
#include "hetgp/types.hpp"

namespace hetgp {

/// One realized trajectory: stacked support states on a time grid.
struct Trajectory {
  TimeGrid grid{1.0, 2};
  int dim = 0;
  Vector values;

  StateVector state(int i) const {
    return StateVector{Vector(position_block(values, i, dim)),
                       Vector(velocity_block(values, i, dim))};
  }
};

/// Block-banded lower Cholesky factor L of the prior precision, L L^T = K^-1.
/// Sampling uses theta = mean + L^-T z, so the implicit covariance factor
/// A = L^-T satisfies K = A A^T without ever forming the dense kernel.
struct PrecisionFactor {
  int dim = 0;
  TimeGrid grid{1.0, 2};
  std::vector<Matrix> diag;     // N+1 lower-triangular blocks
  std::vector<Matrix> subdiag;  // N blocks, band below the diagonal

  /// In place: overwrite z with L^-T z (one banded back-substitution).
  void solve_transpose_in_place(Vector& z) const;
};

/// Block Cholesky of the assembled precision; cost linear in the number of
/// support states. Throws NotPositiveDefinite with the failing block index.
PrecisionFactor factorize(const GpPrior& prior);

/// theta = mean + L^-T z for a given standard-normal vector z.
Trajectory sample(const PrecisionFactor& factor, const Vector& mean, const Vector& z);

/// Draw `count` independent trajectories. Each sample k consumes its own
/// RNG substream (seed, stream_offset + k), so partitioning the batch across
/// workers cannot change the result.
std::vector<Trajectory> sample_batch(const PrecisionFactor& factor, const Vector& mean,
                                     int count, uint64_t seed, uint64_t stream_offset = 0,
                                     int worker_count = 1);

/// z-vector for substream (seed, stream).
Vector standard_normal_vector(Eigen::Index size, uint64_t seed, uint64_t stream);

}  // namespace hetgp
