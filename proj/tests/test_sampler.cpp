#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hetgp/gp_prior.hpp"
#include "hetgp/sampler.hpp"
#include "oracles.hpp"

using namespace hetgp;

namespace {

GpPrior test_prior(int n_intervals, int dim, const NoiseProfile& noise) {
  const TimeGrid grid(20.0, n_intervals + 1);
  return build_prior(Vector::Zero(dim), Vector::Ones(dim) * 10.0, grid, noise, 1e-6, 1e-6);
}

Matrix reconstruct_precision(const PrecisionFactor& f) {
  const int s = state_size(f.dim);
  const int n = f.grid.n_support();
  Matrix l = Matrix::Zero(static_cast<Eigen::Index>(s) * n, static_cast<Eigen::Index>(s) * n);
  for (int i = 0; i < n; ++i) l.block(i * s, i * s, s, s) = f.diag[i];
  for (int i = 0; i + 1 < n; ++i) l.block((i + 1) * s, i * s, s, s) = f.subdiag[i];
  return l * l.transpose();
}

}  // namespace

TEST_CASE("block Cholesky reconstructs the assembled precision") {
  for (const auto& noise : {NoiseProfile::constant(1.1), NoiseProfile::parabolic(20.0)}) {
    const GpPrior prior = test_prior(2, 1, noise);
    const Matrix k_inv = dense_precision(prior);
    const Matrix rebuilt = reconstruct_precision(factorize(prior));
    CHECK((rebuilt - k_inv).norm() < 1e-9 * k_inv.norm());
  }
}

TEST_CASE("identity precision factorizes to the identity") {
  GpPrior prior;
  prior.dim = 1;
  prior.grid = TimeGrid(1.0, 3);
  prior.mean = Vector::Zero(6);
  prior.prec_diag.assign(3, Matrix::Identity(2, 2));
  prior.prec_offdiag.assign(2, Matrix::Zero(2, 2));
  const PrecisionFactor f = factorize(prior);
  for (const auto& block : f.diag) CHECK(block.isApprox(Matrix::Identity(2, 2), 1e-14));
  for (const auto& block : f.subdiag) CHECK(block.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("factorize reports the failing block of an indefinite matrix") {
  GpPrior prior;
  prior.dim = 1;
  prior.grid = TimeGrid(1.0, 3);
  prior.mean = Vector::Zero(6);
  prior.prec_diag.assign(3, Matrix::Identity(2, 2));
  prior.prec_offdiag.assign(2, Matrix::Zero(2, 2));
  prior.prec_diag[1] = -Matrix::Identity(2, 2);
  CHECK_THROWS_WITH_AS(factorize(prior), doctest::Contains("block 1"), NotPositiveDefinite);
}

TEST_CASE("zero perturbation returns the mean exactly") {
  const GpPrior prior = test_prior(4, 2, NoiseProfile::parabolic(20.0));
  const Trajectory traj =
      sample(factorize(prior), prior.mean, Vector::Zero(prior.mean.size()));
  CHECK((traj.values - prior.mean).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampling is deterministic per seed and stream") {
  const GpPrior prior = test_prior(4, 1, NoiseProfile::constant(2.0));
  const PrecisionFactor f = factorize(prior);
  const Vector z1 = standard_normal_vector(prior.mean.size(), 42, 7);
  const Vector z2 = standard_normal_vector(prior.mean.size(), 42, 7);
  CHECK((z1 - z2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((sample(f, prior.mean, z1).values - sample(f, prior.mean, z2).values)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  CHECK_THROWS_AS(sample(f, prior.mean, Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("mean-shift equivariance holds to the last ulp") {
  // The perturbation L^-T z is bitwise identical for both means, so the
  // difference of samples equals the mean difference up to the rounding of
  // the two additions.
  const GpPrior prior = test_prior(4, 1, NoiseProfile::parabolic(20.0));
  const PrecisionFactor f = factorize(prior);
  const Vector mean2 = prior.mean + Vector::Constant(prior.mean.size(), 3.25);
  for (int k = 0; k < 20; ++k) {
    const Vector z = standard_normal_vector(prior.mean.size(), 5, k);
    const Trajectory s1 = sample(f, mean2, z);
    const Trajectory s2 = sample(f, prior.mean, z);
    const double scale = std::max({1.0, s1.values.cwiseAbs().maxCoeff(),
                                   s2.values.cwiseAbs().maxCoeff()});
    const double ulp_bound = 8.0 * std::numeric_limits<double>::epsilon() * scale;
    CHECK(((s1.values - s2.values) - (mean2 - prior.mean)).cwiseAbs().maxCoeff() <= ulp_bound);
  }
}

TEST_CASE("empirical moments match the dense kernel") {
  constexpr int kSamples = 100'000;
  for (const auto& noise : {NoiseProfile::constant(2.0), NoiseProfile::parabolic(20.0)}) {
    const GpPrior prior = test_prior(4, 1, noise);
    const PrecisionFactor f = factorize(prior);
    const Matrix kernel = dense_kernel(prior);
    const auto n = prior.mean.size();

    Vector mean_acc = Vector::Zero(n);
    Matrix cov_acc = Matrix::Zero(n, n);
    for (int k = 0; k < kSamples; ++k) {
      const Vector dev =
          sample(f, prior.mean, standard_normal_vector(n, 2024, k)).values - prior.mean;
      mean_acc += dev;
      cov_acc += dev * dev.transpose();
    }
    mean_acc /= kSamples;
    cov_acc /= kSamples;

    CHECK((cov_acc - kernel).norm() / kernel.norm() < 0.05);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double standard_error = std::sqrt(kernel(i, i) / kSamples);
      CHECK(std::abs(mean_acc[i]) < 3.0 * standard_error + 1e-12);
    }
  }
}

TEST_CASE("batch generation is worker-count independent") {
  const GpPrior prior = test_prior(4, 2, NoiseProfile::parabolic(20.0));
  const PrecisionFactor f = factorize(prior);

  const auto serial = sample_batch(f, prior.mean, 37, 11, 0, 1);
  const auto parallel = sample_batch(f, prior.mean, 37, 11, 0, 4);
  REQUIRE(serial.size() == parallel.size());
  for (size_t k = 0; k < serial.size(); ++k)
    CHECK((serial[k].values - parallel[k].values).cwiseAbs().maxCoeff() == 0.0);

  const auto single = sample_batch(f, prior.mean, 1, 11, 0, 1);
  CHECK((single[0].values - sample(f, prior.mean,
                                   standard_normal_vector(prior.mean.size(), 11, 0))
                                .values)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("samples stay anchored at both endpoints") {
  const GpPrior prior = test_prior(10, 1, NoiseProfile::parabolic(20.0));
  const PrecisionFactor f = factorize(prior);
  const int last = prior.grid.n_support() - 1;
  double max_dev = 0.0;
  for (int k = 0; k < 10'000; ++k) {
    const Trajectory traj =
        sample(f, prior.mean, standard_normal_vector(prior.mean.size(), 3, k));
    max_dev = std::max(max_dev,
                       std::abs(position_block(traj.values, 0, 1)[0] -
                                position_block(prior.mean, 0, 1)[0]));
    max_dev = std::max(max_dev,
                       std::abs(position_block(traj.values, last, 1)[0] -
                                position_block(prior.mean, last, 1)[0]));
  }
  CHECK(max_dev < 1e-2 * 10.0);  // workspace scale is the 10 m straight line
}

TEST_CASE("parabolic profile spreads more than matched constant near the endpoints") {
  constexpr int kSamples = 100'000;
  const GpPrior het = test_prior(10, 1, NoiseProfile::parabolic(20.0));
  const GpPrior hom = test_prior(10, 1, NoiseProfile::matched_constant(20.0));

  const auto position_std_at_state1 = [&](const GpPrior& prior, uint64_t seed) {
    const PrecisionFactor f = factorize(prior);
    double sum_sq = 0.0;
    for (int k = 0; k < kSamples; ++k) {
      const Trajectory traj =
          sample(f, prior.mean, standard_normal_vector(prior.mean.size(), seed, k));
      const double dev =
          position_block(traj.values, 1, 1)[0] - position_block(prior.mean, 1, 1)[0];
      sum_sq += dev * dev;
    }
    return std::sqrt(sum_sq / kSamples);
  };

  const double std_het = position_std_at_state1(het, 101);
  const double std_hom = position_std_at_state1(hom, 202);
  // Standard error of an std estimate is about sigma / sqrt(2 n).
  const double margin = 3.0 * (std_het + std_hom) / std::sqrt(2.0 * kSamples);
  CHECK(std_het > std_hom + margin);
}
