#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace hetgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// One trajectory state: workspace position and velocity, D coordinates each.
/// Stacked layout inside a state block is [p_1..p_D, v_1..v_D].
struct StateVector {
  Vector position;
  Vector velocity;

  int dim() const { return static_cast<int>(position.size()); }
};

/// Equidistant support-state times 0, dt, 2*dt, ..., t_total.
class TimeGrid {
 public:
  TimeGrid(double t_total, int n_support) : t_total_(t_total), n_support_(n_support) {
    if (n_support < 2) throw std::invalid_argument("TimeGrid: need at least 2 support states");
    if (!(t_total > 0.0)) throw std::invalid_argument("TimeGrid: t_total must be positive");
  }

  double t_total() const { return t_total_; }
  int n_support() const { return n_support_; }
  int n_intervals() const { return n_support_ - 1; }
  double dt() const { return t_total_ / n_intervals(); }
  double time(int i) const { return i * dt(); }

 private:
  double t_total_;
  int n_support_;
};

/// Power-spectral density q_c(t) of the white noise driving the prior.
/// The parabolic profile is (t - t_total/2)^2: high exploration power near
/// the trajectory endpoints, vanishing at the temporal midpoint.
class NoiseProfile {
 public:
  enum class Kind { kConstant, kParabolic, kCustom };

  static NoiseProfile constant(double q_c) {
    if (!(q_c >= 0.0)) throw std::invalid_argument("NoiseProfile: constant q_c must be >= 0");
    NoiseProfile p;
    p.kind_ = Kind::kConstant;
    p.q_c_ = q_c;
    return p;
  }

  static NoiseProfile parabolic(double t_total) {
    NoiseProfile p;
    p.kind_ = Kind::kParabolic;
    p.t_total_ = t_total;
    return p;
  }

  /// Constant profile with the same integrated power as parabolic(t_total):
  /// (1/T) * integral (t - T/2)^2 dt = T^2 / 12.
  static NoiseProfile matched_constant(double t_total) {
    return constant(t_total * t_total / 12.0);
  }

  /// Arbitrary non-negative user profile, integrated by composite quadrature
  /// with the given number of panels per requested interval.
  static NoiseProfile custom(std::function<double(double)> fn, int quad_panels = 16) {
    if (quad_panels < 1) throw std::invalid_argument("NoiseProfile: quad_panels must be >= 1");
    NoiseProfile p;
    p.kind_ = Kind::kCustom;
    p.fn_ = std::move(fn);
    p.quad_panels_ = quad_panels;
    return p;
  }

  Kind kind() const { return kind_; }
  int quad_panels() const { return quad_panels_; }
  double constant_value() const { return q_c_; }
  double parabolic_center() const { return 0.5 * t_total_; }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::kConstant:
        return q_c_;
      case Kind::kParabolic: {
        const double s = t - 0.5 * t_total_;
        return s * s;
      }
      case Kind::kCustom: {
        const double v = fn_(t);
        if (v < 0.0) throw std::domain_error("NoiseProfile: q_c(t) evaluated negative at t=" + std::to_string(t));
        return v;
      }
    }
    return 0.0;
  }

 private:
  NoiseProfile() = default;

  Kind kind_ = Kind::kConstant;
  double q_c_ = 1.0;
  double t_total_ = 0.0;
  std::function<double(double)> fn_;
  int quad_panels_ = 1;
};

/// Thrown when a precision matrix turns out not to be positive definite;
/// carries the support-state block where factorization failed.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(int block_index)
      : std::runtime_error("precision matrix not positive definite at block " +
                           std::to_string(block_index)),
        block_index_(block_index) {}

  int block_index() const { return block_index_; }

 private:
  int block_index_;
};

// Stacked-state helpers. A trajectory over n support states in D dimensions
// is a single vector of n blocks of size 2D, each [positions, velocities].

inline int state_size(int dim) { return 2 * dim; }

inline Eigen::VectorBlock<Vector> state_block(Vector& stacked, int i, int dim) {
  return stacked.segment(static_cast<Eigen::Index>(i) * state_size(dim), state_size(dim));
}

inline Eigen::VectorBlock<const Vector> state_block(const Vector& stacked, int i, int dim) {
  return stacked.segment(static_cast<Eigen::Index>(i) * state_size(dim), state_size(dim));
}

inline Eigen::VectorBlock<const Vector> position_block(const Vector& stacked, int i, int dim) {
  return stacked.segment(static_cast<Eigen::Index>(i) * state_size(dim), dim);
}

inline Eigen::VectorBlock<const Vector> velocity_block(const Vector& stacked, int i, int dim) {
  return stacked.segment(static_cast<Eigen::Index>(i) * state_size(dim) + dim, dim);
}

}  // namespace hetgp
