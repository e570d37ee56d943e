#pragma once

// Modal (Fourier sine) representation of 1-D wave states on (0,1) with
// homogeneous Dirichlet ends, exact free propagation and the quadratures
// every subdomain integral in the library reduces to.

#include <Eigen/Dense>

#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace impwave {

inline constexpr double kPi = std::numbers::pi;

/// sin(pi*x) and cos(pi*x) with exact argument reduction. Integer and
/// half-integer arguments give exact zeros and unit values, so e.g.
/// propagation over a full period is bit-exact.
double sin_pi(double x);
double cos_pi(double x);

/// Truncated state (kappa, kappa_t):
///   kappa(x)   = sum_n pos[n-1] sin(n pi x)
///   kappa_t(x) = sum_n vel[n-1] sin(n pi x)
class ModalState {
 public:
  ModalState(Eigen::VectorXd pos, Eigen::VectorXd vel);

  static ModalState zero(int n_modes);
  static ModalState from_stacked(const Eigen::Ref<const Eigen::VectorXd>& stacked);

  int n_modes() const { return static_cast<int>(pos_.size()); }
  const Eigen::VectorXd& pos() const { return pos_; }
  const Eigen::VectorXd& vel() const { return vel_; }

  /// [pos; vel] as a single 2N vector.
  Eigen::VectorXd stacked() const;

  ModalState& operator+=(const ModalState& other);
  ModalState& operator-=(const ModalState& other);
  ModalState& operator*=(double s);

 private:
  Eigen::VectorXd pos_;
  Eigen::VectorXd vel_;
};

ModalState operator+(ModalState lhs, const ModalState& rhs);
ModalState operator-(ModalState lhs, const ModalState& rhs);
ModalState operator*(double s, ModalState state);

/// Subdomain omega = (lo, hi) of (0,1).
class SubInterval {
 public:
  SubInterval(double lo, double hi);

  static SubInterval full() { return {0.0, 1.0}; }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  bool is_full() const { return lo_ == 0.0 && hi_ == 1.0; }
  bool contains(double x) const { return lo_ < x && x < hi_; }

  friend bool operator==(const SubInterval&, const SubInterval&) = default;

 private:
  double lo_;
  double hi_;
};

enum class Field { Position, Velocity };

/// How the L^2 x H^-1 norm is normalised.
///   Coefficient: sum(a_n^2 + b_n^2/(n pi)^2)
///   Integral:    half of that (the true integral, since int sin^2 = 1/2)
enum class WeakNorm { Integral, Coefficient };

WeakNorm parse_weak_norm(std::string_view tag);
std::string_view to_string(WeakNorm convention);

/// Exact flow of the wave group over dt (any sign).
ModalState propagate(const ModalState& state, double dt);

/// int |kappa_x|^2 + int |kappa_t|^2 over (0,1).
double energy_state_space(const ModalState& state);

double norm_sq_weak(const ModalState& state, WeakNorm convention);

/// M(m,n) = int_omega sin(m pi x) sin(n pi x) dx, closed form.
Eigen::MatrixXd mass_matrix(const SubInterval& omega, int n);

/// Pointwise synthesis of one field at points in [0,1].
std::vector<double> evaluate_on_grid(const ModalState& state,
                                     std::span<const double> points,
                                     Field which);

/// Sine coefficients c_n = 2 int_0^1 f sin(n pi x) dx from samples on the
/// uniform grid x_j = j/(samples.size()-1), endpoints included. The
/// trapezoid rule is exact for sine polynomials of degree below the grid
/// size, so band-limited inputs round-trip to rounding error.
Eigen::VectorXd coeffs_from_samples(std::span<const double> samples, int n_modes);

}  // namespace impwave
