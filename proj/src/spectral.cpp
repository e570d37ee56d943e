#include "impwave/spectral.hpp"

#include "impwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace impwave {

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.0) return -sin_pi(-x);
  double r = std::fmod(x, 2.0);
  double sign = 1.0;
  if (r >= 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;
  if (r == 0.0) return 0.0;
  const double v = r <= 0.25 ? std::sin(kPi * r) : std::cos(kPi * (0.5 - r));
  return sign * v;
}

double cos_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  double r = std::fmod(std::abs(x), 2.0);
  if (r > 1.0) r = 2.0 - r;
  double sign = 1.0;
  if (r > 0.5) {
    r = 1.0 - r;
    sign = -1.0;
  }
  if (r == 0.5) return 0.0;
  const double v = r <= 0.25 ? std::cos(kPi * r) : std::sin(kPi * (0.5 - r));
  return sign * v;
}

// ---------------------------------------------------------------------------
// ModalState

namespace {

void require_finite(const Eigen::VectorXd& v, const char* field) {
  if (!v.allFinite()) throw InputError(field, std::string(field) + " must be finite");
}

}  // namespace

ModalState::ModalState(Eigen::VectorXd pos, Eigen::VectorXd vel)
    : pos_(std::move(pos)), vel_(std::move(vel)) {
  if (pos_.size() < 1) throw InputError("n_modes", "a modal state needs at least one mode");
  if (pos_.size() != vel_.size())
    throw InputError("vel", "position and velocity coefficient counts differ");
  require_finite(pos_, "pos");
  require_finite(vel_, "vel");
}

ModalState ModalState::zero(int n_modes) {
  if (n_modes < 1) throw InputError("n_modes", "n_modes must be >= 1");
  return {Eigen::VectorXd::Zero(n_modes), Eigen::VectorXd::Zero(n_modes)};
}

ModalState ModalState::from_stacked(const Eigen::Ref<const Eigen::VectorXd>& stacked) {
  if (stacked.size() < 2 || stacked.size() % 2 != 0)
    throw InputError("stacked", "stacked state must have even length >= 2");
  const Eigen::Index n = stacked.size() / 2;
  return {stacked.head(n), stacked.tail(n)};
}

Eigen::VectorXd ModalState::stacked() const {
  Eigen::VectorXd out(2 * pos_.size());
  out << pos_, vel_;
  return out;
}

ModalState& ModalState::operator+=(const ModalState& other) {
  if (other.n_modes() != n_modes()) throw InputError("n_modes", "mode count mismatch");
  pos_ += other.pos_;
  vel_ += other.vel_;
  return *this;
}

ModalState& ModalState::operator-=(const ModalState& other) {
  if (other.n_modes() != n_modes()) throw InputError("n_modes", "mode count mismatch");
  pos_ -= other.pos_;
  vel_ -= other.vel_;
  return *this;
}

ModalState& ModalState::operator*=(double s) {
  pos_ *= s;
  vel_ *= s;
  return *this;
}

ModalState operator+(ModalState lhs, const ModalState& rhs) { return lhs += rhs; }
ModalState operator-(ModalState lhs, const ModalState& rhs) { return lhs -= rhs; }
ModalState operator*(double s, ModalState state) { return state *= s; }

// ---------------------------------------------------------------------------
// SubInterval

SubInterval::SubInterval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw InputError("omega", "interval bounds must be finite");
  if (!(0.0 <= lo && lo < hi && hi <= 1.0))
    throw InputError("omega", "interval must satisfy 0 <= lo < hi <= 1");
}

WeakNorm parse_weak_norm(std::string_view tag) {
  if (tag == "integral") return WeakNorm::Integral;
  if (tag == "coefficient") return WeakNorm::Coefficient;
  throw InputError("convention", "unknown weak-norm convention '" + std::string(tag) + "'");
}

std::string_view to_string(WeakNorm convention) {
  return convention == WeakNorm::Integral ? "integral" : "coefficient";
}

// ---------------------------------------------------------------------------
// Operations

ModalState propagate(const ModalState& state, double dt) {
  if (!std::isfinite(dt)) throw InputError("dt", "propagation time must be finite");
  const int n_modes = state.n_modes();
  Eigen::VectorXd a(n_modes), b(n_modes);
  for (int i = 0; i < n_modes; ++i) {
    const double n = i + 1;
    const double w = n * kPi;
    const double s = sin_pi(n * dt);
    const double c = cos_pi(n * dt);
    const double a0 = state.pos()[i];
    const double b0 = state.vel()[i];
    a[i] = a0 * c + b0 * s / w;
    b[i] = -a0 * w * s + b0 * c;
  }
  return {std::move(a), std::move(b)};
}

double energy_state_space(const ModalState& state) {
  double sum = 0.0;
  for (int i = 0; i < state.n_modes(); ++i) {
    const double w = (i + 1) * kPi;
    const double pa = w * state.pos()[i];
    sum += pa * pa + state.vel()[i] * state.vel()[i];
  }
  return 0.5 * sum;
}

double norm_sq_weak(const ModalState& state, WeakNorm convention) {
  double sum = 0.0;
  for (int i = 0; i < state.n_modes(); ++i) {
    const double w = (i + 1) * kPi;
    const double vb = state.vel()[i] / w;
    sum += state.pos()[i] * state.pos()[i] + vb * vb;
  }
  return convention == WeakNorm::Coefficient ? sum : 0.5 * sum;
}

Eigen::MatrixXd mass_matrix(const SubInterval& omega, int n) {
  if (n < 1) throw InputError("n", "mass matrix dimension must be >= 1");
  if (omega.is_full()) return 0.5 * Eigen::MatrixXd::Identity(n, n);

  const double lo = omega.lo();
  const double hi = omega.hi();
  // [sin(k pi x) / (k pi)] from lo to hi
  auto bracket = [&](int k) { return (sin_pi(k * hi) - sin_pi(k * lo)) / (k * kPi); };

  Eigen::MatrixXd m(n, n);
  for (int i = 1; i <= n; ++i) {
    m(i - 1, i - 1) = 0.5 * (hi - lo - bracket(2 * i));
    for (int j = i + 1; j <= n; ++j) {
      const double v = 0.5 * (bracket(j - i) - bracket(j + i));
      m(i - 1, j - 1) = v;
      m(j - 1, i - 1) = v;
    }
  }
  return m;
}

std::vector<double> evaluate_on_grid(const ModalState& state,
                                     std::span<const double> points,
                                     Field which) {
  const Eigen::VectorXd& c = which == Field::Position ? state.pos() : state.vel();
  std::vector<double> out;
  out.reserve(points.size());
  for (double x : points) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("points", "evaluation point outside [0,1]");
    double v = 0.0;
    if (x > 0.0 && x < 1.0) {
      for (Eigen::Index i = 0; i < c.size(); ++i) v += c[i] * sin_pi((i + 1) * x);
    }
    out.push_back(v);
  }
  return out;
}

Eigen::VectorXd coeffs_from_samples(std::span<const double> samples, int n_modes) {
  if (n_modes < 1) throw InputError("n_modes", "n_modes must be >= 1");
  const auto intervals = static_cast<long>(samples.size()) - 1;
  const long interior = intervals - 1;
  if (interior < 4L * n_modes)
    throw InputError("samples", "grid needs at least 4*n_modes interior points");

  double scale = 1.0;
  for (double f : samples) {
    if (!std::isfinite(f)) throw InputError("samples", "samples must be finite");
    scale = std::max(scale, std::abs(f));
  }
  if (std::abs(samples.front()) > 1e-9 * scale || std::abs(samples.back()) > 1e-9 * scale)
    throw InputError("samples", "samples must vanish at the endpoints");

  const double h = 1.0 / static_cast<double>(intervals);
  Eigen::VectorXd c(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    double sum = 0.0;
    for (long j = 1; j <= interior; ++j) {
      sum += samples[j] * sin_pi(static_cast<double>(n * j) / static_cast<double>(intervals));
    }
    c[n - 1] = 2.0 * h * sum;
  }
  return c;
}

}  // namespace impwave
