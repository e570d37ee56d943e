#include "impwave/controllability.hpp"

#include "impwave/error.hpp"
#include "impwave/impulsive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace impwave {

ModalState adjoint_solve(const ModalState& theta0, double t) { return propagate(theta0, -t); }

StateNorm parse_state_norm(std::string_view tag) {
  if (tag == "energy") return StateNorm::Energy;
  if (tag == "weak") return StateNorm::Weak;
  throw InputError("norm", "unknown state norm '" + std::string(tag) + "'");
}

std::string_view to_string(StateNorm norm) { return norm == StateNorm::Energy ? "energy" : "weak"; }

double state_norm(const ModalState& state, StateNorm norm) {
  return std::sqrt(norm == StateNorm::Energy ? energy_state_space(state)
                                             : norm_sq_weak(state, WeakNorm::Coefficient));
}

ControlProblem::ControlProblem(double tau, double horizon, SubInterval omega, ModalState initial,
                               ModalState target)
    : tau_(tau),
      horizon_(horizon),
      omega_(omega),
      initial_(std::move(initial)),
      target_(std::move(target)) {
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw InputError("horizon", "horizon must be positive and finite");
  if (!std::isfinite(tau) || tau <= 0.0 || tau >= horizon)
    throw InputError("tau", "impulse time must satisfy 0 < tau < T");
  if (target_.n_modes() != initial_.n_modes())
    throw InputError("target", "target and initial state disagree on n_modes");
}

Eigen::VectorXd ControlProblem::drift_gap() const {
  return (target_ - propagate(initial_, horizon_)).stacked();
}

GramianOperator build_gramian(const ControlProblem& problem) {
  const int n = problem.n_modes();
  const double flight = problem.horizon() - problem.tau();
  GramianOperator out;
  out.factor.resize(2 * n, n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd unit = Eigen::VectorXd::Unit(n, j);
    const ModalState kicked(Eigen::VectorXd::Zero(n), masked_velocity_jump(unit, problem.omega()));
    out.factor.col(j) = propagate(kicked, flight).stacked();
  }
  out.product = out.factor * out.factor.transpose();
  return out;
}

RegularizedControl regularized_solve(const GramianOperator& gramian, const Eigen::VectorXd& z,
                                     double alpha, StateNorm norm) {
  if (!std::isfinite(alpha) || alpha <= 0.0) throw InputError("alpha", "alpha must be positive");
  const Eigen::Index dim = gramian.product.rows();
  if (z.size() != dim) throw InputError("target", "gap vector has the wrong dimension");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(gramian.product, Eigen::EigenvaluesOnly);
  const double lmax = std::max(spectrum.eigenvalues().maxCoeff(), 0.0);
  const double lmin = std::max(spectrum.eigenvalues().minCoeff(), 0.0);
  const double condition = (alpha + lmax) / (alpha + lmin);
  if (condition > kMaxCondition)
    throw IllConditionedError("alpha I + G G^T is too ill-conditioned to factor", condition);

  const Eigen::MatrixXd system = alpha * Eigen::MatrixXd::Identity(dim, dim) + gramian.product;
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success)
    throw IllConditionedError("Cholesky factorisation of alpha I + G G^T failed", condition);

  RegularizedControl out;
  out.alpha = alpha;
  // cond(alpha I + G G^T) reaches 1/alpha. Refine in long double against the
  // product rebuilt from the factor, and keep y there: G^T must cancel its
  // 1/alpha-sized component without double rounding on top.
  using VecL = Eigen::VectorX<long double>;
  const Eigen::MatrixX<long double> g_ld = gramian.factor.cast<long double>();
  const VecL z_ld = z.cast<long double>();
  VecL y = llt.solve(z).cast<long double>();
  for (int pass = 0; pass < 3; ++pass) {
    const VecL r = z_ld - static_cast<long double>(alpha) * y - g_ld * (g_ld.transpose() * y);
    y += llt.solve(r.cast<double>()).cast<long double>();
  }
  out.control = (g_ld.transpose() * y).cast<double>();
  out.residual_vector = (z_ld - g_ld * out.control.cast<long double>()).cast<double>();
  out.residual = state_norm(ModalState::from_stacked(out.residual_vector), norm);
  return out;
}

RegularizedControl regularized_control(const ControlProblem& problem, double alpha, StateNorm norm) {
  return regularized_solve(build_gramian(problem), problem.drift_gap(), alpha, norm);
}

ControlOutcome approx_control(const ControlProblem& problem, double epsilon, StateNorm norm) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw InputError("epsilon", "epsilon must be positive");
  const GramianOperator gramian = build_gramian(problem);
  const Eigen::VectorXd z = problem.drift_gap();

  ControlOutcome out;
  out.control = Eigen::VectorXd::Zero(problem.n_modes());
  out.residual = state_norm(ModalState::from_stacked(z), norm);

  auto stalled = [](double older, double newer) {
    return std::abs(newer - older) <= 1e-3 * older;
  };

  for (int k = 1; k <= 20; ++k) {
    const double alpha = std::pow(10.0, -k);
    RegularizedControl step;
    try {
      step = regularized_solve(gramian, z, alpha, norm);
    } catch (const IllConditionedError&) {
      break;
    }
    out.trace.push_back({alpha, step.residual});
    out.control = step.control;
    out.residual = step.residual;
    out.alpha = alpha;
    if (step.residual < epsilon) {
      out.reached = true;
      return out;
    }
    const std::size_t m = out.trace.size();
    if (m >= 3 && stalled(out.trace[m - 2].residual, out.trace[m - 1].residual) &&
        stalled(out.trace[m - 3].residual, out.trace[m - 2].residual)) {
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chebyshev

Polynomial::Polynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InputError("coeffs", "polynomial needs at least one coefficient");
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + static_cast<double>(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return Polynomial({0});
  std::vector<std::int64_t> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    if (__builtin_mul_overflow(coeffs_[k], static_cast<std::int64_t>(k), &d[k - 1]))
      throw InputError("coeffs", "derivative coefficient overflows int64");
  }
  return Polynomial(std::move(d));
}

Polynomial chebyshev_U(int n) {
  if (n < 0) throw InputError("n", "Chebyshev index must be >= 0");
  std::vector<std::int64_t> prev{1};
  if (n == 0) return Polynomial(prev);
  std::vector<std::int64_t> cur{0, 2};
  for (int k = 1; k < n; ++k) {
    std::vector<std::int64_t> next(cur.size() + 1, 0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (__builtin_mul_overflow(cur[i], std::int64_t{2}, &next[i + 1]))
        throw InputError("n", "U_" + std::to_string(n) + " coefficients overflow int64");
    }
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (__builtin_sub_overflow(next[i], prev[i], &next[i]))
        throw InputError("n", "U_" + std::to_string(n) + " coefficients overflow int64");
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return Polynomial(std::move(cur));
}

double chebyshev_U_value(int n, double x) {
  if (n < 0) throw InputError("n", "Chebyshev index must be >= 0");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double sine_identity_check(int n, const SubInterval& omega, int grid_points) {
  if (n < 1) throw InputError("n", "mode index must be >= 1");
  if (grid_points < 2) throw InputError("grid_points", "need at least two grid points");
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = omega.lo() + omega.length() * i / (grid_points - 1);
    const double lhs = sin_pi(n * x);
    const double rhs = sin_pi(x) * chebyshev_U_value(n - 1, cos_pi(x));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

UCReport unique_continuation_check(const Eigen::VectorXd& a, double tau, const SubInterval& omega) {
  const int n = static_cast<int>(a.size());
  if (n < 1) throw InputError("a", "need at least one coefficient");
  if (!a.allFinite()) throw InputError("a", "coefficients must be finite");
  if (!std::isfinite(tau)) throw InputError("tau", "tau must be finite");

  // lambda_k^2 e^{-lambda_k tau} = -(k pi)^2 (cos(k pi tau) - i sin(k pi tau))
  Eigen::VectorXd re(n), im(n);
  for (int k = 1; k <= n; ++k) {
    const double w2 = (k * kPi) * (k * kPi);
    re[k - 1] = -w2 * a[k - 1] * cos_pi(k * tau);
    im[k - 1] = w2 * a[k - 1] * sin_pi(k * tau);
  }
  const Eigen::MatrixXd m = mass_matrix(omega, n);
  const double norm_sq = re.dot(m * re) + im.dot(m * im);

  const CertifiedEigenvalue eig = mass_matrix_min_eigenvalue(omega, n);
  UCReport report;
  report.gram_min_eig = eig.value;
  report.gram_min_eig_log10 = eig.log10_value;
  report.noise_floor = eig.noise_floor;
  report.precision_bits = eig.precision_bits;
  report.function_norm_on_omega = std::sqrt(std::max(norm_sq, 0.0));
  report.certified = eig.resolved;
  return report;
}

}  // namespace impwave
