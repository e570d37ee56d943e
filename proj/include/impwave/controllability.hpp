#pragma once

// Approximate controllability with a single velocity impulse at tau acting
// on omega:
//
//   psi' = A psi + B_omega Upsilon delta_tau,   B_omega = (0, 1_omega)^T.
//
// At truncation N the control-to-state map G: R^N -> R^2N is
//   G c = S(T - tau) (0, 2 M_omega c),
// so the reachable set from one impulse is an N-dimensional subspace of the
// 2N-dimensional state. Everything here works with that honest finite picture:
// Gramian positivity on range(G), the Tikhonov limit alpha (alpha I + G G^T)^-1 z
// and the unique-continuation implication via Chebyshev polynomials.

#include "impwave/certify.hpp"
#include "impwave/spectral.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace impwave {

/// Adjoint flow theta_t = -A theta. Because the spectrum of A is purely
/// imaginary this is the wave group run backwards.
ModalState adjoint_solve(const ModalState& theta0, double t);

enum class StateNorm {
  Energy,  // sqrt(energy_state_space)
  Weak,    // sqrt(norm_sq_weak, coefficient convention)
};

StateNorm parse_state_norm(std::string_view tag);
std::string_view to_string(StateNorm norm);

double state_norm(const ModalState& state, StateNorm norm);

class ControlProblem {
 public:
  ControlProblem(double tau, double horizon, SubInterval omega, ModalState initial,
                 ModalState target);

  int n_modes() const { return initial_.n_modes(); }
  double tau() const { return tau_; }
  double horizon() const { return horizon_; }
  const SubInterval& omega() const { return omega_; }
  const ModalState& initial() const { return initial_; }
  const ModalState& target() const { return target_; }

  /// z = target - S(T) initial, stacked [pos; vel].
  Eigen::VectorXd drift_gap() const;

 private:
  double tau_;
  double horizon_;
  SubInterval omega_;
  ModalState initial_;
  ModalState target_;
};

struct GramianOperator {
  Eigen::MatrixXd factor;   // G, 2N x N
  Eigen::MatrixXd product;  // G G^T, 2N x 2N
};

GramianOperator build_gramian(const ControlProblem& problem);

/// Bound on cond(alpha I + G G^T) beyond which the solve is refused.
inline constexpr double kMaxCondition = 1e14;

struct RegularizedControl {
  Eigen::VectorXd control;          // c = G^T (alpha I + G G^T)^-1 z
  Eigen::VectorXd residual_vector;  // z - G c
  double residual = 0.0;            // residual_vector measured in the chosen norm
  double alpha = 0.0;
};

/// Tikhonov-regularised control for a prebuilt Gramian and gap z.
RegularizedControl regularized_solve(const GramianOperator& gramian, const Eigen::VectorXd& z,
                                     double alpha, StateNorm norm = StateNorm::Energy);

RegularizedControl regularized_control(const ControlProblem& problem, double alpha,
                                       StateNorm norm = StateNorm::Energy);

struct AlphaStep {
  double alpha;
  double residual;
};

struct ControlOutcome {
  bool reached = false;
  Eigen::VectorXd control;
  double residual = 0.0;  // achieved, or the limiting distance to range(G) on failure
  double alpha = 0.0;
  std::vector<AlphaStep> trace;
};

/// Geometric alpha sweep 1e-1, 1e-2, ... until the residual drops below
/// epsilon, stagnates (relative change < 1e-3 on two consecutive steps) or the
/// solve becomes ill-conditioned.
ControlOutcome approx_control(const ControlProblem& problem, double epsilon,
                              StateNorm norm = StateNorm::Energy);

// ---------------------------------------------------------------------------
// Chebyshev polynomials of the second kind

/// Integer polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  explicit Polynomial(std::vector<std::int64_t> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
  double operator()(double x) const;
  Polynomial derivative() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<std::int64_t> coeffs_;
};

/// U_0 = 1, U_1 = 2X, U_{n+1} = 2X U_n - U_{n-1}. Throws if a coefficient
/// leaves the int64 range.
Polynomial chebyshev_U(int n);

/// U_n(x) by the three-term recurrence; stable where the monomial form is not.
double chebyshev_U_value(int n, double x);

/// max over a uniform grid on omega of |sin(n pi x) - sin(pi x) U_{n-1}(cos pi x)|.
double sine_identity_check(int n, const SubInterval& omega, int grid_points);

struct UCReport {
  double gram_min_eig = 0.0;        // smallest eigenvalue of the Gram matrix of sin(k pi x) on omega
  double gram_min_eig_log10 = 0.0;
  double noise_floor = 0.0;         // rounding floor at the precision that resolved it
  unsigned precision_bits = 0;
  double function_norm_on_omega = 0.0;
  bool certified = false;
};

/// Tests the implication
///   sum_k a_k lambda_k^2 e^{-lambda_k tau} sin(pi x) U_{k-1}(cos pi x) = 0 on omega
///   => a = 0
/// as nonsingularity of the Gram matrix of {sin(k pi x)} over omega (equal to
/// M_omega because sin(pi x) U_{k-1}(cos pi x) = sin(k pi x)). The eigenvalue
/// is certified in extended precision.
UCReport unique_continuation_check(const Eigen::VectorXd& a, double tau, const SubInterval& omega);

}  // namespace impwave
