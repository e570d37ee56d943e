#pragma once

// Observation of the free wave at one instant:
//
//   O(Phi^0, Phi^1) = int_omega |Phi_t(x, tau)|^2 dx,
//
// compared against ||(Phi^0, Phi^1)||^2 in L^2 x H^-1, together with the
// backward impulsive problem that defines the duality operator Lambda.

#include "impwave/spectral.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace impwave {

class ObservationSetup {
 public:
  ObservationSetup(double tau, double horizon, SubInterval omega);

  double tau() const { return tau_; }
  double horizon() const { return horizon_; }
  const SubInterval& omega() const { return omega_; }

 private:
  double tau_;
  double horizon_;
  SubInterval omega_;
};

/// v^T M_omega v with v the velocity coefficients of S(tau) state0.
double observed_energy(const ModalState& state0, const ObservationSetup& setup);

/// (1/2) sum_n (-n pi a_n sin(n pi tau) + b_n cos(n pi tau))^2, the full-domain
/// observation written directly in Fourier coefficients.
double modal_observed_energy_full(const ModalState& state0, double tau);

/// Per-mode polar form (n pi a_n, b_n) = amplitude (cos y_n, sin y_n).
struct ModePhase {
  double amplitude = 0.0;
  std::optional<double> phase;  // empty when amplitude == 0
  double sin_phase = 0.0;
  double cos_phase = 0.0;
};

struct PhaseDecomposition {
  std::vector<ModePhase> modes;
};

PhaseDecomposition phase_decomposition(const ModalState& state0);

/// observed_energy / norm_sq_weak(coefficient). Integral numerator over
/// coefficient denominator: with a = b = (1), omega = (0,1/2), tau = 2 this
/// is (1/4) / (1 + 1/pi^2) = 0.22700.
double obs_ratio(const ModalState& state0, const ObservationSetup& setup);

struct BoundCheck {
  double lhs = 0.0;  // sum ((n pi a_n)^2 + b_n^2) sin^2(n pi tau + y_n)
  double rhs = 0.0;  // (1/2) sum (a_n^2 + b_n^2 / (n pi)^2)
  bool holds = false;
  /// Per-mode floor 2 (n pi)^2 / ((n pi)^2 + 1) of lhs/rhs at tau = 2, min over the modes.
  double per_mode_floor = 0.0;
};

/// Coefficient-level observability bound for data with a_n = b_n.
BoundCheck coefficient_level_bound_check(const ModalState& state0, double tau = 2.0);

enum class FamilyKind { Constant, Linear, PiLinear };

/// Initial data a_n = b_n = k, n or n pi.
struct Family {
  FamilyKind kind = FamilyKind::Constant;
  double k = 1.0;
};

Family parse_family(std::string_view tag, double k = 1.0);
std::string_view to_string(FamilyKind kind);
ModalState family_state(const Family& family, int n_modes);

struct ObservabilityReport {
  std::string family;
  std::vector<double> ratios;  // ratios[N-1] for truncation N
  double min_ratio = 0.0;
  bool strictly_increasing = false;
};

ObservabilityReport sweep_ratio(const Family& family, int n_max, const ObservationSetup& setup);

/// Lambda(Phi^0, Phi^1) = (Psi'(0), -Psi(0)) where Psi solves the backward
/// system with Psi(T) = Psi'(T) = 0 and the velocity jump
/// Psi_t(tau+) - Psi_t(tau-) = -1_omega Phi_t(tau).
struct LambdaImage {
  Eigen::VectorXd first;   // Psi'(0)
  Eigen::VectorXd second;  // -Psi(0)
};

/// Backward solution at t = 0 as a state (Psi(0), Psi'(0)).
ModalState backward_state_at_zero(const ModalState& state0, const ObservationSetup& setup);

LambdaImage lambda_operator(const ModalState& state0, const ObservationSetup& setup);

/// <Lambda(Phi^0,Phi^1), (Phi^0,Phi^1)>_{L^2 x L^2}
///   = int Phi^0 Psi'(0) - Psi(0) Phi^1 dx.
/// Conservation of int (Phi Psi_t - Psi Phi_t) makes this equal
/// int_omega Phi(tau) Phi_t(tau) dx.
double duality_pairing(const ModalState& state0, const ObservationSetup& setup);

/// (Psi(0), Psi'(0)) paired with (Phi^0, Phi^1) in the energy inner product of
/// H^1_0 x L^2. The group is unitary there, so this equals observed_energy.
double energy_duality_pairing(const ModalState& state0, const ObservationSetup& setup);

/// int_omega Phi(tau) Phi_t(tau) dx.
double observed_cross_term(const ModalState& state0, const ObservationSetup& setup);

/// ||{Phi^0, Phi^1}||_F^2 = T int_omega |Phi_t(tau)|^2 dx.
double f_seminorm_sq(const ModalState& state0, const ObservationSetup& setup);

}  // namespace impwave
