#include "impwave/observability.hpp"

#include "impwave/error.hpp"
#include "impwave/impulsive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace impwave {

ObservationSetup::ObservationSetup(double tau, double horizon, SubInterval omega)
    : tau_(tau), horizon_(horizon), omega_(omega) {
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw InputError("horizon", "horizon must be positive and finite");
  if (!std::isfinite(tau) || tau <= 0.0 || tau >= horizon)
    throw InputError("tau", "observation time must satisfy 0 < tau < T");
}

double observed_energy(const ModalState& state0, const ObservationSetup& setup) {
  const Eigen::VectorXd v = propagate(state0, setup.tau()).vel();
  return v.dot(mass_matrix(setup.omega(), state0.n_modes()) * v);
}

double modal_observed_energy_full(const ModalState& state0, double tau) {
  if (!std::isfinite(tau)) throw InputError("tau", "tau must be finite");
  double sum = 0.0;
  for (int i = 0; i < state0.n_modes(); ++i) {
    const double n = i + 1;
    const double term = -n * kPi * state0.pos()[i] * sin_pi(n * tau) + state0.vel()[i] * cos_pi(n * tau);
    sum += term * term;
  }
  return 0.5 * sum;
}

PhaseDecomposition phase_decomposition(const ModalState& state0) {
  PhaseDecomposition out;
  out.modes.reserve(state0.n_modes());
  for (int i = 0; i < state0.n_modes(); ++i) {
    const double x = (i + 1) * kPi * state0.pos()[i];
    const double y = state0.vel()[i];
    ModePhase mode;
    mode.amplitude = std::hypot(x, y);
    if (mode.amplitude > 0.0) {
      mode.phase = std::atan2(y, x);
      mode.sin_phase = y / mode.amplitude;
      mode.cos_phase = x / mode.amplitude;
    }
    out.modes.push_back(mode);
  }
  return out;
}

double obs_ratio(const ModalState& state0, const ObservationSetup& setup) {
  const double denominator = norm_sq_weak(state0, WeakNorm::Coefficient);
  if (!(denominator > 0.0)) throw InputError("state0", "ratio undefined for the zero state");
  return observed_energy(state0, setup) / denominator;
}

BoundCheck coefficient_level_bound_check(const ModalState& state0, double tau) {
  if (state0.pos() != state0.vel())
    throw InputError("state0", "bound check requires a_n = b_n for every mode");
  if (!std::isfinite(tau)) throw InputError("tau", "tau must be finite");

  const PhaseDecomposition phases = phase_decomposition(state0);
  BoundCheck out;
  out.per_mode_floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i < state0.n_modes(); ++i) {
    const double n = i + 1;
    const ModePhase& m = phases.modes[i];
    // amplitude * sin(n pi tau + y_n) by angle addition against the Cartesian
    // components (amplitude cos y_n, amplitude sin y_n), so the term is
    // exactly b_n^2 at integer tau
    const double s = sin_pi(n * tau) * (n * kPi * state0.pos()[i]) + cos_pi(n * tau) * state0.vel()[i];
    out.lhs += m.amplitude > 0.0 ? s * s : 0.0;
    const double w2 = (n * kPi) * (n * kPi);
    out.per_mode_floor = std::min(out.per_mode_floor, 2.0 * w2 / (w2 + 1.0));
  }
  out.rhs = 0.5 * norm_sq_weak(state0, WeakNorm::Coefficient);
  out.holds = out.lhs >= out.rhs;
  return out;
}

Family parse_family(std::string_view tag, double k) {
  if (tag == "constant") {
    if (!std::isfinite(k) || k == 0.0) throw InputError("k", "constant family needs finite nonzero k");
    return {FamilyKind::Constant, k};
  }
  if (tag == "linear") return {FamilyKind::Linear, 1.0};
  if (tag == "pi_linear") return {FamilyKind::PiLinear, 1.0};
  throw InputError("family", "unknown family '" + std::string(tag) + "'");
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Constant: return "constant";
    case FamilyKind::Linear: return "linear";
    case FamilyKind::PiLinear: return "pi_linear";
  }
  return "constant";
}

ModalState family_state(const Family& family, int n_modes) {
  if (n_modes < 1) throw InputError("n_modes", "n_modes must be >= 1");
  Eigen::VectorXd c(n_modes);
  for (int i = 0; i < n_modes; ++i) {
    const double n = i + 1;
    switch (family.kind) {
      case FamilyKind::Constant: c[i] = family.k; break;
      case FamilyKind::Linear: c[i] = n; break;
      case FamilyKind::PiLinear: c[i] = n * kPi; break;
    }
  }
  return {c, c};
}

ObservabilityReport sweep_ratio(const Family& family, int n_max, const ObservationSetup& setup) {
  if (n_max < 1) throw InputError("n_max", "n_max must be >= 1");
  ObservabilityReport report;
  report.family = std::string(to_string(family.kind));
  report.ratios.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) report.ratios.push_back(obs_ratio(family_state(family, n), setup));
  report.min_ratio = *std::min_element(report.ratios.begin(), report.ratios.end());
  report.strictly_increasing =
      std::adjacent_find(report.ratios.begin(), report.ratios.end(),
                         [](double a, double b) { return !(b > a); }) == report.ratios.end();
  return report;
}

ModalState backward_state_at_zero(const ModalState& state0, const ObservationSetup& setup) {
  const int n = state0.n_modes();
  const double horizon = setup.horizon();
  const Eigen::VectorXd observed_velocity = propagate(state0, setup.tau()).vel();

  // Reversed time s = T - t turns the terminal problem into an initial one;
  // the velocity jump keeps its sign under the reversal.
  const ImpulseSchedule reversed(horizon,
                                 {ImpulseEvent{horizon - setup.tau(), -observed_velocity, setup.omega()}});
  const ModalState end = value_at(solve(ModalState::zero(n), reversed), horizon);
  return {end.pos(), -end.vel()};
}

LambdaImage lambda_operator(const ModalState& state0, const ObservationSetup& setup) {
  const ModalState psi0 = backward_state_at_zero(state0, setup);
  return {psi0.vel(), -psi0.pos()};
}

double duality_pairing(const ModalState& state0, const ObservationSetup& setup) {
  const LambdaImage image = lambda_operator(state0, setup);
  return 0.5 * (image.first.dot(state0.pos()) + image.second.dot(state0.vel()));
}

double energy_duality_pairing(const ModalState& state0, const ObservationSetup& setup) {
  const ModalState psi0 = backward_state_at_zero(state0, setup);
  double sum = 0.0;
  for (int i = 0; i < state0.n_modes(); ++i) {
    const double w = (i + 1) * kPi;
    sum += w * w * psi0.pos()[i] * state0.pos()[i] + psi0.vel()[i] * state0.vel()[i];
  }
  return 0.5 * sum;
}

double observed_cross_term(const ModalState& state0, const ObservationSetup& setup) {
  const ModalState at_tau = propagate(state0, setup.tau());
  return at_tau.pos().dot(mass_matrix(setup.omega(), state0.n_modes()) * at_tau.vel());
}

double f_seminorm_sq(const ModalState& state0, const ObservationSetup& setup) {
  return setup.horizon() * observed_energy(state0, setup);
}

}  // namespace impwave
