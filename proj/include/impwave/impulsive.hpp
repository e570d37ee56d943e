#pragma once

// Piecewise-exact solution of the impulsive wave system
//
//   kappa_tt - kappa_xx = 0            on (0,T) \ {t_k}
//   kappa(t_k+) = kappa(t_k-)
//   kappa_t(t_k+) - kappa_t(t_k-) = 1_omega_k Upsilon_k
//
// Between impulses the state moves by the exact wave group; at t_k only the
// velocity coefficients change. Trajectories are left-continuous: sampling at
// an impulse time without naming a side returns the pre-jump state.

#include "impwave/spectral.hpp"

#include <span>
#include <vector>

namespace impwave {

/// Impulse times closer than this are rejected.
inline constexpr double kMinEventGap = 1e-12;

struct ImpulseEvent {
  double time = 0.0;
  Eigen::VectorXd profile;  // sine coefficients of Upsilon_k
  SubInterval mask = SubInterval::full();
};

class ImpulseSchedule {
 public:
  ImpulseSchedule(double horizon, std::vector<ImpulseEvent> events);

  double horizon() const { return horizon_; }
  const std::vector<ImpulseEvent>& events() const { return events_; }

 private:
  double horizon_;
  std::vector<ImpulseEvent> events_;
};

/// Sine coefficients of 1_mask * Upsilon truncated to the profile length:
/// 2 * M_mask * profile, which is the profile itself on the full domain.
Eigen::VectorXd masked_velocity_jump(const Eigen::VectorXd& profile, const SubInterval& mask);

enum class Side { Left, Right };

class Trajectory {
 public:
  /// Free-flight piece on [start, end]; `state` is the value at `start`,
  /// after any jump there.
  struct Segment {
    double start;
    double end;
    ModalState state;
  };

  /// Checks only the shape (one segment per inter-impulse gap, contiguous,
  /// consistent mode counts); the dynamics are checked by jump_residual.
  Trajectory(ImpulseSchedule schedule, std::vector<Segment> segments);

  const ImpulseSchedule& schedule() const { return schedule_; }
  const std::vector<Segment>& segments() const { return segments_; }
  int n_modes() const { return segments_.front().state.n_modes(); }
  double horizon() const { return schedule_.horizon(); }

 private:
  ImpulseSchedule schedule_;
  std::vector<Segment> segments_;
};

Trajectory solve(const ModalState& initial, const ImpulseSchedule& schedule);

ModalState value_at(const Trajectory& traj, double t, Side side = Side::Left);

struct JumpResidual {
  double position = 0.0;  // max |kappa(t_k+) - kappa(t_k-)| over coefficients
  double velocity = 0.0;  // max |velocity jump - masked profile expansion|
};

JumpResidual jump_residual(const Trajectory& traj, int k);

/// energy_state_space at each sample time (left limits at impulse times).
std::vector<double> energy_profile(const Trajectory& traj, std::span<const double> sample_times);

}  // namespace impwave
