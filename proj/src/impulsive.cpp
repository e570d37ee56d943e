#include "impwave/impulsive.hpp"

#include "impwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace impwave {
namespace {

std::string event_field(std::size_t i, const char* member) {
  return "events[" + std::to_string(i) + "]." + member;
}

}  // namespace

ImpulseSchedule::ImpulseSchedule(double horizon, std::vector<ImpulseEvent> events)
    : horizon_(horizon), events_(std::move(events)) {
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw InputError("horizon", "horizon must be positive and finite");
  double previous = 0.0;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const ImpulseEvent& e = events_[i];
    if (!std::isfinite(e.time) || e.time <= 0.0 || e.time >= horizon)
      throw InputError(event_field(i, "time"), "impulse time must lie strictly inside (0, T)");
    if (e.time - previous <= kMinEventGap)
      throw InputError(event_field(i, "time"), "impulse times must be strictly increasing");
    if (e.profile.size() < 1 || !e.profile.allFinite())
      throw InputError(event_field(i, "profile"), "profile must be a non-empty finite vector");
    if (e.profile.size() != events_.front().profile.size())
      throw InputError(event_field(i, "profile"), "all profiles must have the same length");
    previous = e.time;
  }
}

Eigen::VectorXd masked_velocity_jump(const Eigen::VectorXd& profile, const SubInterval& mask) {
  if (mask.is_full()) return profile;
  return 2.0 * mass_matrix(mask, static_cast<int>(profile.size())) * profile;
}

Trajectory::Trajectory(ImpulseSchedule schedule, std::vector<Segment> segments)
    : schedule_(std::move(schedule)), segments_(std::move(segments)) {
  const auto& events = schedule_.events();
  if (segments_.size() != events.size() + 1)
    throw InputError("segments", "need exactly one segment per inter-impulse interval");
  const int n = segments_.front().state.n_modes();
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const double start = k == 0 ? 0.0 : events[k - 1].time;
    const double end = k == events.size() ? schedule_.horizon() : events[k].time;
    if (segments_[k].start != start || segments_[k].end != end)
      throw InputError("segments", "segment bounds must match the impulse schedule");
    if (segments_[k].state.n_modes() != n)
      throw InputError("segments", "segments disagree on the mode count");
  }
}

Trajectory solve(const ModalState& initial, const ImpulseSchedule& schedule) {
  const auto& events = schedule.events();
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].profile.size() != initial.n_modes())
      throw InputError(event_field(i, "profile"), "profile length differs from n_modes");
  }

  std::vector<Trajectory::Segment> segments;
  segments.reserve(events.size() + 1);
  ModalState current = initial;
  double start = 0.0;
  for (const ImpulseEvent& e : events) {
    ModalState left = propagate(current, e.time - start);
    segments.push_back({start, e.time, std::move(current)});
    current = ModalState(left.pos(), left.vel() + masked_velocity_jump(e.profile, e.mask));
    start = e.time;
  }
  segments.push_back({start, schedule.horizon(), std::move(current)});
  return {schedule, std::move(segments)};
}

ModalState value_at(const Trajectory& traj, double t, Side side) {
  if (!std::isfinite(t) || t < 0.0 || t > traj.horizon())
    throw InputError("t", "sample time outside [0, T]");
  const auto& segs = traj.segments();

  // First segment whose start exceeds t; the candidate is the one before it.
  auto it = std::upper_bound(segs.begin(), segs.end(), t,
                             [](double v, const Trajectory::Segment& s) { return v < s.start; });
  std::size_t k = static_cast<std::size_t>(std::distance(segs.begin(), it)) - 1;

  if (segs[k].start == t && k > 0 && side == Side::Left) {
    const auto& prev = segs[k - 1];
    return propagate(prev.state, t - prev.start);
  }
  return propagate(segs[k].state, t - segs[k].start);
}

JumpResidual jump_residual(const Trajectory& traj, int k) {
  const auto& events = traj.schedule().events();
  if (k < 0 || static_cast<std::size_t>(k) >= events.size())
    throw InputError("k", "event index out of range");
  const ImpulseEvent& e = events[k];
  const ModalState left = value_at(traj, e.time, Side::Left);
  const ModalState right = value_at(traj, e.time, Side::Right);
  const Eigen::VectorXd expected = masked_velocity_jump(e.profile, e.mask);
  return {(right.pos() - left.pos()).cwiseAbs().maxCoeff(),
          (right.vel() - left.vel() - expected).cwiseAbs().maxCoeff()};
}

std::vector<double> energy_profile(const Trajectory& traj, std::span<const double> sample_times) {
  std::vector<double> out;
  out.reserve(sample_times.size());
  for (double t : sample_times) out.push_back(energy_state_space(value_at(traj, t)));
  return out;
}

}  // namespace impwave
