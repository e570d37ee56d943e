#include "impwave/fd_oracle.hpp"

#include "impwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace impwave {

FDConfig FDConfig::with_cfl(int grid_points, double target_cfl, double snap_tolerance) {
  if (grid_points < 1) throw InputError("grid_points", "need at least one interior point");
  if (!(target_cfl > 0.0 && target_cfl <= 1.0)) throw InputError("cfl", "cfl must lie in (0, 1]");
  const double steps_per_unit = (grid_points + 1) / target_cfl;
  long k = static_cast<long>(std::ceil(steps_per_unit - 1e-9));
  k = ((k + 3) / 4) * 4;
  return {grid_points, 1.0 / static_cast<double>(k), snap_tolerance};
}

std::vector<double> fd_grid(int grid_points) {
  if (grid_points < 1) throw InputError("grid_points", "need at least one interior point");
  std::vector<double> x(grid_points + 2);
  for (int j = 0; j <= grid_points + 1; ++j) x[j] = static_cast<double>(j) / (grid_points + 1);
  return x;
}

std::vector<double> sample_masked_profile(const Eigen::VectorXd& profile, const SubInterval& mask,
                                          std::span<const double> grid) {
  const ModalState carrier(Eigen::VectorXd::Zero(profile.size()), profile);
  std::vector<double> values = evaluate_on_grid(carrier, grid, Field::Velocity);
  if (mask.is_full()) return values;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid[j];
    const double weight = mask.contains(x) ? 1.0 : (x == mask.lo() || x == mask.hi()) ? 0.5 : 0.0;
    values[j] *= weight;
  }
  return values;
}

std::vector<GridImpulse> grid_impulses(const ImpulseSchedule& schedule, int grid_points) {
  const std::vector<double> grid = fd_grid(grid_points);
  std::vector<GridImpulse> out;
  out.reserve(schedule.events().size());
  for (const ImpulseEvent& e : schedule.events())
    out.push_back({e.time, sample_masked_profile(e.profile, e.mask, grid)});
  return out;
}

namespace {

struct Snap {
  long step;
  double error;
};

Snap snap_time(double t, const FDConfig& config, const char* field) {
  if (!std::isfinite(t) || t < 0.0) throw InputError(field, "time must be finite and >= 0");
  const long step = std::lround(t / config.dt);
  const double error = std::abs(t - static_cast<double>(step) * config.dt);
  if (error > config.snap_tolerance)
    throw InputError(field, "time is not representable within the snapping tolerance");
  return {step, error};
}

}  // namespace

FDResult fd_solve(std::span<const double> initial_displacement,
                  std::span<const double> initial_velocity,
                  const std::vector<GridImpulse>& impulses, const FDConfig& config,
                  std::span<const double> sample_times, bool record_energy) {
  const int m = config.grid_points;
  if (m < 1) throw InputError("grid_points", "need at least one interior point");
  if (!std::isfinite(config.dt) || config.dt <= 0.0) throw InputError("dt", "dt must be positive");
  if (config.cfl() > 1.0 + 1e-12) throw InputError("dt", "CFL condition dt/dx <= 1 violated");
  const std::size_t nodes = static_cast<std::size_t>(m) + 2;
  if (initial_displacement.size() != nodes || initial_velocity.size() != nodes)
    throw InputError("initial", "initial samples must cover the full grid (M+2 nodes)");

  FDResult result;
  result.sample_times.assign(sample_times.begin(), sample_times.end());

  std::multimap<long, const GridImpulse*> impulse_at;
  for (const GridImpulse& imp : impulses) {
    if (imp.increment.size() != nodes)
      throw InputError("impulses", "impulse increment must cover the full grid");
    const Snap s = snap_time(imp.time, config, "impulses");
    if (s.step < 1) throw InputError("impulses", "impulse time rounds to the initial step");
    result.max_snap_error = std::max(result.max_snap_error, s.error);
    impulse_at.emplace(s.step, &imp);
    result.impulse_steps.push_back(s.step);
  }

  std::vector<long> sample_steps;
  long last = 0;
  for (double t : sample_times) {
    const Snap s = snap_time(t, config, "sample_times");
    result.max_snap_error = std::max(result.max_snap_error, s.error);
    sample_steps.push_back(s.step);
    last = std::max(last, s.step);
  }
  result.snapped = result.max_snap_error > 1e-12;
  result.displacement.resize(sample_times.size());

  const double dt = config.dt;
  const double dx = config.dx();
  const double r2 = (dt / dx) * (dt / dx);

  auto record = [&](long step, const std::vector<double>& u) {
    for (std::size_t i = 0; i < sample_steps.size(); ++i)
      if (sample_steps[i] == step) result.displacement[i] = u;
  };
  auto energy = [&](const std::vector<double>& newer, const std::vector<double>& older) {
    double kinetic = 0.0;
    double strain = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double v = (newer[j] - older[j]) / dt;
      kinetic += v * v;
    }
    for (std::size_t j = 0; j + 1 < nodes; ++j)
      strain += (newer[j + 1] - newer[j]) * (older[j + 1] - older[j]);
    return 0.5 * kinetic * dx + 0.5 * strain / dx;
  };

  std::vector<double> prev(initial_displacement.begin(), initial_displacement.end());
  prev.front() = prev.back() = 0.0;
  record(0, prev);
  if (last == 0) return result;

  std::vector<double> cur(nodes, 0.0);
  for (std::size_t j = 1; j + 1 < nodes; ++j)
    cur[j] = prev[j] + dt * initial_velocity[j] + 0.5 * r2 * (prev[j + 1] - 2.0 * prev[j] + prev[j - 1]);
  record(1, cur);
  if (record_energy) result.energy.push_back(energy(cur, prev));

  std::vector<double> next(nodes, 0.0);
  for (long k = 1; k < last; ++k) {
    auto [lo, hi] = impulse_at.equal_range(k);
    for (auto it = lo; it != hi; ++it) {
      const std::vector<double>& inc = it->second->increment;
      for (std::size_t j = 1; j + 1 < nodes; ++j) prev[j] -= dt * inc[j];
    }
    for (std::size_t j = 1; j + 1 < nodes; ++j)
      next[j] = 2.0 * cur[j] - prev[j] + r2 * (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]);
    if (record_energy) result.energy.push_back(energy(next, cur));
    std::swap(prev, cur);
    std::swap(cur, next);
    record(k + 1, cur);
  }
  return result;
}

FDResult fd_solve(const ModalState& initial, const ImpulseSchedule& schedule, const FDConfig& config,
                  std::span<const double> sample_times, bool record_energy) {
  const std::vector<double> grid = fd_grid(config.grid_points);
  const std::vector<double> u0 = evaluate_on_grid(initial, grid, Field::Position);
  const std::vector<double> v0 = evaluate_on_grid(initial, grid, Field::Velocity);
  return fd_solve(u0, v0, grid_impulses(schedule, config.grid_points), config, sample_times,
                  record_energy);
}

double relative_l2_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InputError("samples", "mismatched sampling");
  auto weight = [&](std::size_t j) { return (j == 0 || j + 1 == a.size()) ? 0.5 : 1.0; };
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff += weight(j) * (a[j] - b[j]) * (a[j] - b[j]);
    ref += weight(j) * b[j] * b[j];
  }
  if (ref > 0.0) return std::sqrt(diff / ref);
  return a.size() > 1 ? std::sqrt(diff / static_cast<double>(a.size() - 1)) : std::sqrt(diff);
}

std::vector<double> compare(const Trajectory& spectral, const FDResult& fd,
                            std::span<const double> sample_times) {
  if (sample_times.size() != fd.displacement.size() ||
      !std::equal(sample_times.begin(), sample_times.end(), fd.sample_times.begin()))
    throw InputError("sample_times", "mismatched sampling");
  std::vector<double> errors;
  errors.reserve(sample_times.size());
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const std::vector<double>& u = fd.displacement[i];
    const int m = static_cast<int>(u.size()) - 2;
    const std::vector<double> reference =
        evaluate_on_grid(value_at(spectral, sample_times[i]), fd_grid(m), Field::Position);
    errors.push_back(relative_l2_error(u, reference));
  }
  return errors;
}

}  // namespace impwave
