#pragma once

// Second-order leapfrog reference solver for the impulsive wave equation.
// It exists to cross-check the spectral solver, so it shares no code path
// with it beyond pointwise sine synthesis of input data: masks are sampled
// as sharp indicators on the grid, not projected through M_omega.

#include "impwave/impulsive.hpp"

#include <span>
#include <vector>

namespace impwave {

struct FDConfig {
  int grid_points = 0;           // interior points M; dx = 1/(M+1)
  double dt = 0.0;
  double snap_tolerance = 1e-9;  // largest accepted |t - k dt| for impulse and sample times

  double dx() const { return 1.0 / (grid_points + 1); }
  double cfl() const { return dt / dx(); }

  /// dt = 1/K with K the smallest multiple of 4 such that dt <= target_cfl * dx,
  /// so quarter-unit times fall exactly on steps.
  static FDConfig with_cfl(int grid_points, double target_cfl, double snap_tolerance = 1e-9);
};

/// x_j = j/(M+1), j = 0..M+1 (boundary nodes included).
std::vector<double> fd_grid(int grid_points);

/// Velocity increment added at `time`, sampled on the full grid (M+2 values).
struct GridImpulse {
  double time = 0.0;
  std::vector<double> increment;
};

/// 1_mask(x_j) * Upsilon(x_j) with the indicator sampled sharply (1/2 on a
/// node that sits exactly on a mask end).
std::vector<double> sample_masked_profile(const Eigen::VectorXd& profile, const SubInterval& mask,
                                          std::span<const double> grid);

std::vector<GridImpulse> grid_impulses(const ImpulseSchedule& schedule, int grid_points);

struct FDResult {
  std::vector<double> sample_times;
  std::vector<std::vector<double>> displacement;  // one full-grid vector per sample time
  std::vector<double> energy;                     // discrete energy after each step (if recorded)
  std::vector<long> impulse_steps;
  double max_snap_error = 0.0;
  bool snapped = false;  // some impulse or sample time was moved by more than 1e-12
};

/// Leapfrog u^{k+1} = 2u^k - u^{k-1} + (dt/dx)^2 D2 u^k with pinned ends and
/// a Taylor start. An impulse at step k shifts u^{k-1} by -dt * increment, so
/// the centred velocity jumps by the increment while u^k is untouched.
FDResult fd_solve(std::span<const double> initial_displacement,
                  std::span<const double> initial_velocity,
                  const std::vector<GridImpulse>& impulses, const FDConfig& config,
                  std::span<const double> sample_times, bool record_energy = false);

/// Convenience: sample a modal initial state and schedule onto the grid and run.
FDResult fd_solve(const ModalState& initial, const ImpulseSchedule& schedule, const FDConfig& config,
                  std::span<const double> sample_times, bool record_energy = false);

/// ||a - b|| / ||b|| in the trapezoidal grid norm (absolute when b vanishes).
double relative_l2_error(std::span<const double> a, std::span<const double> b);

/// Per-sample relative L2 error between the spectral trajectory (position,
/// synthesised on the FD grid) and the FD displacement.
std::vector<double> compare(const Trajectory& spectral, const FDResult& fd,
                            std::span<const double> sample_times);

}  // namespace impwave
