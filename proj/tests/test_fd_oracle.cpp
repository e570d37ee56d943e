#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"

#include "impwave/error.hpp"
#include "impwave/fd_oracle.hpp"

using namespace impwave;

namespace {

ModalState smooth_state(int n) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Zero(n);
  a.head(3) << 1.0, 0.6, 0.3;
  b.head(3) << -0.8, 0.5, 0.2;
  return {a, b};
}

// error at t = 1.5 against the spectral solution, smooth data plus a full-domain impulse
double smooth_error(int m) {
  const int n = 8;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p.head(2) << 0.7, -0.4;
  const ImpulseSchedule schedule(2.0, {{0.5, p}});
  const std::vector<double> times = {1.5};
  const FDResult fd = fd_solve(smooth_state(n), schedule, FDConfig::with_cfl(m, 0.5), times);
  REQUIRE_FALSE(fd.snapped);
  return compare(solve(smooth_state(n), schedule), fd, times)[0];
}

}  // namespace

TEST_CASE("config helpers") {
  const FDConfig c = FDConfig::with_cfl(2048, 0.5);
  CHECK(c.cfl() <= 0.5);
  const double steps = 1.0 / c.dt;
  CHECK(steps == std::round(steps));
  CHECK(static_cast<long>(steps) % 4 == 0);
  CHECK_THROWS_AS(FDConfig::with_cfl(10, 1.5), InputError);
  CHECK(fd_grid(3) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("zero data stays zero") {
  const std::vector<double> times = {0.5, 1.0};
  const FDResult fd = fd_solve(ModalState::zero(4), ImpulseSchedule(1.0, {}), FDConfig::with_cfl(63, 0.5), times);
  for (const auto& u : fd.displacement)
    for (double v : u) CHECK(v == 0.0);
}

TEST_CASE("one period returns a single mode") {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(3);
  a[2] = 1.0;
  const ModalState x(a, Eigen::VectorXd::Zero(3));
  const int m = 2048;
  const FDResult fd = fd_solve(x, ImpulseSchedule(2.0, {}), FDConfig::with_cfl(m, 0.5), std::vector<double>{2.0});
  const std::vector<double> u0 = evaluate_on_grid(x, fd_grid(m), Field::Position);
  double worst = 0.0;
  for (std::size_t j = 0; j < u0.size(); ++j) worst = std::max(worst, std::abs(fd.displacement[0][j] - u0[j]));
  CHECK(worst <= 1e-4);
}

TEST_CASE("second-order convergence to the spectral solution") {
  double previous = smooth_error(127);
  for (int m : {255, 511, 1023}) {
    const double e = smooth_error(m);
    INFO("M=" << m << " error=" << e << " ratio=" << previous / e);
    CHECK(previous / e >= 3.5);
    CHECK(previous / e <= 4.5);
    previous = e;
  }
}

TEST_CASE("fd against fd at two resolutions") {
  // M+1 = 128 and 256 share every coarse node; the coarse error dominates
  const ModalState x = smooth_state(8);
  const std::vector<double> times = {1.0};
  auto run = [&](int m) {
    return fd_solve(x, ImpulseSchedule(2.0, {}), FDConfig::with_cfl(m, 0.5), times).displacement[0];
  };
  const std::vector<double> c1 = run(127), f1 = run(255), f2 = run(511);
  std::vector<double> f1c, f2c, f2m;
  for (std::size_t j = 0; j < c1.size(); ++j) {
    f1c.push_back(f1[2 * j]);
    f2c.push_back(f2[4 * j]);
  }
  for (std::size_t j = 0; j < f1.size(); ++j) f2m.push_back(f2[2 * j]);
  const double coarse = relative_l2_error(c1, f2c);
  const double fine = relative_l2_error(f1, f2m);
  // Richardson: e(h) - e(h/4) over e(h/2) - e(h/4) = (1 - 1/16) / (1/4 - 1/16) = 5
  CHECK(coarse / fine == doctest::Approx(5.0).epsilon(0.1));
}

TEST_CASE("discrete energy is conserved away from impulses") {
  const FDResult fd = fd_solve(smooth_state(6), ImpulseSchedule(2.0, {}), FDConfig::with_cfl(2048, 0.5),
                               std::vector<double>{2.0}, true);
  const auto [lo, hi] = std::minmax_element(fd.energy.begin(), fd.energy.end());
  CHECK((*hi - *lo) / fd.energy.front() <= 1e-6);
  CHECK(fd.energy.front() == doctest::Approx(energy_state_space(smooth_state(6)) / 2).epsilon(1e-3));

  // with an impulse the energy is piecewise constant
  Eigen::VectorXd p = Eigen::VectorXd::Zero(6);
  p[0] = 1.0;
  const FDConfig config = FDConfig::with_cfl(512, 0.5);
  const FDResult kicked = fd_solve(smooth_state(6), ImpulseSchedule(2.0, {{1.0, p}}), config,
                                   std::vector<double>{2.0}, true);
  REQUIRE(kicked.impulse_steps.size() == 1);
  const long k = kicked.impulse_steps.front();
  // energy[i] is the energy between levels i and i+1
  const std::vector<double> before(kicked.energy.begin(), kicked.energy.begin() + k - 1);
  const std::vector<double> after(kicked.energy.begin() + k, kicked.energy.end());
  const auto [b0, b1] = std::minmax_element(before.begin(), before.end());
  const auto [a0, a1] = std::minmax_element(after.begin(), after.end());
  CHECK((*b1 - *b0) / *b1 <= 1e-12);
  CHECK((*a1 - *a0) / *a1 <= 1e-12);
  CHECK(std::abs(*a0 - *b0) > 1e-3);
}

TEST_CASE("snapping, CFL and sampling errors") {
  const ModalState x = smooth_state(4);
  const FDConfig config = FDConfig::with_cfl(63, 0.5);
  CHECK_THROWS_AS(fd_solve(x, ImpulseSchedule(1.0, {}), config, std::vector<double>{0.1234567}), InputError);
  CHECK_THROWS_AS(fd_solve(x, ImpulseSchedule(1.0, {{0.3333333, Eigen::VectorXd::Ones(4)}}), config,
                           std::vector<double>{0.5}),
                  InputError);
  FDConfig loose = config;
  loose.snap_tolerance = 1.0;
  const FDResult snapped = fd_solve(x, ImpulseSchedule(1.0, {}), loose, std::vector<double>{0.1234567});
  CHECK(snapped.snapped);
  CHECK(snapped.max_snap_error <= loose.dt / 2);
  FDConfig unstable = config;
  unstable.dt = 2.0 * config.dx();
  CHECK_THROWS_AS(fd_solve(x, ImpulseSchedule(1.0, {}), unstable, std::vector<double>{0.5}), InputError);
}

TEST_CASE("compare") {
  const ModalState x = smooth_state(4);
  const ImpulseSchedule schedule(1.0, {});
  const std::vector<double> times = {0.5};
  const FDResult fd = fd_solve(x, schedule, FDConfig::with_cfl(63, 0.5), times);
  FDResult exact = fd;
  exact.displacement[0] = evaluate_on_grid(propagate(x, 0.5), fd_grid(63), Field::Position);
  CHECK(compare(solve(x, schedule), exact, times)[0] <= 1e-15);
  CHECK_THROWS_AS(compare(solve(x, schedule), fd, std::vector<double>{0.25}), InputError);
  CHECK(relative_l2_error(exact.displacement[0], exact.displacement[0]) == 0.0);
}

TEST_CASE("masked profiles are sampled as sharp indicators") {
  const std::vector<double> grid = fd_grid(7);  // nodes at multiples of 1/8
  const std::vector<double> v = sample_masked_profile(Eigen::VectorXd::Ones(1), SubInterval(0.25, 0.5), grid);
  CHECK(v[1] == 0.0);
  CHECK(v[2] == doctest::Approx(0.5 * std::sin(oracle::pi / 4)));
  CHECK(v[3] == doctest::Approx(std::sin(3 * oracle::pi / 8)));
  CHECK(v[4] == doctest::Approx(0.5));
  CHECK(v[5] == 0.0);
}
