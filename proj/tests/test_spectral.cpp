#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"

#include "impwave/certify.hpp"
#include "impwave/error.hpp"
#include "impwave/fd_oracle.hpp"
#include "impwave/spectral.hpp"

#include <limits>

using namespace impwave;
using oracle::pi;

namespace {

ModalState state1(std::initializer_list<double> a, std::initializer_list<double> b) {
  Eigen::VectorXd pa(static_cast<Eigen::Index>(a.size())), pb(static_cast<Eigen::Index>(b.size()));
  Eigen::Index i = 0;
  for (double x : a) pa[i++] = x;
  i = 0;
  for (double x : b) pb[i++] = x;
  return {pa, pb};
}

}  // namespace

TEST_CASE("sin_pi and cos_pi are exact on integers and half-integers") {
  for (int k = -8; k <= 8; ++k) {
    CHECK(sin_pi(k) == 0.0);
    CHECK(std::abs(cos_pi(k)) == 1.0);
    CHECK(cos_pi(k + 0.5) == 0.0);
    CHECK(std::abs(sin_pi(k + 0.5)) == 1.0);
  }
  for (double x : {0.1, 0.37, 1.23, -2.71, 7.9})
    CHECK(sin_pi(x) == doctest::Approx(std::sin(pi * x)).epsilon(1e-14));
}

TEST_CASE("ModalState validation") {
  CHECK_THROWS_AS(ModalState(Eigen::VectorXd(0), Eigen::VectorXd(0)), InputError);
  CHECK_THROWS_AS(ModalState(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)), InputError);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(2);
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ModalState(bad, Eigen::VectorXd::Zero(2)), InputError);
  CHECK_THROWS_AS(ModalState::zero(0), InputError);
}

TEST_CASE("SubInterval validation") {
  CHECK_THROWS_AS(SubInterval(0.5, 0.5), InputError);
  CHECK_THROWS_AS(SubInterval(0.6, 0.2), InputError);
  CHECK_THROWS_AS(SubInterval(-0.1, 0.5), InputError);
  CHECK_THROWS_AS(SubInterval(0.0, 1.5), InputError);
  try {
    SubInterval(0.7, 0.3);
  } catch (const InputError& e) {
    CHECK(e.field() == "omega");
  }
  CHECK(SubInterval::full().is_full());
  CHECK_FALSE(SubInterval(0.0, 0.5).is_full());
}

TEST_CASE("propagate examples") {
  const ModalState q = propagate(state1({1}, {0}), 0.5);
  CHECK(q.pos()[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q.vel()[0] == doctest::Approx(-pi));

  std::mt19937_64 rng(1);
  const ModalState x(oracle::random_vector(rng, 12), oracle::random_vector(rng, 12));
  CHECK(propagate(x, 2.0).stacked() == x.stacked());

  const ModalState y = propagate(state1({1, 0}, {0, 1}), 0.25);
  CHECK(y.pos()[0] == doctest::Approx(std::cos(pi / 4)).epsilon(1e-15));
  CHECK(y.pos()[1] == doctest::Approx(std::sin(pi / 2) / (2 * pi)).epsilon(1e-15));
  CHECK(y.vel()[0] == doctest::Approx(-pi * std::sin(pi / 4)).epsilon(1e-15));
  CHECK(std::abs(y.vel()[1]) <= 1e-15);

  CHECK_THROWS_AS(propagate(x, std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("propagate matches the leapfrog solver on a two-mode state") {
  const ModalState x = state1({1, 0}, {0, 1});
  const ModalState y = propagate(x, 0.25);
  const int m = 2047;
  const FDResult fd = fd_solve(x, ImpulseSchedule(1.0, {}), FDConfig::with_cfl(m, 0.5), std::vector<double>{0.25});
  const std::vector<double> grid = fd_grid(m);
  const std::vector<double> ref = evaluate_on_grid(y, grid, Field::Position);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) worst = std::max(worst, std::abs(ref[j] - fd.displacement[0][j]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("energy and weak norms") {
  CHECK(energy_state_space(ModalState::zero(3)) == 0.0);
  CHECK(energy_state_space(state1({1}, {0})) == doctest::Approx(pi * pi / 2));
  CHECK(norm_sq_weak(state1({1}, {1}), WeakNorm::Coefficient) == doctest::Approx(1 + 1 / (pi * pi)));
  CHECK(norm_sq_weak(ModalState::zero(4), WeakNorm::Integral) == 0.0);
  CHECK(norm_sq_weak(state1({1, 1}, {0, 0}), WeakNorm::Integral) == doctest::Approx(1.0));
  CHECK(parse_weak_norm("coefficient") == WeakNorm::Coefficient);
  CHECK_THROWS_AS(parse_weak_norm("sobolev"), InputError);
}

TEST_CASE("energy of a random state against quadrature of the synthesised fields") {
  std::mt19937_64 rng(2);
  const ModalState x(oracle::random_vector(rng, 6), oracle::random_vector(rng, 6));
  auto dx = [&](double s) {
    double v = 0.0;
    for (int i = 0; i < 6; ++i) v += x.pos()[i] * (i + 1) * pi * std::cos((i + 1) * pi * s);
    return v;
  };
  const double kinetic = oracle::integrate([&](double s) { return std::pow(oracle::synth(x.vel(), s), 2); }, 0, 1);
  const double strain = oracle::integrate([&](double s) { return dx(s) * dx(s); }, 0, 1);
  CHECK(energy_state_space(x) == doctest::Approx(kinetic + strain).epsilon(1e-12));
}

TEST_CASE("group law, energy conservation and periodicity on random data") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(-5.0, 5.0);
  double group = 0.0, energy = 0.0, period = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ModalState x = oracle::random_energy_state(rng, 16);
    const double s = t(rng), u = t(rng);
    group = std::max(group, oracle::max_abs(propagate(propagate(x, u), s), propagate(x, s + u)));
    const double e = energy_state_space(x);
    energy = std::max(energy, std::abs(energy_state_space(propagate(x, s)) - e) / e);
    period = std::max(period, oracle::max_abs(propagate(x, 2.0), x));
  }
  CHECK(group <= 1e-12);
  CHECK(energy <= 1e-12);
  CHECK(period <= 1e-12);
}

TEST_CASE("mass matrix examples") {
  const Eigen::MatrixXd full = mass_matrix(SubInterval::full(), 7);
  CHECK(full == 0.5 * Eigen::MatrixXd::Identity(7, 7));
  const Eigen::MatrixXd half = mass_matrix(SubInterval(0.0, 0.5), 2);
  CHECK(half(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(half(0, 1) == doctest::Approx(2.0 / (3.0 * pi)).epsilon(1e-14));
  CHECK(half(0, 1) == doctest::Approx(oracle::mass_entry(1, 2, 0.0, 0.5)).epsilon(1e-10));
  CHECK_THROWS_AS(mass_matrix(SubInterval::full(), 0), InputError);
}

TEST_CASE("mass matrix agrees with quadrature on random subintervals") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> dim(1, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SubInterval omega = oracle::random_interval(rng, 0.001);
    const int n = trial < 4 ? 64 : dim(rng);
    const Eigen::MatrixXd m = mass_matrix(omega, n);
    CHECK((m - m.transpose()).norm() == 0.0);
    for (int i = 1; i <= n; i += (n > 20 ? 3 : 1)) {
      for (int j = i; j <= n; j += (n > 20 ? 5 : 1))
        worst = std::max(worst, std::abs(m(i - 1, j - 1) - oracle::mass_entry(i, j, omega.lo(), omega.hi())));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("mass matrix is positive definite for widths >= 0.01, N <= 32") {
  std::mt19937_64 rng(5);
  std::vector<SubInterval> omegas = {{0.0, 0.01}, {0.495, 0.505}, {0.99, 1.0}, {0.3, 0.4}, {0.0, 0.5}};
  for (int i = 0; i < 5; ++i) omegas.push_back(oracle::random_interval(rng, 0.01));
  for (const SubInterval& omega : omegas) {
    for (int n : {1, 8, 32}) {
      const CertifiedEigenvalue eig = mass_matrix_min_eigenvalue(omega, n);
      INFO("omega=(" << omega.lo() << "," << omega.hi() << ") n=" << n << " log10 eig=" << eig.log10_value);
      CHECK(eig.resolved);
      CHECK(eig.log10_value > std::log10(eig.noise_floor));
    }
  }
}

TEST_CASE("certified eigenvalue matches double precision where double can see it") {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass_matrix(SubInterval(0.0, 0.5), 4));
  const CertifiedEigenvalue eig = mass_matrix_min_eigenvalue(SubInterval(0.0, 0.5), 4);
  CHECK(eig.value == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-9));
  CHECK(eig.precision_bits == 128);
  CHECK(mass_matrix_min_eigenvalue(SubInterval::full(), 5).value == doctest::Approx(0.5));
}

TEST_CASE("evaluate_on_grid") {
  std::mt19937_64 rng(6);
  const ModalState x(oracle::random_vector(rng, 5), oracle::random_vector(rng, 5));
  const std::vector<double> ends = {0.0, 1.0};
  CHECK(evaluate_on_grid(x, ends, Field::Position) == std::vector<double>{0.0, 0.0});
  CHECK(evaluate_on_grid(x, ends, Field::Velocity) == std::vector<double>{0.0, 0.0});
  const std::vector<double> mid = {0.5};
  CHECK(evaluate_on_grid(state1({1}, {0}), mid, Field::Position)[0] == 1.0);
  const std::vector<double> third = {1.0 / 3.0};
  CHECK(std::abs(evaluate_on_grid(state1({0, 0, 1}, {0, 0, 0}), third, Field::Position)[0]) <= 1e-15);
  const std::vector<double> outside = {1.2};
  CHECK_THROWS_AS(evaluate_on_grid(x, outside, Field::Position), InputError);
}

TEST_CASE("coeffs_from_samples") {
  auto grid = [](int size) {
    std::vector<double> x(size);
    for (int j = 0; j < size; ++j) x[j] = static_cast<double>(j) / (size - 1);
    return x;
  };
  const std::vector<double> x = grid(256);
  std::vector<double> f(x.size()), g(x.size()), zero(x.size(), 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    f[j] = sin_pi(2 * x[j]);
    g[j] = sin_pi(x[j]) + 0.5 * sin_pi(3 * x[j]);
  }
  const Eigen::VectorXd cf = coeffs_from_samples(f, 4);
  CHECK((cf - Eigen::Vector4d(0, 1, 0, 0)).lpNorm<Eigen::Infinity>() <= 1e-8);
  CHECK(coeffs_from_samples(zero, 4).isZero(0.0));

  const Eigen::VectorXd cg = coeffs_from_samples(g, 4);
  Eigen::Vector4d direct;
  for (int n = 1; n <= 4; ++n)
    direct[n - 1] = 2 * oracle::integrate([&](double s) { return (std::sin(pi * s) + 0.5 * std::sin(3 * pi * s)) * std::sin(n * pi * s); }, 0, 1);
  CHECK((cg - direct).lpNorm<Eigen::Infinity>() <= 1e-8);
  CHECK((cg - Eigen::Vector4d(1, 0, 0.5, 0)).lpNorm<Eigen::Infinity>() <= 1e-8);

  CHECK_THROWS_AS(coeffs_from_samples(grid(10), 4), InputError);
  std::vector<double> lifted(x.size(), 1.0);
  CHECK_THROWS_AS(coeffs_from_samples(lifted, 4), InputError);
}

TEST_CASE("coeffs_from_samples inverts evaluate_on_grid for band-limited data") {
  std::mt19937_64 rng(7);
  const ModalState x(oracle::random_vector(rng, 10), oracle::random_vector(rng, 10));
  std::vector<double> pts(65);
  for (int j = 0; j <= 64; ++j) pts[j] = j / 64.0;
  const Eigen::VectorXd back = coeffs_from_samples(evaluate_on_grid(x, pts, Field::Position), 10);
  CHECK((back - x.pos()).lpNorm<Eigen::Infinity>() <= 1e-13);
}
