#include "impwave/certify.hpp"

#include "impwave/error.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// boost/multiprecision/eigen.hpp in Boost 1.74 predates Eigen 3.4's
// NumTraits requirements (infinity, quiet_NaN), hence a local specialization.
namespace Eigen {
template <>
struct NumTraits<Real> : GenericNumTraits<Real> {
  using Real = ::Real;
  using NonInteger = ::Real;
  using Literal = ::Real;
  using Nested = ::Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 16,
    MulCost = 32
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return epsilon() * 1000; }
  static Real highest() { return std::numeric_limits<Real>::max(); }
  static Real lowest() { return std::numeric_limits<Real>::lowest(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return static_cast<int>(Real::default_precision()); }
};
}  // namespace Eigen

namespace impwave {
namespace {

using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits) : saved_(Real::default_precision()) {
    Real::default_precision(digits_for(bits));
  }
  ~ScopedPrecision() { Real::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

  static unsigned digits_for(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
  }

 private:
  unsigned saved_;
};

Real unit_roundoff() { return std::numeric_limits<Real>::epsilon(); }

double to_double(const Real& x) { return x.convert_to<double>(); }

double log10_abs(const Real& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  return to_double(log10(abs(x)));
}

MatrixR mass_matrix_mp(const SubInterval& omega, int n) {
  const Real pi = acos(Real(-1));
  const Real lo(omega.lo());
  const Real hi(omega.hi());
  auto bracket = [&](int k) { return (sin(k * pi * hi) - sin(k * pi * lo)) / (k * pi); };
  MatrixR m(n, n);
  for (int i = 1; i <= n; ++i) {
    m(i - 1, i - 1) = (hi - lo - bracket(2 * i)) / 2;
    for (int j = i + 1; j <= n; ++j) {
      const Real v = (bracket(j - i) - bracket(j + i)) / 2;
      m(i - 1, j - 1) = v;
      m(j - 1, i - 1) = v;
    }
  }
  return m;
}

// Entry errors are a few ulps of O(1) quantities and both decompositions are
// backward stable, so perturbations stay below c * n^2 * u.
Real rounding_floor(int n, const Real& scale) {
  return 16 * Real(n) * Real(n) * unit_roundoff() * (scale > 1 ? scale : Real(1));
}

void check_dimension(int n) {
  if (n < 1) throw InputError("n", "dimension must be >= 1");
}

}  // namespace

CertifiedEigenvalue mass_matrix_min_eigenvalue(const SubInterval& omega, int n,
                                               unsigned max_bits) {
  check_dimension(n);
  CertifiedEigenvalue out;
  for (unsigned bits = 128; bits <= max_bits; bits *= 2) {
    ScopedPrecision guard(bits);
    const MatrixR m = mass_matrix_mp(omega, n);
    Eigen::SelfAdjointEigenSolver<MatrixR> solver(m, Eigen::EigenvaluesOnly);
    const auto& eig = solver.eigenvalues();
    const Real floor = rounding_floor(n, abs(eig[n - 1]));
    out.value = to_double(eig[0]);
    out.log10_value = log10_abs(eig[0]);
    out.noise_floor = to_double(floor);
    out.precision_bits = bits;
    out.resolved = eig[0] > floor;
    if (out.resolved) break;
  }
  return out;
}

CertifiedRank gramian_factor_rank(const SubInterval& omega, int n, double flight_time,
                                  unsigned max_bits) {
  check_dimension(n);
  if (!std::isfinite(flight_time)) throw InputError("flight_time", "must be finite");
  CertifiedRank out;
  out.columns = n;
  for (unsigned bits = 128; bits <= max_bits; bits *= 2) {
    ScopedPrecision guard(bits);
    const Real pi = acos(Real(-1));
    const Real s(flight_time);
    const MatrixR jump = 2 * mass_matrix_mp(omega, n);
    MatrixR g(2 * n, n);
    for (int i = 0; i < n; ++i) {
      const Real w = (i + 1) * pi;
      g.row(i) = jump.row(i) * (sin(w * s) / w);
      g.row(n + i) = jump.row(i) * cos(w * s);
    }
    Eigen::JacobiSVD<MatrixR> svd(g);
    const auto& sv = svd.singularValues();
    const Real floor = rounding_floor(n, sv[0]);
    int rank = 0;
    for (int i = 0; i < n; ++i) rank += sv[i] > floor ? 1 : 0;
    out.rank = rank;
    out.min_singular_value = to_double(sv[n - 1]);
    out.log10_min_singular_value = log10_abs(sv[n - 1]);
    out.noise_floor = to_double(floor);
    out.precision_bits = bits;
    if (out.full()) break;
  }
  return out;
}

}  // namespace impwave
