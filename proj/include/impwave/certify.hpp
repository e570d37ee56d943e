#pragma once

// Certified positivity for the subdomain mass matrix and the single-impulse
// control factor.
//
// Sine modes restricted to a short interval are nearly dependent: the
// smallest eigenvalue of M_omega decays super-exponentially in N (about 1e-22
// for omega = (0,1/2), N = 16, and 1e-148 for a width-0.01 interval at
// N = 32). Double precision cannot tell such values from zero, so these
// routines recompute in MPFR arithmetic, doubling the working precision until
// the quantity clears the rounding floor of that precision.

#include "impwave/spectral.hpp"

namespace impwave {

inline constexpr unsigned kDefaultMaxPrecisionBits = 4096;

struct CertifiedEigenvalue {
  double value = 0.0;        // smallest eigenvalue, rounded to double
  double log10_value = 0.0;  // log10 |value|, still meaningful below double range
  double noise_floor = 0.0;  // eigenvalue perturbation bound at the final precision
  unsigned precision_bits = 0;
  bool resolved = false;     // value > noise_floor
};

/// Smallest eigenvalue of mass_matrix(omega, n).
CertifiedEigenvalue mass_matrix_min_eigenvalue(const SubInterval& omega, int n,
                                               unsigned max_bits = kDefaultMaxPrecisionBits);

struct CertifiedRank {
  int rank = 0;
  int columns = 0;
  double min_singular_value = 0.0;
  double log10_min_singular_value = 0.0;
  double noise_floor = 0.0;
  unsigned precision_bits = 0;

  bool full() const { return rank == columns; }
  /// Smallest eigenvalue of G G^T restricted to range(G) when full().
  double min_restricted_eigenvalue() const { return min_singular_value * min_singular_value; }
};

/// Numerical rank of the control factor G (2n x n) for one velocity impulse
/// on omega followed by free flight over `flight_time`, computed by SVD.
CertifiedRank gramian_factor_rank(const SubInterval& omega, int n, double flight_time,
                                  unsigned max_bits = kDefaultMaxPrecisionBits);

}  // namespace impwave
