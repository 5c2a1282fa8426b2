// Exact rational arithmetic and stable log-domain accumulation helpers.
//
// All structural quantities (measure weights, cylinder masses, energy
// tables) are kept as exact rationals; logs and entropies live in
// doubles.  Conversions are one-way: rational -> double at the edge.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plab {

using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }

/// 2^e as an exact rational, e may be negative.
inline Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return r;
}

/// Parse "3", "-1/2", "0.25", "1e-3" into an exact rational.
/// Decimal and scientific notation are exact (powers of ten).
Rational parse_rational(const std::string& text);

std::string rational_to_string(const Rational& q);

/// log(e^a + e^b) without overflow; -inf represents an empty sum.
inline double log_add_exp(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// log(sum_i e^{v[i]}); -inf for an empty span.
inline double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_sum_exp(const std::vector<double>& v) {
  return log_sum_exp(std::span<const double>(v));
}

}  // namespace plab
