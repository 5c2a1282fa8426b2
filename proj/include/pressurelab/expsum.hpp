// Exact arithmetic for finite sums  S = sum_i c_i * e^{q_i}  with
// positive rational coefficients c_i and rational exponents q_i.
//
// Pressure sums are exactly of this shape when the per-point weights
// n*E(empirical measure) are rational, so keeping the (exponent ->
// coefficient) map exact makes the optimization bit-reproducible and
// lets tests assert closed forms like 2^n * e^{10n} literally.
//
// Comparison of two distinct canonical sums is decided numerically with
// MPFR interval evaluation at escalating precision.  Distinct canonical
// forms denote distinct reals (e^{q} for distinct rational q are
// linearly independent over Q), so the escalation terminates.

#pragma once

#include <map>
#include <string>

#include "pressurelab/numeric.hpp"

namespace plab {

class ExpSum {
 public:
  ExpSum() = default;

  static ExpSum exp_of(const Rational& exponent, const Rational& coeff = Rational(1));

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Rational, Rational>& terms() const { return terms_; }

  /// Add coeff * e^{exponent}; coeff may be negative only to cancel an
  /// existing term exactly (used by search undo), never below zero.
  void add_term(const Rational& exponent, const Rational& coeff);
  void add(const ExpSum& other);

  /// Multiply by a positive rational constant.
  void scale(const Rational& c);
  /// Multiply by e^{q}: shifts every exponent.
  void shift_exponent(const Rational& q);

  /// Exact three-way comparison: -1, 0, +1.
  int compare(const ExpSum& other) const;

  bool operator==(const ExpSum& o) const { return terms_ == o.terms_; }
  bool operator!=(const ExpSum& o) const { return !(*this == o); }
  bool operator<(const ExpSum& o) const { return compare(o) < 0; }
  bool operator<=(const ExpSum& o) const { return compare(o) <= 0; }

  /// Stable log of the sum as a double; -inf for the empty sum.
  double log_value() const;

  /// Human-readable canonical form, e.g. "3*e^(5) + 1/2*e^(-1/3)".
  std::string str() const;

 private:
  // canonical: strictly positive coefficients, keyed by exponent
  std::map<Rational, Rational> terms_;
};

}  // namespace plab
