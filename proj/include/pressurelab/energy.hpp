// Energy functionals: nonlinear functions of finitely many cylinder
// averages.  A CylinderFunction depends on a fixed window of symbols; an
// EnergyFunctional applies outer polynomials to the integrals of its
// cylinder functions and sums the results.

#pragma once

#include <string>
#include <vector>

#include "pressurelab/measure.hpp"
#include "pressurelab/subshift.hpp"

namespace plab {

class CylinderFunction {
 public:
  /// values are indexed by the rank of the admissible window-word in
  /// lexicographic order (the order of enumerate_words).
  CylinderFunction(const Subshift& S, int window, std::vector<Rational> values);

  static CylinderFunction indicator(const Subshift& S, const CylSet& a);
  static CylinderFunction constant(const Subshift& S, const Rational& c);

  int window() const { return window_; }
  const std::vector<Rational>& values() const { return values_; }

  /// Value on the cylinder of w; requires |w| >= window and w
  /// admissible.
  const Rational& value(const Word& w) const;
  Rational value_at(const PointRep& x) const;

  Rational min_value() const;
  Rational max_value() const;
  /// osc * 2^{window-1}: a Lipschitz constant for the 2^{-k} metric.
  Rational lipschitz_bound() const;

  Rational integral(const Subshift& S, const AtomicMeasure& mu) const;
  Rational integral(const Subshift& S, const MarkovMeasure& mu) const;

  bool operator==(const CylinderFunction& o) const {
    return window_ == o.window_ && values_ == o.values_;
  }

 private:
  int window_;
  std::vector<Word> word_list_;  // admissible window-words, lex
  std::vector<Rational> values_;
  int index_of(const Word& w) const;
};

struct Polynomial {
  std::vector<Rational> coeff;  // coeff[k] multiplies s^k
  Rational operator()(const Rational& s) const;
  /// Bound on |F'| over [-M, M]: sum |c_k| k M^{k-1}.
  Rational derivative_bound(const Rational& M) const;
  bool is_identity() const;
};

// E(mu) = sum_j F_j( integral of f_j d mu ).
class EnergyFunctional {
 public:
  struct Term {
    Polynomial outer;
    CylinderFunction inner;
  };

  EnergyFunctional(std::vector<Term> terms);

  /// Single linear term, E(mu) = integral of f.
  static EnergyFunctional linear(const Subshift& S, const CylinderFunction& f);
  static EnergyFunctional zero(const Subshift& S);

  const std::vector<Term>& terms() const { return terms_; }
  /// Largest inner window (>= 1); word weights need n + window - 1 symbols.
  int window() const;

  Rational eval(const Subshift& S, const AtomicMeasure& mu) const;
  Rational eval(const Subshift& S, const MarkovMeasure& mu) const;

  /// n * E(empirical measure of the orbit segment read off w); requires
  /// |w| >= n + window - 1.
  Rational orbit_weight(const Word& w, int n) const;

  /// Certified upper bound for the modulus of continuity at scale eps:
  /// if W(mu, nu) <= eps then |E(mu) - E(nu)| <= modulus_bound(eps).
  /// Linear in eps with a rational coefficient.  The ranged overload
  /// bounds the outer derivatives over [lo, hi] instead of each term's
  /// own value range; [lo, hi] must contain every term's range.
  Rational modulus_bound(const Rational& eps) const;
  Rational modulus_bound(const Rational& eps, const Rational& lo, const Rational& hi) const;
  Rational modulus_coefficient() const;

 private:
  std::vector<Term> terms_;
};

}  // namespace plab
