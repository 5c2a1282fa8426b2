// Probability measures on a subshift: finitely supported atomic
// measures on eventually periodic points, stationary Markov measures
// with exact rational transition data, empirical measures along orbits,
// and exact distances (total variation, Wasserstein-1 for the 2^{-k}
// metric via both a hierarchical formula and a transportation LP).

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pressurelab/cover.hpp"
#include "pressurelab/subshift.hpp"

namespace plab {

class AtomicMeasure {
 public:
  /// Merges equal points, drops zero weights, validates total mass 1.
  AtomicMeasure(const Subshift& S, std::vector<std::pair<PointRep, Rational>> atoms);

  static AtomicMeasure point_mass(const Subshift& S, const PointRep& x);

  const std::vector<std::pair<PointRep, Rational>>& atoms() const { return atoms_; }

  bool operator==(const AtomicMeasure& o) const { return atoms_ == o.atoms_; }

 private:
  std::vector<std::pair<PointRep, Rational>> atoms_;  // sorted by point
};

/// Birkhoff empirical measure (1/n) sum of point masses along the first
/// n shifts of x.
AtomicMeasure empirical_measure(const Subshift& S, const PointRep& x, int n);

AtomicMeasure pushforward(const Subshift& S, const AtomicMeasure& mu);

AtomicMeasure convex_combine(const Subshift& S,
                             const std::vector<std::pair<Rational, AtomicMeasure>>& parts);

Rational measure_of(const Subshift& S, const AtomicMeasure& mu, const CylSet& a);

/// True iff mu is shift invariant (pushforward equals mu).
bool is_invariant(const Subshift& S, const AtomicMeasure& mu);

class MarkovMeasure {
 public:
  /// Rows must be stochastic and supported on allowed transitions.  The
  /// stationary vector is computed exactly: per recurrent class of the
  /// support graph solve pi P = pi, then mix by the absorption
  /// probabilities from the uniform starting distribution (this is the
  /// Cesaro limit of the uniform start, and for an irreducible support
  /// it is the unique stationary vector).
  MarkovMeasure(const Subshift& S, std::vector<std::vector<Rational>> rows);
  MarkovMeasure(const Subshift& S, std::vector<std::vector<Rational>> rows,
                std::vector<Rational> stationary);

  static MarkovMeasure uniform_kernel(const Subshift& S);

  int states() const { return static_cast<int>(rows_.size()); }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }
  const std::vector<Rational>& stationary() const { return stationary_; }

  /// mu[w] = pi(w0) P(w0,w1) ... P(w_{r-2},w_{r-1}).
  Rational word_mass(const Word& w) const;

  bool operator==(const MarkovMeasure& o) const {
    return rows_ == o.rows_ && stationary_ == o.stationary_;
  }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> stationary_;
};

Rational measure_of(const Subshift& S, const MarkovMeasure& mu, const CylSet& a);

/// Restriction of the chain to the states of positive stationary mass
/// is irreducible and aperiodic.
bool is_ergodic_mixing(const Subshift& S, const MarkovMeasure& mu);

/// Closed recurrent classes of the kernel's support graph as sorted
/// state lists, ordered by smallest member.
std::vector<std::vector<int>> recurrent_classes(const Subshift& S, const MarkovMeasure& mu);

/// The stationary chain concentrated on one closed recurrent class:
/// rows kept on the class, uniform elsewhere, stationary solved on the
/// class and zero outside.
MarkovMeasure restrict_to_class(const Subshift& S, const MarkovMeasure& mu,
                                const std::vector<int>& cls);

Rational total_variation(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Exact Wasserstein-1 via the ultrametric tree formula: sum over
/// levels j >= 1 and admissible j-words u of 2^{-(j+1)} |mu[u] - nu[u]|,
/// truncated once every surviving discrepancy is between equal points.
Rational w1_hierarchical(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Exact Wasserstein-1 via the transportation linear program (min cost
/// flow with successive shortest paths on rationals).  Supports up to
/// 64 atoms a side.
Rational w1_lp(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu);

/// LP for small supports, hierarchical beyond.
Rational w1(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu);

}  // namespace plab
