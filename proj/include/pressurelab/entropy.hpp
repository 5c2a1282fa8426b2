// Entropy of partitions and covers: Shannon entropy, the infimum of
// Shannon entropy over partitions refining a cover, per-n entropy rates
// along iterated joins, the sup-over-coarser-partitions variant, the
// topological cover entropy log N, and the weighted log-sum inequality.

#pragma once

#include <variant>
#include <vector>

#include "pressurelab/cover.hpp"
#include "pressurelab/measure.hpp"

namespace plab {

using MeasureRef = std::variant<const AtomicMeasure*, const MarkovMeasure*>;

Rational measure_of(const Subshift& S, const MeasureRef& mu, const CylSet& a);

/// H(P) = -sum m log m over classes, natural log.
double shannon_entropy(const Subshift& S, const MeasureRef& mu, const Partition& P);

/// H_mu(U) = inf over partitions refining the cover U of the Shannon
/// entropy.  Exact search: atoms of the generated partition sharing the
/// same candidate element set move as one block, and some optimum
/// assigns each block entirely to a single element, so only block
/// assignments are enumerated (branch and bound on the concave
/// objective's partial sums).
double cover_entropy_static(const Subshift& S, const MeasureRef& mu, const Cover& U);

struct EntropyRateEstimate {
  std::vector<std::pair<int, double>> per_n;  // (n, value/n)
  bool monotone = true;   // nonincreasing within 1e-9
  double final_value = 0; // last per_n value
  double min_value = 0;   // min over per_n (the inf proxy)
};

/// Partition entropy rate: per_n = H(P_0^{n-1})/n for an invariant
/// measure, nonincreasing (enforced).  For a Markov measure and the
/// 1-cylinder partition this matches -sum pi_i P_ij log P_ij.
EntropyRateEstimate entropy_rate_partition(const Subshift& S, const MeasureRef& mu,
                                           const Partition& P, int n_max);

/// Closed form -sum pi_i P_ij log P_ij.
double markov_entropy_rate(const MarkovMeasure& mu);

/// Cover entropy rate h_mu(T, U): per_n = H_mu(U_0^{n-1})/n.
EntropyRateEstimate entropy_rate_cover(const Subshift& S, const MeasureRef& mu,
                                       const Cover& U, int n_max);

/// h_mu^+(T, U) = inf over partitions indexed by the elements of U
/// (each class inside its element, empty classes allowed) of the
/// partition entropy rate, each rate truncated at n_max.
double entropy_rate_cover_plus(const Subshift& S, const MeasureRef& mu, const Cover& U,
                               int n_max);

/// Topological: per_n = log N(U_0^{n-1})/n with N the minimal subcover
/// cardinality.
EntropyRateEstimate topological_cover_entropy(const Subshift& S, const Cover& U, int n_max);

// Log-sum inequality in Gibbs form: for reals a_i and a probability
// vector b,  sum b_i (a_i - log b_i) <= log sum e^{a_i},  with equality
// exactly at the Gibbs weights b_i = e^{a_i} / sum e^{a_j}.  Terms with
// b_i = 0 contribute 0 to the left side.
struct LogSumBound {
  double lhs;
  double rhs;
  std::vector<double> gibbs;  // the maximizing weights
};
LogSumBound log_sum_bound(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace plab
