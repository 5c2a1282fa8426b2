// Pressure quantities on a subshift: the four local pressures over a
// cover (partition-assignment and subcover variants, sup- and
// inf-weighted), separated-set and spanning-set pressures at dyadic
// scales, the two greedy sweep constructions with their certificates,
// and an aggregated per-n report with the inequality audit.
//
// Everything reduces to finite word combinatorics: at working
// resolution R = n + max(cover resolution, energy window) - 1 the value
// n*E(empirical measure) is constant on R-cylinders, so suprema and
// infima over atoms are exact finite maxima/minima.  Exact mode keeps
// sums of exponentials symbolic; float mode stays in log-domain.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "pressurelab/cover.hpp"
#include "pressurelab/energy.hpp"
#include "pressurelab/expsum.hpp"
#include "pressurelab/subshift.hpp"

namespace plab {

enum class Precision { Float, Exact };

// Log-domain scalar; carries the exact sum of exponentials in exact
// mode.
struct LogValue {
  double log_value = 0;
  std::optional<ExpSum> exact;

  double rate(int n) const { return log_value / n; }
};

struct SearchCaps {
  // Largest admissible working resolution; 0 means derive from the
  // alphabet (largest R with alphabet^R <= 2^22).
  int max_resolution = 0;
};

int default_resolution_cap(int alphabet_size);

class ResolutionCapError : public std::runtime_error {
 public:
  ResolutionCapError(int required, int cap);
  int required;
  int cap;
};

struct WeightedAtom {
  CylSet atom;
  Rational sup_weight;  // sup over the atom of n*E(empirical), exact
  Rational inf_weight;
  std::vector<int> homes;  // joined-cover elements containing the atom
};

struct AtomWeightTable {
  int n = 0;
  int working_resolution = 0;
  JoinedCover joined;
  std::vector<WeightedAtom> atoms;
  std::vector<Rational> element_sup;  // per joined element
  std::vector<Rational> element_inf;
};

AtomWeightTable atom_weights(const Subshift& S, const Cover& U, const EnergyFunctional& E,
                             int n, const SearchCaps& caps = {});

/// min over atom-to-home assignments of sum over occupied homes of
/// exp(max sup_weight among assigned atoms); equals the infimum of the
/// sup-weighted sum over covers refining the n-fold join.
LogValue p1(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec = Precision::Float, const SearchCaps& caps = {});

/// Infimum of the inf-weighted sum over covers refining the n-fold
/// join.  Enlarging every element of a refining cover to a containing
/// join element only lowers each inf term, so the infimum is attained
/// on subcovers and the computation coincides with the subcover search
/// on inf weights.
LogValue p2(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec = Precision::Float, const SearchCaps& caps = {});

/// min over subcovers of the n-fold join of sum of exp(element sup).
LogValue p3(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec = Precision::Float, const SearchCaps& caps = {});

/// min over subcovers of sum of exp(element inf).
LogValue p4(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec = Precision::Float, const SearchCaps& caps = {});

/// Overloads on a precomputed table, for callers evaluating several
/// variants of the same join.
LogValue p1(const AtomWeightTable& T, Precision prec = Precision::Float);
LogValue p2(const AtomWeightTable& T, Precision prec = Precision::Float);
LogValue p3(const AtomWeightTable& T, Precision prec = Precision::Float);
LogValue p4(const AtomWeightTable& T, Precision prec = Precision::Float);

/// Separated-set pressure at scale 2^{-m}: points are (n, 2^{-m})-
/// separated iff their (n+m)-prefixes differ, so the maximum is the sum
/// over admissible (n+m)-words of the best extension weight.  Negative m
/// puts the radius above the space diameter; only singletons qualify and
/// the sum collapses to one extremal term.
LogValue pn_separated(const Subshift& S, const EnergyFunctional& E, int n, int m,
                      Precision prec = Precision::Float, const SearchCaps& caps = {});

/// Spanning-set pressure: a spanning set needs a representative in
/// every admissible (n+m)-cylinder, so the minimum is the sum of worst
/// extension weights.
LogValue qn_spanning(const Subshift& S, const EnergyFunctional& E, int n, int m,
                     Precision prec = Precision::Float, const SearchCaps& caps = {});

// Greedy sweep: pick the max-weight remaining point, delete the atoms
// of the iterated joins of every supplied partition that contain it,
// repeat.  The certificate records the at-most-one-point-per-atom
// property and the sum bound against p1.
struct GreedyBnResult {
  std::vector<PointRep> points;
  LogValue sum;
  LogValue p1_value;
  bool atoms_single_occupancy = false;
  bool sum_bound_ok = false;  // sum >= p1 / (2n)
  bool certificate_ok() const { return atoms_single_occupancy && sum_bound_ok; }
};
GreedyBnResult greedy_bn(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
                         const std::vector<Partition>& partitions,
                         Precision prec = Precision::Float, const SearchCaps& caps = {});

// Disjointification sweep at scale delta = 2^{-m} (<= Lebesgue number):
// pick the max-weight remaining point, cover its Bowen ball
// B_n(x, delta/2) by a join element, subtract the already-used
// elements, repeat.  Produces a disjoint cover refining the join and an
// (n, delta/2)-separated set with equal weight sums.
struct DisjointifyResult {
  std::vector<PointRep> points;
  std::vector<CylSet> disjoint_cover;
  std::vector<int> element_index;  // join element backing each class
  LogValue sum;                    // common value of both sums
  LogValue p1_value;
  LogValue pn_value;               // separated-set pressure at delta/2
  bool disjoint_cover_ok = false;  // disjoint, covers X, refines the join
  bool separated_ok = false;
  bool sums_equal = false;
  bool p1_le_pn = false;
  bool certificate_ok() const {
    return disjoint_cover_ok && separated_ok && sums_equal && p1_le_pn;
  }
};
DisjointifyResult greedy_disjointify(const Subshift& S, const Cover& U,
                                     const EnergyFunctional& E, int n, int m,
                                     Precision prec = Precision::Float,
                                     const SearchCaps& caps = {});

struct PressureAudit {
  bool chain_inf_le_sup = true;   // p2 <= p4 <= p3 and p2 <= p1 <= p3
  bool p1_le_p2_shifted = true;   // p1 <= p2 * e^{n*tau}
  bool p3_le_p4_shifted = true;   // p3 <= p4 * e^{n*tau}
  bool p3_le_qn_shifted = true;   // p3 * e^{-n*tau} <= Q_n(lebesgue/2)
  bool qn_le_pn_le_p2 = true;     // Q_n(eps) <= P_n(eps) <= p2 * e^{n*tau}
  bool p4_le_qn = true;           // p4 <= Q_n(lebesgue/2)
  bool all_ok() const {
    return chain_inf_le_sup && p1_le_p2_shifted && p3_le_p4_shifted && p3_le_qn_shifted &&
           qn_le_pn_le_p2 && p4_le_qn;
  }
};

struct PressureRow {
  int n = 0;
  LogValue p1, p2, p3, p4;
  std::vector<std::pair<int, LogValue>> pn;  // (m, value) per requested scale
  std::vector<std::pair<int, LogValue>> qn;
  LogValue pn_eps, qn_eps;       // strict separation/spanning at scale 2^{-m_eps}
  LogValue qn_half_lebesgue;     // at half the Lebesgue number
  PressureAudit audit;
};

struct RateBand {
  double low = 0;
  double high = 0;
};

struct PressureReport {
  std::vector<PressureRow> rows;
  std::vector<int> m_list;
  CoverGeometry geometry;
  int m_eps = 0;             // audit scale: diameter level (0 if diameter 0)
  int m_half_lebesgue = 0;   // lebesgue_level + 1
  Rational tau_hat;          // modulus bound at scale 2^{-m_eps}
  int window = 0;            // trailing-window size for the rate bands
  RateBand rate_p1, rate_p2, rate_p3, rate_p4;
  bool audits_ok() const {
    for (const auto& r : rows)
      if (!r.audit.all_ok()) return false;
    return true;
  }
};

PressureReport pressure_report(const Subshift& S, const Cover& U, const EnergyFunctional& E,
                               int n_lo, int n_hi, const std::vector<int>& m_list,
                               Precision prec = Precision::Float,
                               const SearchCaps& caps = {}, int window = 0,
                               int workers = 1);

}  // namespace plab
