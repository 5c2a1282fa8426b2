// Shared test utilities: seeded random instances (subshifts, covers,
// energies, measures), reference oracles built from eventually periodic
// points and exhaustive enumeration, and small closed-form builders.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pressurelab/cover.hpp"
#include "pressurelab/energy.hpp"
#include "pressurelab/expsum.hpp"
#include "pressurelab/measure.hpp"
#include "pressurelab/pressure.hpp"
#include "pressurelab/subshift.hpp"

namespace plabtest {

using namespace plab;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Transition matrix from rows like {"110", "110", "001"}.
inline Subshift sft_from(const std::vector<std::string>& rows) {
  const int k = static_cast<int>(rows.size());
  std::vector<std::vector<bool>> allowed(k, std::vector<bool>(k, false));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) allowed[i][j] = rows[i][j] == '1';
  return Subshift(k, std::move(allowed));
}

/// The golden mean shift: 11 forbidden.
inline Subshift golden_mean() { return sft_from({"11", "10"}); }

/// Full 2-shift together with an isolated fixed point at symbol 2.
inline Subshift fixedpoint_system() { return sft_from({"110", "110", "001"}); }

inline Cover fixedpoint_cover(const Subshift& S) {
  Cover U;
  U.elements.push_back(set_union(S, CylSet::cylinder(S, {0}), CylSet::cylinder(S, {2})));
  U.elements.push_back(set_union(S, CylSet::cylinder(S, {1}), CylSet::cylinder(S, {2})));
  return U;
}

/// Linear energy with value 10 on the fixed-point cylinder.
inline EnergyFunctional fixedpoint_energy(const Subshift& S) {
  return EnergyFunctional::linear(
      S, CylinderFunction(S, 1, {Rational(0), Rational(0), Rational(10)}));
}

inline Cover one_cylinder_cover(const Subshift& S) {
  Cover U;
  for (Symbol a = 0; a < S.alphabet_size(); ++a)
    U.elements.push_back(CylSet::cylinder(S, {a}));
  return U;
}

/// sum_k C(n,k) e^{k a + (n-k) b}, the expansion of (e^a + e^b)^n.
inline ExpSum binomial_expsum(int n, const Rational& a, const Rational& b) {
  ExpSum s;
  Rational c(1);
  for (int k = 0; k <= n; ++k) {
    s.add_term(Rational(k) * a + Rational(n - k) * b, c);
    c = c * Rational(n - k) / Rational(k + 1);
  }
  return s;
}

inline Subshift random_sft(std::mt19937_64& rng, int max_symbols = 3) {
  const int k = 1 + static_cast<int>(rng() % max_symbols);
  std::vector<std::vector<bool>> allowed(k, std::vector<bool>(k, false));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) allowed[i][j] = rng() % 10 < 6;
  for (int i = 0; i < k; ++i) {
    bool any = false;
    for (int j = 0; j < k; ++j) any = any || allowed[i][j];
    if (!any) allowed[i][rng() % k] = true;
  }
  for (int j = 0; j < k; ++j) {
    bool any = false;
    for (int i = 0; i < k; ++i) any = any || allowed[i][j];
    if (!any) allowed[rng() % k][j] = true;
  }
  return Subshift(k, std::move(allowed));
}

inline Cover random_cover(std::mt19937_64& rng, const Subshift& S, int max_res = 2) {
  const int r = 1 + static_cast<int>(rng() % max_res);
  const std::vector<Word> words = enumerate_words(S, r);
  const int ne = 2 + static_cast<int>(rng() % 3);
  std::vector<std::vector<Word>> elems(ne);
  for (const Word& w : words) {
    bool any = false;
    for (int e = 0; e < ne; ++e)
      if (rng() % 100 < 45) {
        elems[e].push_back(w);
        any = true;
      }
    if (!any) elems[rng() % ne].push_back(w);
  }
  Cover U;
  for (int e = 0; e < ne; ++e)
    if (!elems[e].empty()) U.elements.push_back(CylSet(S, r, elems[e]));
  return U;
}

inline EnergyFunctional random_energy(std::mt19937_64& rng, const Subshift& S,
                                      int max_window = 2) {
  const int nt = 1 + static_cast<int>(rng() % 2);
  std::vector<EnergyFunctional::Term> terms;
  for (int t = 0; t < nt; ++t) {
    const int w = 1 + static_cast<int>(rng() % max_window);
    const std::vector<Word> words = enumerate_words(S, w);
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < words.size(); ++i)
      vals.push_back(rat(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4)));
    Polynomial outer;
    const int deg = static_cast<int>(rng() % 3);
    for (int d = 0; d <= deg; ++d)
      outer.coeff.push_back(rat(static_cast<long>(rng() % 5) - 2));
    terms.push_back({std::move(outer), CylinderFunction(S, w, std::move(vals))});
  }
  return EnergyFunctional(std::move(terms));
}

inline Word random_word(std::mt19937_64& rng, const Subshift& S, int len) {
  Word w;
  std::vector<Symbol> starts;
  for (Symbol a = 0; a < S.alphabet_size(); ++a)
    if (!S.successors(a).empty()) starts.push_back(a);
  w.push_back(starts[rng() % starts.size()]);
  while (static_cast<int>(w.size()) < len) {
    const auto& succ = S.successors(w.back());
    w.push_back(succ[rng() % succ.size()]);
  }
  return w;
}

inline AtomicMeasure random_atomic(std::mt19937_64& rng, const Subshift& S,
                                   int max_atoms = 12) {
  const int k = 1 + static_cast<int>(rng() % max_atoms);
  std::vector<long> ws;
  long total = 0;
  for (int i = 0; i < k; ++i) {
    ws.push_back(1 + static_cast<long>(rng() % 5));
    total += ws.back();
  }
  std::vector<std::pair<PointRep, Rational>> atoms;
  for (int i = 0; i < k; ++i) {
    PointRep x = complete_to_point(S, random_word(rng, S, 1 + rng() % 4));
    atoms.emplace_back(std::move(x), rat(ws[i], total));
  }
  return AtomicMeasure(S, std::move(atoms));
}

// ---------------------------------------------------------------------
// Reference oracles.

// Separated / spanning pressures from eventually periodic candidate
// points: one candidate per admissible word at the resolution where
// both the weight and the closeness relation are decided.  Candidates
// are sorted by raw symbol prefix; first-difference positions between
// neighbors determine every pairwise Bowen distance (the minimum over
// a gap), and runs of neighbors agreeing on n+m symbols are exactly
// the closeness classes.  Weights use empirical measures, not word
// arithmetic.
struct SpanSepOracle {
  ExpSum separated;  // max point weight per class, summed
  ExpSum spanning;   // min point weight per class, summed
};

inline SpanSepOracle spanning_separated_oracle(const Subshift& S, const EnergyFunctional& E,
                                               int n, int m) {
  const int upto = std::max(n + m, n + E.window() - 1);
  const std::vector<Word> seeds = enumerate_words(S, upto);
  struct Cand {
    Word prefix;
    Rational weight;
  };
  std::vector<Cand> cands;
  for (const Word& u : seeds) {
    const PointRep x = complete_to_point(S, u);
    cands.push_back({x.prefix(upto), Rational(n) * E.eval(S, empirical_measure(S, x, n))});
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.prefix < b.prefix; });
  std::vector<int> adj;  // first difference position between neighbors
  for (std::size_t i = 1; i < cands.size(); ++i) {
    int j = 0;
    while (cands[i - 1].prefix[j] == cands[i].prefix[j]) ++j;
    adj.push_back(j);
  }
  SpanSepOracle out;
  std::size_t i = 0;
  while (i < cands.size()) {
    std::size_t j = i;
    Rational mx = cands[i].weight, mn = cands[i].weight;
    while (j + 1 < cands.size() && adj[j] >= n + m) {
      ++j;
      mx = std::max(mx, cands[j].weight);
      mn = std::min(mn, cands[j].weight);
    }
    out.separated.add_term(mx, Rational(1));
    out.spanning.add_term(mn, Rational(1));
    i = j + 1;
  }
  return out;
}

// Fully naive variant: exhaustive subset search with Bowen distances
// computed point by point from the metric.  Exponential; only for tiny
// candidate sets.  Used to validate the sorted oracle above.
inline std::optional<SpanSepOracle> spanning_separated_naive(const Subshift& S,
                                                             const EnergyFunctional& E, int n,
                                                             int m,
                                                             std::size_t max_candidates = 12) {
  const int upto = std::max(n + m, n + E.window() - 1);
  const std::vector<Word> seeds = enumerate_words(S, upto);
  const std::size_t N = seeds.size();
  if (N > max_candidates) return std::nullopt;
  std::vector<PointRep> pts;
  std::vector<Rational> wt;
  for (const Word& u : seeds) {
    pts.push_back(complete_to_point(S, u));
    wt.push_back(Rational(n) * E.eval(S, empirical_measure(S, pts.back(), n)));
  }
  const Rational eps = pow2(-m);
  auto bowen = [&](const PointRep& x, const PointRep& y) {
    Rational best(0);
    PointRep a = x, b = y;
    for (int i = 0; i < n; ++i) {
      best = std::max(best, dist(a, b));
      a = shift(a);
      b = shift(b);
    }
    return best;
  };
  std::vector<std::vector<bool>> close(N, std::vector<bool>(N, true));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      close[i][j] = close[j][i] = bowen(pts[i], pts[j]) < eps;
  std::optional<ExpSum> best_sep, best_span;
  for (std::uint64_t mask = 1; mask < (1ull << N); ++mask) {
    bool sep_ok = true;
    for (std::size_t i = 0; i < N && sep_ok; ++i)
      for (std::size_t j = i + 1; j < N && sep_ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && close[i][j]) sep_ok = false;
    bool span_ok = true;
    for (std::size_t t = 0; t < N && span_ok; ++t) {
      bool covered = false;
      for (std::size_t s = 0; s < N && !covered; ++s)
        covered = (mask >> s & 1) && close[s][t];
      span_ok = covered;
    }
    if (!sep_ok && !span_ok) continue;
    ExpSum sum;
    for (std::size_t s = 0; s < N; ++s)
      if (mask >> s & 1) sum.add_term(wt[s], Rational(1));
    if (sep_ok && (!best_sep || best_sep->compare(sum) < 0)) best_sep = sum;
    if (span_ok && (!best_span || sum.compare(*best_span) < 0)) best_span = sum;
  }
  return SpanSepOracle{*best_sep, *best_span};
}

// Minimal weighted subcover by subset enumeration over the join
// elements; reference for the branch and bound behind p3 / p4.
inline std::optional<ExpSum> subcover_brute(const Subshift& S, const Cover& U,
                                            const EnergyFunctional& E, int n, bool use_sup,
                                            std::size_t max_elements = 18) {
  const AtomWeightTable T = atom_weights(S, U, E, n);
  const std::size_t ne = T.joined.elements.size();
  const std::size_t na = T.atoms.size();
  if (ne > max_elements || na > 64) return std::nullopt;
  std::vector<std::uint64_t> elem_atoms(ne, 0);
  for (std::size_t ai = 0; ai < na; ++ai)
    for (int h : T.atoms[ai].homes) elem_atoms[h] |= 1ull << ai;
  const std::uint64_t full = na == 64 ? ~0ull : (1ull << na) - 1;
  std::optional<ExpSum> best;
  for (std::uint64_t mask = 1; mask < (1ull << ne); ++mask) {
    std::uint64_t got = 0;
    for (std::size_t e = 0; e < ne; ++e)
      if (mask >> e & 1) got |= elem_atoms[e];
    if (got != full) continue;
    ExpSum sum;
    for (std::size_t e = 0; e < ne; ++e)
      if (mask >> e & 1)
        sum.add_term(use_sup ? T.element_sup[e] : T.element_inf[e], Rational(1));
    if (!best || sum.compare(*best) < 0) best = sum;
  }
  return best;
}

// Best atom-to-home assignment value by exhaustive enumeration: sup
// mode is the refining-partition objective behind p1 (exp of the max
// assigned sup weight per occupied element), inf mode its inf-weight
// analogue (which can exceed the subcover infimum).
inline std::optional<ExpSum> assignment_brute(const Subshift& S, const Cover& U,
                                              const EnergyFunctional& E, int n, bool use_sup,
                                              std::uint64_t max_assignments = 200000) {
  const AtomWeightTable T = atom_weights(S, U, E, n);
  std::uint64_t count = 1;
  for (const WeightedAtom& a : T.atoms) {
    count *= a.homes.size();
    if (count > max_assignments) return std::nullopt;
  }
  const std::size_t na = T.atoms.size();
  std::vector<std::size_t> idx(na, 0);
  std::optional<ExpSum> best;
  while (true) {
    std::map<int, Rational> acc;
    for (std::size_t ai = 0; ai < na; ++ai) {
      const int e = T.atoms[ai].homes[idx[ai]];
      const Rational& w = use_sup ? T.atoms[ai].sup_weight : T.atoms[ai].inf_weight;
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(e, w);
      else if (use_sup ? it->second < w : w < it->second)
        it->second = w;
    }
    ExpSum sum;
    for (const auto& [e, w] : acc) sum.add_term(w, Rational(1));
    if (!best || sum.compare(*best) < 0) best = sum;
    std::size_t k = 0;
    while (k < na && ++idx[k] == T.atoms[k].homes.size()) idx[k++] = 0;
    if (k == na) break;
  }
  return best;
}

}  // namespace plabtest
