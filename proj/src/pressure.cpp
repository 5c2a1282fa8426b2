// Pressure computations: atom weight tables, the four local pressures,
// separated/spanning pressures, greedy sweeps and the per-n report.

#include "pressurelab/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <thread>

namespace plab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kAuditTol = 1e-9;

// Log-domain accumulator for float mode.
struct FloatCost {
  double logv = kNegInf;
  void add_exp(const Rational& q) { logv = log_add_exp(logv, to_double(q)); }
  bool operator<(const FloatCost& o) const { return logv < o.logv; }
};

// Symbolic accumulator for exact mode.
struct ExactCost {
  ExpSum sum;
  void add_exp(const Rational& q) { sum.add_term(q, Rational(1)); }
  bool operator<(const ExactCost& o) const { return sum.compare(o.sum) < 0; }
};

LogValue as_log_value(const FloatCost& c) { return LogValue{c.logv, std::nullopt}; }
LogValue as_log_value(const ExactCost& c) { return LogValue{c.sum.log_value(), c.sum}; }

// A validated cover with pairwise disjoint elements is a partition:
// the union already equals the whole space, so the word counts at the
// common resolution add up exactly when there is no overlap.
bool is_partition_cover(const Subshift& S, const Cover& U) {
  const int r = cover_resolution(U);
  std::uint64_t total = 0;
  for (const CylSet& e : U.elements) total += e.words_at(S, r).size();
  return total == S.word_count(r);
}

template <class Cost>
Cost subcover_search(const AtomWeightTable& T, bool use_sup);

template <class Cost>
Cost p1_search(const AtomWeightTable& T) {
  const int natoms = static_cast<int>(T.atoms.size());
  const int nelem = static_cast<int>(T.joined.elements.size());

  bool all_single = true;
  for (const WeightedAtom& a : T.atoms)
    if (a.homes.size() != 1) { all_single = false; break; }
  if (all_single) {
    std::vector<char> occupied(nelem, 0);
    for (const WeightedAtom& a : T.atoms) occupied[a.homes[0]] = 1;
    Cost c;
    for (int e = 0; e < nelem; ++e)
      if (occupied[e]) c.add_exp(T.element_sup[e]);
    return c;
  }

  bool all_equal = true;
  for (const WeightedAtom& a : T.atoms)
    if (a.sup_weight != T.atoms.front().sup_weight) { all_equal = false; break; }
  if (all_equal) {
    // The occupied elements of any assignment form a subcover and every
    // subcover admits an assignment, so with one shared weight the
    // optimum is the cheapest subcover.
    return subcover_search<Cost>(T, true);
  }

  // Atoms in descending sup order: the first atom assigned to an
  // element fixes that element's contribution, and an atom with an
  // already-open home can always take it without changing the cost.
  std::vector<int> order(natoms);
  for (int i = 0; i < natoms; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return T.atoms[b].sup_weight < T.atoms[a].sup_weight;
  });

  std::vector<char> open(nelem, 0);
  std::optional<Cost> best;
  std::function<void(int, const Cost&)> rec = [&](int i, const Cost& cost) {
    while (i < natoms) {
      bool has_open = false;
      for (int h : T.atoms[order[i]].homes)
        if (open[h]) { has_open = true; break; }
      if (!has_open) break;
      ++i;
    }
    if (i == natoms) {
      if (!best || cost < *best) best = cost;
      return;
    }
    // The next orphan atom forces a fresh element whose contribution is
    // exactly its own sup weight (later atoms in order are no larger).
    Cost next = cost;
    next.add_exp(T.atoms[order[i]].sup_weight);
    if (best && !(next < *best)) return;
    if (best) {
      // Unassigned atoms ahead with pairwise disjoint home sets each
      // force a distinct opening at least as heavy as themselves.
      Cost lb = cost;
      std::vector<char> used(nelem, 0);
      for (int j = i; j < natoms; ++j) {
        const WeightedAtom& a = T.atoms[order[j]];
        bool blocked = false;
        for (int h : a.homes)
          if (open[h] || used[h]) { blocked = true; break; }
        if (blocked) continue;
        lb.add_exp(a.sup_weight);
        for (int h : a.homes) used[h] = 1;
      }
      if (!(lb < *best)) return;
    }
    for (int h : T.atoms[order[i]].homes) {
      open[h] = 1;
      rec(i + 1, next);
      open[h] = 0;
    }
  };
  rec(0, Cost{});
  return *best;
}

// Minimal-weight subcover: exact branch and bound over the atom
// incidence structure with duplicate and dominance elimination.
template <class Cost>
Cost subcover_search(const AtomWeightTable& T, bool use_sup) {
  const std::vector<Rational>& wts = use_sup ? T.element_sup : T.element_inf;
  const int natoms = static_cast<int>(T.atoms.size());
  const int nelem = static_cast<int>(T.joined.elements.size());

  bool all_single = true;
  for (const WeightedAtom& a : T.atoms)
    if (a.homes.size() != 1) { all_single = false; break; }
  if (all_single) {
    // Every element is the sole home of its atoms, so the only subcover
    // is the whole family.
    std::vector<char> occupied(nelem, 0);
    for (const WeightedAtom& a : T.atoms) occupied[a.homes[0]] = 1;
    Cost c;
    for (int e = 0; e < nelem; ++e)
      if (occupied[e]) c.add_exp(wts[e]);
    return c;
  }

  const int nwords = (natoms + 63) / 64;
  using Bits = std::vector<std::uint64_t>;

  // Group elements by their atom set, keeping the cheapest weight.
  std::vector<Bits> set_bits;
  std::vector<Rational> set_wt;
  {
    std::map<Bits, int> by_bits;
    std::vector<Bits> elem_bits(nelem, Bits(nwords, 0));
    for (int i = 0; i < natoms; ++i)
      for (int e : T.atoms[i].homes)
        elem_bits[e][i / 64] |= std::uint64_t(1) << (i % 64);
    for (int e = 0; e < nelem; ++e) {
      auto it = by_bits.find(elem_bits[e]);
      if (it == by_bits.end()) {
        by_bits.emplace(elem_bits[e], static_cast<int>(set_bits.size()));
        set_bits.push_back(elem_bits[e]);
        set_wt.push_back(wts[e]);
      } else if (wts[e] < set_wt[it->second]) {
        set_wt[it->second] = wts[e];
      }
    }
  }
  // Drop any set strictly inside another that costs no more.
  const int nsets = static_cast<int>(set_bits.size());
  std::vector<char> dropped(nsets, 0);
  auto subset_of = [&](const Bits& a, const Bits& b) {
    for (int k = 0; k < nwords; ++k)
      if (a[k] & ~b[k]) return false;
    return true;
  };
  for (int a = 0; a < nsets; ++a)
    for (int b = 0; b < nsets && !dropped[a]; ++b)
      if (b != a && !dropped[b] && subset_of(set_bits[a], set_bits[b]) &&
          !(set_wt[a] < set_wt[b]))
        dropped[a] = 1;

  std::vector<int> live;
  for (int s = 0; s < nsets; ++s)
    if (!dropped[s]) live.push_back(s);

  std::vector<std::vector<int>> candidates(natoms);
  for (int s : live)
    for (int i = 0; i < natoms; ++i)
      if (set_bits[s][i / 64] >> (i % 64) & 1) candidates[i].push_back(s);
  for (auto& c : candidates)
    std::sort(c.begin(), c.end(),
              [&](int x, int y) { return set_wt[x] != set_wt[y] ? set_wt[x] < set_wt[y] : x < y; });

  Bits full(nwords, ~std::uint64_t(0));
  if (natoms % 64) full[nwords - 1] = (std::uint64_t(1) << (natoms % 64)) - 1;

  std::optional<Cost> best;
  std::function<void(const Cost&, const Bits&)> rec = [&](const Cost& cost, const Bits& covered) {
    if (covered == full) {
      if (!best || cost < *best) best = cost;
      return;
    }
    if (best) {
      // Lower bound: uncovered atoms whose candidate sets are pairwise
      // disjoint each force a distinct element at least as heavy as
      // their cheapest candidate.
      Cost lb = cost;
      std::vector<char> used(nsets, 0);
      for (int i = 0; i < natoms; ++i) {
        if (covered[i / 64] >> (i % 64) & 1) continue;
        bool clash = false;
        for (int s : candidates[i])
          if (used[s]) { clash = true; break; }
        if (clash) continue;
        lb.add_exp(set_wt[candidates[i].front()]);
        for (int s : candidates[i]) used[s] = 1;
      }
      if (!(lb < *best)) return;
    }
    int pick = -1;
    for (int i = 0; i < natoms; ++i) {
      if (covered[i / 64] >> (i % 64) & 1) continue;
      if (pick < 0 || candidates[i].size() < candidates[pick].size()) pick = i;
    }
    for (int s : candidates[pick]) {
      Cost next = cost;
      next.add_exp(set_wt[s]);
      Bits cov = covered;
      for (int k = 0; k < nwords; ++k) cov[k] |= set_bits[s][k];
      rec(next, cov);
    }
  };
  rec(Cost{}, Bits(nwords, 0));
  return *best;
}

template <class Cost>
Cost separated_or_spanning(const Subshift& S, const EnergyFunctional& E, int n, int m,
                           bool take_max, const SearchCaps& caps) {
  if (n < 1) throw std::invalid_argument("pressure: n must be >= 1");
  // For m < 0 the radius 2^{-m} exceeds the space diameter: no two
  // distinct points are separated and any single point spans, so all
  // words collapse into one class.
  const int ball = m >= 0 ? bowen_resolution(n, m) : 0;
  const int R = std::max(ball, n - 1 + E.window());
  const int cap =
      caps.max_resolution > 0 ? caps.max_resolution : default_resolution_cap(S.alphabet_size());
  if (R > cap) throw ResolutionCapError(R, cap);

  // Lexicographic enumeration keeps words of a common (n+m)-prefix
  // adjacent, so one pass with a running extremum per prefix suffices.
  std::vector<Word> words = enumerate_words(S, R);
  Cost acc;
  std::optional<Rational> group_val;
  const Word* group_prefix_of = nullptr;
  auto same_prefix = [&](const Word& a, const Word& b) {
    return std::equal(a.begin(), a.begin() + ball, b.begin());
  };
  for (const Word& u : words) {
    Rational v = E.orbit_weight(u, n);
    if (group_prefix_of && same_prefix(*group_prefix_of, u)) {
      if (take_max ? (*group_val < v) : (v < *group_val)) group_val = v;
    } else {
      if (group_val) acc.add_exp(*group_val);
      group_val = v;
      group_prefix_of = &u;
    }
  }
  if (group_val) acc.add_exp(*group_val);
  return acc;
}

bool le_shifted(const LogValue& a, const LogValue& b, const Rational& shift) {
  // a <= b * e^{shift}
  if (a.exact && b.exact) {
    ExpSum rhs = *b.exact;
    rhs.shift_exponent(shift);
    return a.exact->compare(rhs) <= 0;
  }
  return a.log_value <= b.log_value + to_double(shift) + kAuditTol;
}

bool le_plain(const LogValue& a, const LogValue& b) { return le_shifted(a, b, Rational(0)); }

}  // namespace

int default_resolution_cap(int alphabet_size) {
  if (alphabet_size < 2) return 22;
  int r = 0;
  double words = 1;
  while (words * alphabet_size <= double(1 << 22)) {
    words *= alphabet_size;
    ++r;
  }
  return r;
}

ResolutionCapError::ResolutionCapError(int required_, int cap_)
    : std::runtime_error("working resolution " + std::to_string(required_) +
                         " exceeds the cap " + std::to_string(cap_)),
      required(required_),
      cap(cap_) {}

AtomWeightTable atom_weights(const Subshift& S, const Cover& U, const EnergyFunctional& E,
                             int n, const SearchCaps& caps) {
  if (n < 1) throw std::invalid_argument("atom_weights: n must be >= 1");
  validate_cover(S, U);
  const int R = n - 1 + std::max(cover_resolution(U), E.window());
  const int cap =
      caps.max_resolution > 0 ? caps.max_resolution : default_resolution_cap(S.alphabet_size());
  if (R > cap) throw ResolutionCapError(R, cap);

  AtomWeightTable T;
  T.n = n;
  T.working_resolution = R;
  T.joined = iterated_join(S, U, n);
  const int nelem = static_cast<int>(T.joined.elements.size());

  auto scan = [&](const CylSet& set) {
    std::vector<Word> ws = set.words_at(S, R);
    Rational lo = E.orbit_weight(ws.front(), n), hi = lo;
    for (std::size_t i = 1; i < ws.size(); ++i) {
      Rational v = E.orbit_weight(ws[i], n);
      if (v < lo) lo = v;
      if (hi < v) hi = v;
    }
    return std::pair<Rational, Rational>(lo, hi);
  };

  if (is_partition_cover(S, U)) {
    // The join of a partition is a partition: each element is its own
    // atom with a single home.
    for (int e = 0; e < nelem; ++e) {
      auto [lo, hi] = scan(T.joined.elements[e]);
      T.atoms.push_back(WeightedAtom{T.joined.elements[e], hi, lo, {e}});
      T.element_sup.push_back(hi);
      T.element_inf.push_back(lo);
    }
    return T;
  }

  GeneratedPartition gp = generated_partition(S, T.joined.elements);
  T.element_sup.assign(nelem, Rational(0));
  T.element_inf.assign(nelem, Rational(0));
  std::vector<char> seen(nelem, 0);
  for (std::size_t i = 0; i < gp.partition.classes.size(); ++i) {
    auto [lo, hi] = scan(gp.partition.classes[i]);
    T.atoms.push_back(WeightedAtom{gp.partition.classes[i], hi, lo, gp.homes[i]});
    for (int e : gp.homes[i]) {
      if (!seen[e]) {
        seen[e] = 1;
        T.element_sup[e] = hi;
        T.element_inf[e] = lo;
      } else {
        if (T.element_sup[e] < hi) T.element_sup[e] = hi;
        if (lo < T.element_inf[e]) T.element_inf[e] = lo;
      }
    }
  }
  return T;
}

LogValue p1(const AtomWeightTable& T, Precision prec) {
  if (prec == Precision::Exact) return as_log_value(p1_search<ExactCost>(T));
  return as_log_value(p1_search<FloatCost>(T));
}

LogValue p2(const AtomWeightTable& T, Precision prec) {
  // Enlarging each class of a refining cover to a containing join
  // element can only shrink every inf term, so the infimum over
  // refining covers is attained on subcovers of the join.
  return p4(T, prec);
}

LogValue p3(const AtomWeightTable& T, Precision prec) {
  if (prec == Precision::Exact) return as_log_value(subcover_search<ExactCost>(T, true));
  return as_log_value(subcover_search<FloatCost>(T, true));
}

LogValue p4(const AtomWeightTable& T, Precision prec) {
  if (prec == Precision::Exact) return as_log_value(subcover_search<ExactCost>(T, false));
  return as_log_value(subcover_search<FloatCost>(T, false));
}

LogValue p1(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec, const SearchCaps& caps) {
  return p1(atom_weights(S, U, E, n, caps), prec);
}

LogValue p2(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec, const SearchCaps& caps) {
  return p2(atom_weights(S, U, E, n, caps), prec);
}

LogValue p3(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec, const SearchCaps& caps) {
  return p3(atom_weights(S, U, E, n, caps), prec);
}

LogValue p4(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
            Precision prec, const SearchCaps& caps) {
  return p4(atom_weights(S, U, E, n, caps), prec);
}

LogValue pn_separated(const Subshift& S, const EnergyFunctional& E, int n, int m,
                      Precision prec, const SearchCaps& caps) {
  if (prec == Precision::Exact)
    return as_log_value(separated_or_spanning<ExactCost>(S, E, n, m, true, caps));
  return as_log_value(separated_or_spanning<FloatCost>(S, E, n, m, true, caps));
}

LogValue qn_spanning(const Subshift& S, const EnergyFunctional& E, int n, int m,
                     Precision prec, const SearchCaps& caps) {
  if (prec == Precision::Exact)
    return as_log_value(separated_or_spanning<ExactCost>(S, E, n, m, false, caps));
  return as_log_value(separated_or_spanning<FloatCost>(S, E, n, m, false, caps));
}

GreedyBnResult greedy_bn(const Subshift& S, const Cover& U, const EnergyFunctional& E, int n,
                         const std::vector<Partition>& partitions, Precision prec,
                         const SearchCaps& caps) {
  if (n < 1) throw std::invalid_argument("greedy_bn: n must be >= 1");
  if (partitions.empty()) throw std::invalid_argument("greedy_bn: need at least one partition");
  validate_cover(S, U);

  // One partition per sweep level; a short list repeats cyclically.
  std::vector<const Partition*> alpha(n);
  int max_res = 0;
  for (int l = 0; l < n; ++l) {
    alpha[l] = &partitions[l % partitions.size()];
    if (l < static_cast<int>(partitions.size())) {
      validate_partition(S, *alpha[l]);
      if (!is_finer(S, alpha[l]->as_cover(), U))
        throw std::invalid_argument("greedy_bn: partition is not finer than the cover");
    }
    max_res = std::max(max_res, cover_resolution(alpha[l]->as_cover()));
  }
  const int R = n - 1 + std::max(max_res, E.window());
  const int cap =
      caps.max_resolution > 0 ? caps.max_resolution : default_resolution_cap(S.alphabet_size());
  if (R > cap) throw ResolutionCapError(R, cap);

  std::vector<Word> words = enumerate_words(S, R);
  const int W = static_cast<int>(words.size());
  std::vector<Rational> weight(W);
  for (int i = 0; i < W; ++i) weight[i] = E.orbit_weight(words[i], n);

  // Word-level atom ids of the n-step join of each partition: the atom
  // containing a word is the tuple of classes met along the first n
  // shifts, and words at resolution R determine the tuple fully.
  std::vector<std::vector<int>> atom_id(n, std::vector<int>(W));
  std::vector<std::vector<std::vector<int>>> atom_members(n);
  for (int l = 0; l < n; ++l) {
    const Partition& P = *alpha[l];
    const int r = std::max(cover_resolution(P.as_cover()), 1);
    std::map<Word, int> class_of;
    for (std::size_t c = 0; c < P.classes.size(); ++c)
      for (const Word& u : P.classes[c].words_at(S, r)) class_of[u] = static_cast<int>(c);
    std::map<std::vector<int>, int> intern;
    for (int i = 0; i < W; ++i) {
      std::vector<int> tuple(n);
      for (int j = 0; j < n; ++j) {
        Word sub(words[i].begin() + j, words[i].begin() + j + r);
        tuple[j] = class_of.at(sub);
      }
      auto [it, fresh] = intern.emplace(std::move(tuple), static_cast<int>(intern.size()));
      atom_id[l][i] = it->second;
      if (fresh) atom_members[l].emplace_back();
      atom_members[l][it->second].push_back(i);
    }
  }

  GreedyBnResult res;
  std::vector<char> alive(W, 1);
  std::vector<int> picked;
  int remaining = W;
  while (remaining > 0) {
    int pick = -1;
    for (int i = 0; i < W; ++i)
      if (alive[i] && (pick < 0 || weight[pick] < weight[i])) pick = i;
    picked.push_back(pick);
    res.points.push_back(complete_to_point(S, words[pick]));
    for (int l = 0; l < n; ++l)
      for (int i : atom_members[l][atom_id[l][pick]])
        if (alive[i]) {
          alive[i] = 0;
          --remaining;
        }
  }

  res.atoms_single_occupancy = true;
  for (int l = 0; l < n && res.atoms_single_occupancy; ++l) {
    std::vector<char> hit(atom_members[l].size(), 0);
    for (int i : picked) {
      if (hit[atom_id[l][i]]) {
        res.atoms_single_occupancy = false;
        break;
      }
      hit[atom_id[l][i]] = 1;
    }
  }

  res.p1_value = p1(S, U, E, n, prec, caps);
  if (prec == Precision::Exact) {
    ExactCost sum;
    for (int i : picked) sum.add_exp(weight[i]);
    res.sum = as_log_value(sum);
    ExpSum bound = *res.p1_value.exact;
    bound.scale(Rational(1, 2 * n));
    res.sum_bound_ok = bound.compare(sum.sum) <= 0;
  } else {
    FloatCost sum;
    for (int i : picked) sum.add_exp(weight[i]);
    res.sum = as_log_value(sum);
    res.sum_bound_ok =
        res.p1_value.log_value - std::log(2.0 * n) <= res.sum.log_value + kAuditTol;
  }
  return res;
}

DisjointifyResult greedy_disjointify(const Subshift& S, const Cover& U,
                                     const EnergyFunctional& E, int n, int m, Precision prec,
                                     const SearchCaps& caps) {
  if (n < 1) throw std::invalid_argument("greedy_disjointify: n must be >= 1");
  if (m < 0) throw std::invalid_argument("greedy_disjointify: m must be >= 0");
  validate_cover(S, U);
  CoverGeometry geom = cover_geometry(S, U);
  if (m < geom.lebesgue_level)
    throw std::invalid_argument(
        "greedy_disjointify: 2^-m exceeds the Lebesgue number of the cover");

  const int ball = bowen_resolution(n, m + 1);  // B_n(x, 2^{-m}/2)
  const int R = std::max(ball, n - 1 + std::max(cover_resolution(U), E.window()));
  const int cap =
      caps.max_resolution > 0 ? caps.max_resolution : default_resolution_cap(S.alphabet_size());
  if (R > cap) throw ResolutionCapError(R, cap);

  JoinedCover joined = iterated_join(S, U, n);
  std::vector<Word> words = enumerate_words(S, R);
  const int W = static_cast<int>(words.size());
  std::vector<Rational> weight(W);
  for (int i = 0; i < W; ++i) weight[i] = E.orbit_weight(words[i], n);

  DisjointifyResult res;
  std::vector<char> alive(W, 1);
  std::vector<int> picked;
  std::vector<Rational> class_sup;
  CylSet used = CylSet::empty_set(S);
  int remaining = W;
  while (remaining > 0) {
    int pick = -1;
    for (int i = 0; i < W; ++i)
      if (alive[i] && (pick < 0 || weight[pick] < weight[i])) pick = i;
    picked.push_back(pick);
    res.points.push_back(complete_to_point(S, words[pick]));

    Word ball_word(words[pick].begin(), words[pick].begin() + ball);
    int elem = -1;
    for (std::size_t e = 0; e < joined.elements.size(); ++e)
      if (joined.elements[e].contains_cylinder(S, ball_word)) {
        elem = static_cast<int>(e);
        break;
      }
    if (elem < 0)
      throw std::logic_error("greedy_disjointify: Bowen ball escaped the join cover");

    CylSet piece = set_difference(S, joined.elements[elem], used);
    res.disjoint_cover.push_back(piece);
    res.element_index.push_back(elem);
    used = set_union(S, used, joined.elements[elem]);
    for (int i = 0; i < W; ++i)
      if (alive[i] && joined.elements[elem].contains_cylinder(S, words[i])) {
        alive[i] = 0;
        --remaining;
      }

    Rational sup = weight[pick];
    for (const Word& u : piece.words_at(S, R)) {
      Rational v = E.orbit_weight(u, n);
      if (sup < v) sup = v;
    }
    class_sup.push_back(sup);
  }

  // Certificate (a): disjoint cover refining the join.
  std::uint64_t counted = 0;
  res.disjoint_cover_ok = true;
  for (std::size_t k = 0; k < res.disjoint_cover.size(); ++k) {
    counted += res.disjoint_cover[k].words_at(S, R).size();
    if (!is_subset(S, res.disjoint_cover[k], joined.elements[res.element_index[k]]))
      res.disjoint_cover_ok = false;
  }
  if (counted != static_cast<std::uint64_t>(W)) res.disjoint_cover_ok = false;
  CylSet total = CylSet::empty_set(S);
  for (const CylSet& piece : res.disjoint_cover) total = set_union(S, total, piece);
  if (!total.is_whole_space()) res.disjoint_cover_ok = false;

  // Certificate (b): pairwise distinct ball-length prefixes.
  res.separated_ok = true;
  for (std::size_t a = 0; a < picked.size() && res.separated_ok; ++a)
    for (std::size_t b = a + 1; b < picked.size(); ++b)
      if (std::equal(words[picked[a]].begin(), words[picked[a]].begin() + ball,
                     words[picked[b]].begin())) {
        res.separated_ok = false;
        break;
      }

  // Certificate (c): each class sup equals the picked point's weight.
  res.sums_equal = true;
  for (std::size_t k = 0; k < picked.size(); ++k)
    if (class_sup[k] != weight[picked[k]]) res.sums_equal = false;

  res.p1_value = p1(S, U, E, n, prec, caps);
  res.pn_value = pn_separated(S, E, n, m + 1, prec, caps);
  if (prec == Precision::Exact) {
    ExactCost sum;
    for (int i : picked) sum.add_exp(weight[i]);
    res.sum = as_log_value(sum);
  } else {
    FloatCost sum;
    for (int i : picked) sum.add_exp(weight[i]);
    res.sum = as_log_value(sum);
  }
  res.p1_le_pn = le_plain(res.p1_value, res.sum) && le_plain(res.sum, res.pn_value);
  return res;
}

PressureReport pressure_report(const Subshift& S, const Cover& U, const EnergyFunctional& E,
                               int n_lo, int n_hi, const std::vector<int>& m_list,
                               Precision prec, const SearchCaps& caps, int window,
                               int workers) {
  if (n_lo < 1 || n_hi < n_lo)
    throw std::invalid_argument("pressure_report: need 1 <= n_lo <= n_hi");
  validate_cover(S, U);

  PressureReport rep;
  rep.m_list = m_list;
  rep.geometry = cover_geometry(S, U);
  rep.m_eps = std::max(rep.geometry.diameter_level, 0);
  rep.m_half_lebesgue = rep.geometry.lebesgue_level + 1;
  rep.tau_hat = E.modulus_bound(pow2(-rep.m_eps));
  const int count = n_hi - n_lo + 1;
  rep.window = window > 0 ? window : std::max(1, count / 2);

  rep.rows.assign(count, PressureRow{});
  auto compute_row = [&](int idx) {
    const int n = n_lo + idx;
    PressureRow row;
    row.n = n;
    const AtomWeightTable T = atom_weights(S, U, E, n, caps);
    row.p1 = p1(T, prec);
    row.p2 = p2(T, prec);
    row.p3 = p3(T, prec);
    row.p4 = p4(T, prec);
    for (int m : m_list) {
      row.pn.emplace_back(m, pn_separated(S, E, n, m, prec, caps));
      row.qn.emplace_back(m, qn_spanning(S, E, n, m, prec, caps));
    }
    // Strict (n, eps)-separation at eps = diam(U) means d_n > 2^{-m_eps},
    // which over dyadic distances is closed separation one level coarser.
    // At the diameter scale itself a join element can contain two points
    // at distance exactly diam(U), and the per-element injection bounding
    // the separated sum by p2 would fail.
    row.pn_eps = pn_separated(S, E, n, rep.m_eps - 1, prec, caps);
    row.qn_eps = qn_spanning(S, E, n, rep.m_eps - 1, prec, caps);
    row.qn_half_lebesgue = qn_spanning(S, E, n, rep.m_half_lebesgue, prec, caps);

    const Rational shift = Rational(n) * rep.tau_hat;
    PressureAudit& a = row.audit;
    a.chain_inf_le_sup = le_plain(row.p2, row.p4) && le_plain(row.p4, row.p3) &&
                         le_plain(row.p2, row.p1) && le_plain(row.p1, row.p3);
    a.p1_le_p2_shifted = le_shifted(row.p1, row.p2, shift);
    a.p3_le_p4_shifted = le_shifted(row.p3, row.p4, shift);
    a.p3_le_qn_shifted = le_shifted(row.p3, row.qn_half_lebesgue, shift);
    a.qn_le_pn_le_p2 =
        le_plain(row.qn_eps, row.pn_eps) && le_shifted(row.pn_eps, row.p2, shift);
    a.p4_le_qn = le_plain(row.p4, row.qn_half_lebesgue);
    rep.rows[idx] = std::move(row);
  };

  if (workers > 1 && count > 1) {
    std::atomic<int> next(0);
    auto worker = [&]() {
      for (int idx = next.fetch_add(1); idx < count; idx = next.fetch_add(1)) compute_row(idx);
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min(workers, count);
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  } else {
    for (int idx = 0; idx < count; ++idx) compute_row(idx);
  }

  auto band = [&](auto get) {
    RateBand b{std::numeric_limits<double>::infinity(), kNegInf};
    const int first = std::max(0, count - rep.window);
    for (int idx = first; idx < count; ++idx) {
      double r = get(rep.rows[idx]).rate(rep.rows[idx].n);
      b.low = std::min(b.low, r);
      b.high = std::max(b.high, r);
    }
    return b;
  };
  rep.rate_p1 = band([](const PressureRow& r) -> const LogValue& { return r.p1; });
  rep.rate_p2 = band([](const PressureRow& r) -> const LogValue& { return r.p2; });
  rep.rate_p3 = band([](const PressureRow& r) -> const LogValue& { return r.p3; });
  rep.rate_p4 = band([](const PressureRow& r) -> const LogValue& { return r.p4; });
  return rep;
}

}  // namespace plab
