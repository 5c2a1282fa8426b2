// Cylinder set algebra, covers, joins, generated partitions and the
// exact cover combinatorics.

#include "pressurelab/cover.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace plab {

namespace {

void check_resolution(int r) {
  if (r < 0) throw std::invalid_argument("CylSet: negative resolution");
}

}  // namespace

CylSet::CylSet(const Subshift& S, int resolution, std::vector<Word> words)
    : resolution_(resolution), words_(std::move(words)) {
  check_resolution(resolution_);
  for (const Word& w : words_) {
    if (static_cast<int>(w.size()) != resolution_)
      throw std::invalid_argument("CylSet: word length differs from resolution");
    if (!S.is_admissible(w)) throw std::invalid_argument("CylSet: inadmissible word");
  }
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  // Lower the resolution while every represented prefix is saturated.
  while (resolution_ > 0) {
    std::vector<Word> prefixes;
    bool reducible = true;
    std::size_t i = 0;
    while (i < words_.size() && reducible) {
      Word p(words_[i].begin(), words_[i].end() - 1);
      std::size_t j = i;
      while (j < words_.size() &&
             std::equal(p.begin(), p.end(), words_[j].begin()))
        ++j;
      // All admissible extensions of p must be present.
      std::size_t expected = p.empty() ? static_cast<std::size_t>(S.alphabet_size())
                                       : S.successors(p.back()).size();
      if (j - i != expected) {
        reducible = false;
      } else {
        prefixes.push_back(std::move(p));
        i = j;
      }
    }
    if (!reducible) break;
    words_ = std::move(prefixes);
    --resolution_;
  }
}

CylSet CylSet::whole_space(const Subshift& S) {
  return CylSet(S, 0, {Word{}});
}

CylSet CylSet::empty_set(const Subshift& S) {
  return CylSet(S, 0, {});
}

CylSet CylSet::cylinder(const Subshift& S, const Word& w) {
  if (!S.is_admissible(w)) throw std::invalid_argument("cylinder: inadmissible word");
  return CylSet(S, static_cast<int>(w.size()), {w});
}

std::vector<Word> CylSet::words_at(const Subshift& S, int r) const {
  if (r < resolution_) throw std::invalid_argument("words_at: resolution below canonical");
  std::vector<Word> out;
  Word cur;
  auto extend = [&](auto&& self, const Word& base) -> void {
    if (static_cast<int>(base.size() + cur.size()) == r) {
      Word full = base;
      full.insert(full.end(), cur.begin(), cur.end());
      out.push_back(std::move(full));
      return;
    }
    Symbol last = cur.empty() ? (base.empty() ? -1 : base.back()) : cur.back();
    if (last < 0) {
      for (Symbol a = 0; a < S.alphabet_size(); ++a) {
        cur.push_back(a);
        self(self, base);
        cur.pop_back();
      }
    } else {
      for (Symbol b : S.successors(last)) {
        cur.push_back(b);
        self(self, base);
        cur.pop_back();
      }
    }
  };
  for (const Word& w : words_) extend(extend, w);
  std::sort(out.begin(), out.end());
  return out;
}

bool CylSet::contains_cylinder(const Subshift& S, const Word& w) const {
  if (!S.is_admissible(w)) return true;  // empty cylinder
  if (static_cast<int>(w.size()) >= resolution_) {
    Word p(w.begin(), w.begin() + resolution_);
    return std::binary_search(words_.begin(), words_.end(), p);
  }
  // Every admissible extension to the canonical resolution must belong.
  Word cur = w;
  auto rec = [&](auto&& self) -> bool {
    if (static_cast<int>(cur.size()) == resolution_)
      return std::binary_search(words_.begin(), words_.end(), cur);
    Symbol last = cur.empty() ? -1 : cur.back();
    if (last < 0) {
      for (Symbol a = 0; a < S.alphabet_size(); ++a) {
        cur.push_back(a);
        bool ok = self(self);
        cur.pop_back();
        if (!ok) return false;
      }
    } else {
      for (Symbol b : S.successors(last)) {
        cur.push_back(b);
        bool ok = self(self);
        cur.pop_back();
        if (!ok) return false;
      }
    }
    return true;
  };
  return rec(rec);
}

bool CylSet::contains(const PointRep& x) const {
  Word p = x.prefix(static_cast<std::size_t>(resolution_));
  return std::binary_search(words_.begin(), words_.end(), p);
}

std::string CylSet::str() const {
  if (words_.empty()) return "{}";
  if (is_whole_space()) return "X";
  std::string s = "[";
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i) s += "|";
    s += word_to_string(words_[i]);
  }
  s += "]";
  return s;
}

namespace {

std::vector<Word> merged_union(const std::vector<Word>& a, const std::vector<Word>& b) {
  std::vector<Word> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

CylSet set_union(const Subshift& S, const CylSet& a, const CylSet& b) {
  int r = std::max(a.resolution(), b.resolution());
  return CylSet(S, r, merged_union(a.words_at(S, r), b.words_at(S, r)));
}

CylSet set_intersect(const Subshift& S, const CylSet& a, const CylSet& b) {
  int r = std::max(a.resolution(), b.resolution());
  std::vector<Word> wa = a.words_at(S, r), wb = b.words_at(S, r), out;
  std::set_intersection(wa.begin(), wa.end(), wb.begin(), wb.end(), std::back_inserter(out));
  return CylSet(S, r, std::move(out));
}

CylSet set_complement(const Subshift& S, const CylSet& a) {
  int r = a.resolution();
  std::vector<Word> all = enumerate_words(S, r), out;
  std::set_difference(all.begin(), all.end(), a.words().begin(), a.words().end(),
                      std::back_inserter(out));
  return CylSet(S, r, std::move(out));
}

CylSet set_difference(const Subshift& S, const CylSet& a, const CylSet& b) {
  int r = std::max(a.resolution(), b.resolution());
  std::vector<Word> wa = a.words_at(S, r), wb = b.words_at(S, r), out;
  std::set_difference(wa.begin(), wa.end(), wb.begin(), wb.end(), std::back_inserter(out));
  return CylSet(S, r, std::move(out));
}

bool is_subset(const Subshift& S, const CylSet& a, const CylSet& b) {
  int r = std::max(a.resolution(), b.resolution());
  std::vector<Word> wa = a.words_at(S, r), wb = b.words_at(S, r);
  return std::includes(wb.begin(), wb.end(), wa.begin(), wa.end());
}

CylSet shift_preimage(const Subshift& S, const CylSet& a) {
  if (a.resolution() == 0) return a;  // X or the empty set
  std::vector<Word> out;
  for (Symbol s = 0; s < S.alphabet_size(); ++s)
    for (const Word& w : a.words()) {
      if (!S.allows(s, w.front())) continue;
      Word v;
      v.reserve(w.size() + 1);
      v.push_back(s);
      v.insert(v.end(), w.begin(), w.end());
      out.push_back(std::move(v));
    }
  return CylSet(S, a.resolution() + 1, std::move(out));
}

void validate_cover(const Subshift& S, const Cover& U) {
  if (U.elements.empty()) throw std::invalid_argument("cover: no elements");
  CylSet acc = CylSet::empty_set(S);
  for (const CylSet& e : U.elements) {
    if (e.is_empty()) throw std::invalid_argument("cover: empty element");
    acc = set_union(S, acc, e);
  }
  if (!acc.is_whole_space()) throw std::invalid_argument("cover: union is not the whole space");
}

void validate_partition(const Subshift& S, const Partition& P) {
  validate_cover(S, P.as_cover());
  for (std::size_t i = 0; i < P.classes.size(); ++i)
    for (std::size_t j = i + 1; j < P.classes.size(); ++j)
      if (!set_intersect(S, P.classes[i], P.classes[j]).is_empty())
        throw std::invalid_argument("partition: classes overlap");
}

int cover_resolution(const Cover& U) {
  int r = 0;
  for (const CylSet& e : U.elements) r = std::max(r, e.resolution());
  return r;
}

bool is_finer(const Subshift& S, const Cover& U, const Cover& V) {
  for (const CylSet& u : U.elements) {
    bool inside = false;
    for (const CylSet& v : V.elements)
      if (is_subset(S, u, v)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

Cover join(const Subshift& S, const Cover& U, const Cover& V) {
  Cover out;
  for (const CylSet& u : U.elements)
    for (const CylSet& v : V.elements) {
      CylSet w = set_intersect(S, u, v);
      if (!w.is_empty()) out.elements.push_back(std::move(w));
    }
  return out;
}

JoinedCover iterated_join(const Subshift& S, const Cover& U, int n) {
  if (n < 1) throw std::invalid_argument("iterated_join: n must be >= 1");
  JoinedCover out;
  out.base_size = static_cast<int>(U.elements.size());
  out.steps = n;
  out.elements = U.elements;
  out.choices.resize(U.elements.size());
  for (std::size_t i = 0; i < U.elements.size(); ++i)
    out.choices[i] = {static_cast<int>(i)};
  std::vector<CylSet> pre = U.elements;  // T^{-t} images of the base elements
  for (int t = 1; t < n; ++t) {
    for (CylSet& c : pre) c = shift_preimage(S, c);
    // Materialize each preimage word list once per level; an element then
    // only checks its own handful of extensions against them.
    int r = 0;
    for (const CylSet& c : pre) r = std::max(r, c.resolution());
    for (const CylSet& e : out.elements) r = std::max(r, e.resolution());
    std::vector<std::vector<Word>> pre_words(pre.size());
    for (std::size_t j = 0; j < pre.size(); ++j) pre_words[j] = pre[j].words_at(S, r);
    std::vector<CylSet> elems;
    std::vector<std::vector<int>> choices;
    for (std::size_t i = 0; i < out.elements.size(); ++i) {
      const std::vector<Word> wa = out.elements[i].words_at(S, r);
      for (std::size_t j = 0; j < pre.size(); ++j) {
        std::vector<Word> keep;
        for (const Word& w : wa)
          if (std::binary_search(pre_words[j].begin(), pre_words[j].end(), w))
            keep.push_back(w);
        if (keep.empty()) continue;
        elems.push_back(CylSet(S, r, std::move(keep)));
        std::vector<int> c = out.choices[i];
        c.push_back(static_cast<int>(j));
        choices.push_back(std::move(c));
      }
    }
    out.elements = std::move(elems);
    out.choices = std::move(choices);
  }
  return out;
}

GeneratedPartition generated_partition(const Subshift& S, const std::vector<CylSet>& family) {
  if (family.empty()) throw std::invalid_argument("generated_partition: empty family");
  int r = 0;
  for (const CylSet& e : family) r = std::max(r, e.resolution());
  std::vector<std::vector<Word>> expanded;
  expanded.reserve(family.size());
  for (const CylSet& e : family) expanded.push_back(e.words_at(S, r));
  std::map<std::vector<bool>, std::vector<Word>> by_pattern;
  for (Word& w : enumerate_words(S, r)) {
    std::vector<bool> pat(family.size());
    for (std::size_t i = 0; i < family.size(); ++i)
      pat[i] = std::binary_search(expanded[i].begin(), expanded[i].end(), w);
    by_pattern[pat].push_back(std::move(w));
  }
  std::vector<std::pair<CylSet, std::vector<int>>> atoms;
  for (auto& [pat, words] : by_pattern) {
    std::vector<int> homes;
    for (std::size_t i = 0; i < pat.size(); ++i)
      if (pat[i]) homes.push_back(static_cast<int>(i));
    atoms.emplace_back(CylSet(S, r, std::move(words)), std::move(homes));
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  GeneratedPartition out;
  for (auto& [cs, homes] : atoms) {
    out.partition.classes.push_back(std::move(cs));
    out.homes.push_back(std::move(homes));
  }
  return out;
}

std::uint64_t enumerate_assignments(
    const Subshift& S, const std::vector<CylSet>& family,
    const std::function<void(const Partition&, const std::vector<int>&)>& fn) {
  GeneratedPartition gp = generated_partition(S, family);
  const std::size_t k = gp.partition.classes.size();
  for (const auto& homes : gp.homes)
    if (homes.empty())
      throw std::invalid_argument("enumerate_assignments: family does not cover the space");
  std::vector<std::size_t> idx(k, 0);
  std::vector<int> assign(k);
  std::uint64_t visited = 0;
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) assign[i] = gp.homes[i][idx[i]];
    // Merge atoms sharing an assigned element.
    std::map<int, std::vector<Word>> classes;
    int r = 0;
    for (const CylSet& a : gp.partition.classes) r = std::max(r, a.resolution());
    for (std::size_t i = 0; i < k; ++i) {
      auto w = gp.partition.classes[i].words_at(S, r);
      auto& dst = classes[assign[i]];
      dst.insert(dst.end(), w.begin(), w.end());
    }
    Partition P;
    for (auto& [elem, words] : classes)
      P.classes.push_back(CylSet(S, r, std::move(words)));
    fn(P, assign);
    ++visited;
    std::size_t pos = 0;
    while (pos < k && ++idx[pos] == gp.homes[pos].size()) idx[pos++] = 0;
    if (pos == k) break;
  }
  return visited;
}

namespace {

using Bits = std::vector<std::uint64_t>;

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= (std::uint64_t{1} << (i % 64)); }
bool get_bit(const Bits& b, std::size_t i) {
  return (b[i / 64] >> (i % 64)) & 1;
}
std::size_t popcount(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

}  // namespace

int minimal_subcover_count(const Subshift& S, const Cover& U) {
  validate_cover(S, U);
  GeneratedPartition gp = generated_partition(S, U.elements);
  const std::size_t natoms = gp.partition.classes.size();
  const std::size_t nelem = U.elements.size();
  // Pairwise disjoint elements: every one is needed.
  bool all_single = true;
  for (const auto& homes : gp.homes)
    if (homes.size() != 1) {
      all_single = false;
      break;
    }
  if (all_single) return static_cast<int>(nelem);
  std::vector<Bits> covers(nelem, make_bits(natoms));
  for (std::size_t a = 0; a < natoms; ++a)
    for (int e : gp.homes[a]) set_bit(covers[static_cast<std::size_t>(e)], a);
  // Drop duplicated and dominated elements.
  std::vector<std::size_t> keep;
  for (std::size_t e = 0; e < nelem; ++e) {
    bool dominated = false;
    for (std::size_t f = 0; f < nelem && !dominated; ++f) {
      if (f == e) continue;
      bool sub = true, eq = true;
      for (std::size_t blk = 0; blk < covers[e].size(); ++blk) {
        if (covers[e][blk] & ~covers[f][blk]) sub = false;
        if (covers[e][blk] != covers[f][blk]) eq = false;
      }
      if (sub && (!eq || f < e)) dominated = true;
    }
    if (!dominated) keep.push_back(e);
  }
  std::vector<Bits> cand;
  for (auto e : keep) cand.push_back(covers[e]);
  std::size_t max_size = 1;
  for (const auto& c : cand) max_size = std::max(max_size, popcount(c));

  int best = static_cast<int>(cand.size());
  Bits covered = make_bits(natoms);
  auto uncovered_atom = [&](const Bits& cov) -> std::ptrdiff_t {
    std::ptrdiff_t pick = -1;
    std::size_t fewest = SIZE_MAX;
    for (std::size_t a = 0; a < natoms; ++a) {
      if (get_bit(cov, a)) continue;
      std::size_t cnt = 0;
      for (const auto& c : cand)
        if (get_bit(c, a)) ++cnt;
      if (cnt < fewest) {
        fewest = cnt;
        pick = static_cast<std::ptrdiff_t>(a);
      }
    }
    return pick;
  };
  auto rec = [&](auto&& self, Bits cov, int chosen) -> void {
    std::size_t left = natoms - popcount(cov);
    if (left == 0) {
      best = std::min(best, chosen);
      return;
    }
    int lower = chosen + static_cast<int>((left + max_size - 1) / max_size);
    if (lower >= best) return;
    std::ptrdiff_t a = uncovered_atom(cov);
    for (std::size_t e = 0; e < cand.size(); ++e) {
      if (!get_bit(cand[e], static_cast<std::size_t>(a))) continue;
      Bits nxt = cov;
      for (std::size_t blk = 0; blk < nxt.size(); ++blk) nxt[blk] |= cand[e][blk];
      self(self, std::move(nxt), chosen + 1);
    }
  };
  rec(rec, covered, 0);
  return best;
}

namespace {

// Longest common prefix of two equal-length words.
int lcp_length(const Word& a, const Word& b) {
  int k = 0;
  while (k < static_cast<int>(a.size()) && a[k] == b[k]) ++k;
  return k;
}

// Level of the first branch inside a single cylinder, -1 if singleton.
int single_cylinder_branch_level(const Subshift& S, const Word& w) {
  int j;
  Symbol cur;
  if (w.empty()) {
    if (S.alphabet_size() >= 2) return 0;
    cur = 0;
    j = 1;
  } else {
    cur = w.back();
    j = static_cast<int>(w.size());
  }
  std::vector<bool> seen(S.alphabet_size(), false);
  for (;;) {
    const auto& nx = S.successors(cur);
    if (nx.size() >= 2) return j;
    if (seen[cur]) return -1;
    seen[cur] = true;
    cur = nx.front();
    ++j;
  }
}

}  // namespace

Rational set_diameter(const Subshift& S, const CylSet& a) {
  const auto& w = a.words();
  if (w.empty()) return Rational(0);
  if (w.size() == 1) {
    int lvl = single_cylinder_branch_level(S, w.front());
    return lvl < 0 ? Rational(0) : pow2(-lvl);
  }
  int min_lcp = a.resolution();
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    min_lcp = std::min(min_lcp, lcp_length(w[i], w[i + 1]));
  return pow2(-min_lcp);
}

CoverGeometry cover_geometry(const Subshift& S, const Cover& U) {
  validate_cover(S, U);
  CoverGeometry g;
  g.diameter = Rational(0);
  g.diameter_level = -1;
  for (const CylSet& e : U.elements) {
    Rational d = set_diameter(S, e);
    if (d > g.diameter) g.diameter = d;
  }
  if (g.diameter > 0) {
    // diameter == 2^{-level}
    Rational d = g.diameter;
    int lvl = 0;
    while (d < 1) {
      d *= 2;
      ++lvl;
    }
    g.diameter_level = lvl;
  }
  int rmax = cover_resolution(U);
  for (int k = 0; k <= rmax; ++k) {
    bool ok = true;
    for (const Word& w : enumerate_words(S, k)) {
      bool inside = false;
      for (const CylSet& e : U.elements)
        if (e.contains_cylinder(S, w)) {
          inside = true;
          break;
        }
      if (!inside) {
        ok = false;
        break;
      }
    }
    if (ok) {
      g.lebesgue_level = k;
      g.lebesgue = pow2(-k);
      return g;
    }
  }
  throw std::logic_error("cover_geometry: no Lebesgue level found for a valid cover");
}

}  // namespace plab
