// Sliding block codes: validation, application, pullbacks,
// pushforwards and the factor pressure identity audit.

#include "pressurelab/factor.hpp"

#include <algorithm>
#include <stdexcept>

namespace plab {

SlidingBlockCode::SlidingBlockCode(Subshift source, Subshift target, int window,
                                   std::map<Word, Symbol> block_map)
    : source_(std::move(source)), target_(std::move(target)), window_(window),
      block_map_(std::move(block_map)) {
  if (window_ < 1) throw std::invalid_argument("SlidingBlockCode: window must be >= 1");
  for (const Word& w : enumerate_words(source_, window_)) {
    auto it = block_map_.find(w);
    if (it == block_map_.end())
      throw std::invalid_argument("SlidingBlockCode: block map misses the word " +
                                  word_to_string(w));
    if (it->second < 0 || it->second >= target_.alphabet_size())
      throw std::invalid_argument("SlidingBlockCode: image symbol out of range");
  }
  // Consecutive windows must map to an admissible target transition;
  // induction then makes every image word admissible.
  for (const Word& u : enumerate_words(source_, window_ + 1)) {
    Word a(u.begin(), u.end() - 1), b(u.begin() + 1, u.end());
    if (!target_.allows(block_map_.at(a), block_map_.at(b)))
      throw std::invalid_argument(
          "SlidingBlockCode: image of a transition is not admissible");
  }
}

SlidingBlockCode SlidingBlockCode::identity(const Subshift& S) {
  std::map<Word, Symbol> bm;
  for (Symbol a = 0; a < S.alphabet_size(); ++a) bm[{a}] = a;
  return SlidingBlockCode(S, S, 1, std::move(bm));
}

SlidingBlockCode SlidingBlockCode::to_higher_block(const Subshift& S, int k) {
  HigherBlock hb = higher_block(S, k);
  std::map<Word, Symbol> bm;
  for (std::size_t i = 0; i < hb.block_words.size(); ++i)
    bm[hb.block_words[i]] = static_cast<Symbol>(i);
  return SlidingBlockCode(S, hb.recoded, k, std::move(bm));
}

SlidingBlockCode SlidingBlockCode::from_higher_block(const Subshift& S, int k) {
  HigherBlock hb = higher_block(S, k);
  std::map<Word, Symbol> bm;
  for (std::size_t i = 0; i < hb.block_words.size(); ++i)
    bm[{static_cast<Symbol>(i)}] = hb.block_words[i].front();
  return SlidingBlockCode(hb.recoded, S, 1, std::move(bm));
}

Symbol SlidingBlockCode::map_symbol(const Word& w) const {
  auto it = block_map_.find(w);
  if (it == block_map_.end())
    throw std::invalid_argument("SlidingBlockCode: word is not an admissible window");
  return it->second;
}

Word SlidingBlockCode::apply_word(const Word& u) const {
  if (static_cast<int>(u.size()) < window_)
    throw std::invalid_argument("SlidingBlockCode: word shorter than the window");
  Word out(u.size() - window_ + 1);
  Word view(window_);
  for (std::size_t i = 0; i + window_ <= u.size(); ++i) {
    std::copy(u.begin() + i, u.begin() + i + window_, view.begin());
    out[i] = map_symbol(view);
  }
  return out;
}

PointRep SlidingBlockCode::apply(const PointRep& x) const {
  if (!is_valid_point(source_, x))
    throw std::invalid_argument("SlidingBlockCode: point is not in the source");
  const int p = static_cast<int>(x.preperiod().size());
  const int c = static_cast<int>(x.cycle().size());
  // Windows starting at positions >= p repeat with the cycle length, so
  // the image is eventually periodic with the same (p, c) shape.
  Word buf = x.prefix(static_cast<std::size_t>(p + c + window_ - 1));
  Word img = apply_word(buf);  // length p + c
  return PointRep(Word(img.begin(), img.begin() + p), Word(img.begin() + p, img.end()));
}

bool SlidingBlockCode::is_surjective_to_length(int max_len) const {
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> images;
    for (const Word& u : enumerate_words(source_, len + window_ - 1))
      images.push_back(apply_word(u));
    std::sort(images.begin(), images.end());
    for (const Word& v : enumerate_words(target_, len))
      if (!std::binary_search(images.begin(), images.end(), v)) return false;
  }
  return true;
}

CylSet pullback_set(const SlidingBlockCode& pi, const CylSet& a) {
  if (a.is_empty()) return CylSet::empty_set(pi.source());
  if (a.is_whole_space()) return CylSet::whole_space(pi.source());
  const int r = a.resolution();
  std::vector<Word> words;
  for (const Word& u : enumerate_words(pi.source(), r + pi.window() - 1)) {
    Word img = pi.apply_word(u);
    if (std::binary_search(a.words().begin(), a.words().end(), img)) words.push_back(u);
  }
  return CylSet(pi.source(), r + pi.window() - 1, std::move(words));
}

Cover pullback_cover(const SlidingBlockCode& pi, const Cover& U) {
  Cover out;
  for (const CylSet& e : U.elements) {
    CylSet pre = pullback_set(pi, e);
    if (!pre.is_empty()) out.elements.push_back(pre);
  }
  return out;
}

EnergyFunctional pullback_energy(const SlidingBlockCode& pi, const EnergyFunctional& E) {
  std::vector<EnergyFunctional::Term> terms;
  for (const EnergyFunctional::Term& t : E.terms()) {
    const int w = t.inner.window() + pi.window() - 1;
    std::vector<Rational> values;
    for (const Word& u : enumerate_words(pi.source(), w))
      values.push_back(t.inner.value(pi.apply_word(u)));
    terms.push_back(
        EnergyFunctional::Term{t.outer, CylinderFunction(pi.source(), w, std::move(values))});
  }
  return EnergyFunctional(std::move(terms));
}

AtomicMeasure pushforward_measure(const SlidingBlockCode& pi, const AtomicMeasure& mu) {
  std::vector<std::pair<PointRep, Rational>> atoms;
  for (const auto& [x, mass] : mu.atoms()) atoms.emplace_back(pi.apply(x), mass);
  return AtomicMeasure(pi.target(), std::move(atoms));
}

namespace {

// Does the k-block chain built from the marginals reproduce every
// marginal up to the table depth?
bool fits_marginals(const Subshift& target, const std::map<Word, Rational>& marg, int depth,
                    int k) {
  auto mass_of = [&](const Word& v) {
    auto it = marg.find(v);
    return it == marg.end() ? Rational(0) : it->second;
  };
  for (int len = k + 1; len <= depth; ++len) {
    for (const Word& v : enumerate_words(target, len)) {
      // Conditional factorization: mass(v) * mass(middle blocks) =
      // product of (k+1)-block masses, checked without divisions.
      Rational lhs = mass_of(v);
      Rational prod(1), denom(1);
      for (int i = 0; i + k + 1 <= len; ++i)
        prod *= mass_of(Word(v.begin() + i, v.begin() + i + k + 1));
      for (int i = 1; i + k <= len - 1; ++i)
        denom *= mass_of(Word(v.begin() + i, v.begin() + i + k));
      if (lhs * denom != prod) return false;
    }
  }
  return true;
}

}  // namespace

PushforwardMeasure pushforward_measure(const SlidingBlockCode& pi, const MarkovMeasure& mu,
                                       int depth) {
  if (depth < 2) throw std::invalid_argument("pushforward_measure: depth must be >= 2");
  PushforwardMeasure out;
  out.depth = depth;
  const Subshift& Y = pi.source();
  const Subshift& X = pi.target();
  for (int len = 1; len <= depth; ++len) {
    std::map<Word, Rational> level;
    for (const Word& u : enumerate_words(Y, len + pi.window() - 1))
      level[pi.apply_word(u)] += mu.word_mass(u);
    for (auto& [v, mass] : level)
      if (mass != 0) out.marginals.emplace(v, mass);
  }

  for (int k = 1; k < depth; ++k) {
    if (!fits_marginals(X, out.marginals, depth, k)) continue;
    out.block_level = k;
    out.lossy = false;
    auto mass_of = [&](const Word& v) {
      auto it = out.marginals.find(v);
      return it == out.marginals.end() ? Rational(0) : it->second;
    };
    if (k == 1) {
      std::vector<std::vector<Rational>> rows(
          X.alphabet_size(), std::vector<Rational>(X.alphabet_size(), Rational(0)));
      std::vector<Rational> stat(X.alphabet_size());
      for (Symbol a = 0; a < X.alphabet_size(); ++a) {
        stat[a] = mass_of({a});
        if (stat[a] != 0) {
          for (Symbol b : X.successors(a)) rows[a][b] = mass_of({a, b}) / stat[a];
        } else {
          for (Symbol b : X.successors(a))
            rows[a][b] = Rational(1, static_cast<long>(X.successors(a).size()));
        }
      }
      out.markov = MarkovMeasure(X, std::move(rows), std::move(stat));
    } else {
      HigherBlock hb = higher_block(X, k);
      const int ns = static_cast<int>(hb.block_words.size());
      std::vector<std::vector<Rational>> rows(ns, std::vector<Rational>(ns, Rational(0)));
      std::vector<Rational> stat(ns);
      for (int i = 0; i < ns; ++i) stat[i] = mass_of(hb.block_words[i]);
      for (int i = 0; i < ns; ++i) {
        for (Symbol j : hb.recoded.successors(i)) {
          Word ext = hb.block_words[i];
          ext.push_back(hb.block_words[j].back());
          if (stat[i] != 0)
            rows[i][j] = mass_of(ext) / stat[i];
          else
            rows[i][j] = Rational(1, static_cast<long>(hb.recoded.successors(i).size()));
        }
      }
      out.markov = MarkovMeasure(hb.recoded, std::move(rows), std::move(stat));
      out.block_system = std::move(hb);
    }
    break;
  }
  return out;
}

FactorPressureAudit factor_pressure_identity(const SlidingBlockCode& pi, const Cover& U,
                                             const EnergyFunctional& E, int n_lo, int n_hi,
                                             Precision prec, const SearchCaps& caps,
                                             int surjectivity_check_length) {
  if (n_lo < 1 || n_hi < n_lo)
    throw std::invalid_argument("factor_pressure_identity: need 1 <= n_lo <= n_hi");
  validate_cover(pi.target(), U);
  FactorPressureAudit audit;
  audit.surjectivity_checked_length = surjectivity_check_length;
  audit.surjective_to_length = pi.is_surjective_to_length(surjectivity_check_length);

  Cover pulled = pullback_cover(pi, U);
  EnergyFunctional pulled_E = pullback_energy(pi, E);
  for (int n = n_lo; n <= n_hi; ++n) {
    FactorPressureAudit::Row row;
    row.n = n;
    row.source_value = p1(pi.source(), pulled, pulled_E, n, prec, caps);
    row.target_value = p1(pi.target(), U, E, n, prec, caps);
    if (row.source_value.exact && row.target_value.exact)
      row.equal = row.source_value.exact->compare(*row.target_value.exact) == 0;
    else
      row.equal = std::abs(row.source_value.log_value - row.target_value.log_value) <= 1e-9;
    if (!row.equal && !audit.first_failure) audit.first_failure = n;
    audit.all_equal = audit.all_equal && row.equal;
    audit.rows.push_back(std::move(row));
  }
  return audit;
}

}  // namespace plab
