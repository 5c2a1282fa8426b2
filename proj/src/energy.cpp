// Energy functional implementation.

#include "pressurelab/energy.hpp"

#include <algorithm>
#include <stdexcept>

namespace plab {

CylinderFunction::CylinderFunction(const Subshift& S, int window,
                                   std::vector<Rational> values)
    : window_(window), values_(std::move(values)) {
  if (window_ < 1) throw std::invalid_argument("CylinderFunction: window must be >= 1");
  word_list_ = enumerate_words(S, window_);
  if (word_list_.size() != values_.size())
    throw std::invalid_argument("CylinderFunction: value count differs from word count");
  // The two-argument mpq constructor skips canonicalization; normalize
  // here so downstream exact comparisons see one representation per value.
  for (Rational& v : values_) v.canonicalize();
}

CylinderFunction CylinderFunction::indicator(const Subshift& S, const CylSet& a) {
  int w = std::max(1, a.resolution());
  std::vector<Word> words = enumerate_words(S, w);
  std::vector<Rational> vals;
  vals.reserve(words.size());
  for (const Word& u : words) vals.emplace_back(a.contains_cylinder(S, u) ? 1 : 0);
  return CylinderFunction(S, w, std::move(vals));
}

CylinderFunction CylinderFunction::constant(const Subshift& S, const Rational& c) {
  return CylinderFunction(S, 1, std::vector<Rational>(static_cast<std::size_t>(S.alphabet_size()), c));
}

int CylinderFunction::index_of(const Word& w) const {
  if (static_cast<int>(w.size()) < window_)
    throw std::invalid_argument("CylinderFunction: word shorter than window");
  Word p(w.begin(), w.begin() + window_);
  auto it = std::lower_bound(word_list_.begin(), word_list_.end(), p);
  if (it == word_list_.end() || *it != p)
    throw std::invalid_argument("CylinderFunction: inadmissible word");
  return static_cast<int>(it - word_list_.begin());
}

const Rational& CylinderFunction::value(const Word& w) const {
  return values_[static_cast<std::size_t>(index_of(w))];
}

Rational CylinderFunction::value_at(const PointRep& x) const {
  return value(x.prefix(static_cast<std::size_t>(window_)));
}

Rational CylinderFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

Rational CylinderFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

Rational CylinderFunction::lipschitz_bound() const {
  return (max_value() - min_value()) * pow2(window_ - 1);
}

Rational CylinderFunction::integral(const Subshift& S, const AtomicMeasure& mu) const {
  (void)S;
  Rational acc(0);
  for (const auto& [x, w] : mu.atoms()) acc += w * value_at(x);
  return acc;
}

Rational CylinderFunction::integral(const Subshift& S, const MarkovMeasure& mu) const {
  (void)S;
  Rational acc(0);
  for (std::size_t i = 0; i < word_list_.size(); ++i)
    acc += mu.word_mass(word_list_[i]) * values_[i];
  return acc;
}

Rational Polynomial::operator()(const Rational& s) const {
  Rational acc(0);
  for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * s + coeff[k];
  return acc;
}

Rational Polynomial::derivative_bound(const Rational& M) const {
  Rational acc(0);
  Rational p(1);  // M^{k-1}
  for (std::size_t k = 1; k < coeff.size(); ++k) {
    acc += abs(coeff[k]) * static_cast<long>(k) * p;
    p *= M;
  }
  return acc;
}

bool Polynomial::is_identity() const {
  return coeff.size() == 2 && coeff[0] == 0 && coeff[1] == 1;
}

EnergyFunctional::EnergyFunctional(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("EnergyFunctional: no terms");
  for (Term& t : terms_)
    for (Rational& c : t.outer.coeff) c.canonicalize();
}

EnergyFunctional EnergyFunctional::linear(const Subshift& S, const CylinderFunction& f) {
  (void)S;
  return EnergyFunctional({Term{Polynomial{{Rational(0), Rational(1)}}, f}});
}

EnergyFunctional EnergyFunctional::zero(const Subshift& S) {
  return EnergyFunctional(
      {Term{Polynomial{{Rational(0)}}, CylinderFunction::constant(S, Rational(0))}});
}

int EnergyFunctional::window() const {
  int w = 1;
  for (const Term& t : terms_) w = std::max(w, t.inner.window());
  return w;
}

Rational EnergyFunctional::eval(const Subshift& S, const AtomicMeasure& mu) const {
  Rational acc(0);
  for (const Term& t : terms_) acc += t.outer(t.inner.integral(S, mu));
  return acc;
}

Rational EnergyFunctional::eval(const Subshift& S, const MarkovMeasure& mu) const {
  Rational acc(0);
  for (const Term& t : terms_) acc += t.outer(t.inner.integral(S, mu));
  return acc;
}

Rational EnergyFunctional::orbit_weight(const Word& w, int n) const {
  if (n < 1) throw std::invalid_argument("orbit_weight: n must be >= 1");
  if (static_cast<int>(w.size()) < n + window() - 1)
    throw std::invalid_argument("orbit_weight: word too short for the window");
  Rational acc(0);
  for (const Term& t : terms_) {
    Rational sum(0);
    Word view(t.inner.window());
    for (int i = 0; i < n; ++i) {
      std::copy(w.begin() + i, w.begin() + i + t.inner.window(), view.begin());
      sum += t.inner.value(view);
    }
    acc += t.outer(sum / n);
  }
  return acc * n;
}

Rational EnergyFunctional::modulus_coefficient() const {
  Rational acc(0);
  for (const Term& t : terms_) {
    Rational M = std::max(abs(t.inner.min_value()), abs(t.inner.max_value()));
    acc += t.outer.derivative_bound(M) * t.inner.lipschitz_bound();
  }
  return acc;
}

Rational EnergyFunctional::modulus_bound(const Rational& eps) const {
  if (eps < 0) throw std::invalid_argument("modulus_bound: negative scale");
  return modulus_coefficient() * eps;
}

Rational EnergyFunctional::modulus_bound(const Rational& eps, const Rational& lo,
                                         const Rational& hi) const {
  if (eps < 0) throw std::invalid_argument("modulus_bound: negative scale");
  if (lo > hi) throw std::invalid_argument("modulus_bound: empty range");
  Rational M = std::max(abs(lo), abs(hi));
  Rational acc(0);
  for (const Term& t : terms_) {
    if (t.inner.min_value() < lo || t.inner.max_value() > hi)
      throw std::invalid_argument("modulus_bound: range does not contain the term's values");
    acc += t.outer.derivative_bound(M) * t.inner.lipschitz_bound();
  }
  return acc * eps;
}

}  // namespace plab
