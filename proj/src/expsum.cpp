#include "pressurelab/expsum.hpp"

#include <mpfr.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace plab {

ExpSum ExpSum::exp_of(const Rational& exponent, const Rational& coeff) {
  ExpSum s;
  s.add_term(exponent, coeff);
  return s;
}

void ExpSum::add_term(const Rational& exponent, const Rational& coeff) {
  if (coeff == 0) return;
  // Canonicalize both entries: the two-argument mpq constructor does not,
  // and map equality needs one representation per value.
  Rational q = exponent;
  q.canonicalize();
  Rational c = coeff;
  c.canonicalize();
  auto it = terms_.find(q);
  if (it == terms_.end()) {
    if (c < 0) throw std::logic_error("ExpSum: negative coefficient");
    terms_.emplace(std::move(q), std::move(c));
    return;
  }
  it->second += c;
  if (it->second == 0) {
    terms_.erase(it);
  } else if (it->second < 0) {
    throw std::logic_error("ExpSum: coefficient went negative");
  }
}

void ExpSum::add(const ExpSum& other) {
  for (const auto& [q, c] : other.terms_) add_term(q, c);
}

void ExpSum::scale(const Rational& c) {
  if (c <= 0) throw std::logic_error("ExpSum: scale by non-positive constant");
  Rational f = c;
  f.canonicalize();
  for (auto& [q, coef] : terms_) coef *= f;
}

void ExpSum::shift_exponent(const Rational& q) {
  if (q == 0) return;
  Rational d = q;
  d.canonicalize();
  std::map<Rational, Rational> shifted;
  for (const auto& [e, c] : terms_) shifted.emplace(e + d, c);
  terms_ = std::move(shifted);
}

namespace {

// Directed-rounding evaluation of a positive sum.  With RNDD every
// intermediate rounds down, giving a true lower bound; RNDU an upper one.
void eval_directed(const std::map<Rational, Rational>& terms, mpfr_t out,
                   mpfr_prec_t prec, mpfr_rnd_t rnd) {
  mpfr_set_prec(out, prec);
  mpfr_set_zero(out, 1);
  mpfr_t q, e, t;
  mpfr_init2(q, prec);
  mpfr_init2(e, prec);
  mpfr_init2(t, prec);
  for (const auto& [expo, coef] : terms) {
    mpfr_set_q(q, expo.get_mpq_t(), rnd);
    mpfr_exp(e, q, rnd);
    mpfr_set_q(t, coef.get_mpq_t(), rnd);
    mpfr_mul(t, t, e, rnd);
    mpfr_add(out, out, t, rnd);
  }
  mpfr_clear(q);
  mpfr_clear(e);
  mpfr_clear(t);
}

}  // namespace

int ExpSum::compare(const ExpSum& other) const {
  if (terms_ == other.terms_) return 0;
  if (terms_.empty()) return -1;
  if (other.terms_.empty()) return 1;

  mpfr_t alo, ahi, blo, bhi;
  mpfr_inits2(64, alo, ahi, blo, bhi, static_cast<mpfr_ptr>(nullptr));
  int result = 0;
  bool decided = false;
  for (mpfr_prec_t prec = 128; prec <= (1 << 15); prec *= 2) {
    eval_directed(terms_, alo, prec, MPFR_RNDD);
    eval_directed(terms_, ahi, prec, MPFR_RNDU);
    eval_directed(other.terms_, blo, prec, MPFR_RNDD);
    eval_directed(other.terms_, bhi, prec, MPFR_RNDU);
    if (mpfr_cmp(ahi, blo) < 0) {
      result = -1;
      decided = true;
      break;
    }
    if (mpfr_cmp(alo, bhi) > 0) {
      result = 1;
      decided = true;
      break;
    }
  }
  mpfr_clears(alo, ahi, blo, bhi, static_cast<mpfr_ptr>(nullptr));
  if (!decided)
    throw std::runtime_error("ExpSum::compare: sign not resolved at max precision");
  return result;
}

double ExpSum::log_value() const {
  if (terms_.empty()) return -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(terms_.size());
  for (const auto& [q, c] : terms_)
    logs.push_back(to_double(q) + std::log(to_double(c)));
  return log_sum_exp(logs);
}

std::string ExpSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // print largest exponent first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << rational_to_string(it->second) << "*e^(" << rational_to_string(it->first) << ")";
  }
  return os.str();
}

}  // namespace plab
