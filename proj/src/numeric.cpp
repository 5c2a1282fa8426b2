#include "pressurelab/numeric.hpp"

#include <cctype>

namespace plab {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  // a/b form is handled by GMP directly
  if (s.find('/') != std::string::npos) {
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
      throw std::invalid_argument("bad rational literal: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
  }

  // split off exponent
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(s.substr(epos + 1));
    s = s.substr(0, epos);
  }
  // split off fraction digits
  std::string digits = s;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    digits = s.substr(0, dot) + s.substr(dot + 1);
    exp10 -= static_cast<long>(s.size() - dot - 1);
  }
  if (digits.empty() || digits == "-" || digits == "+")
    throw std::invalid_argument("bad rational literal: " + text);
  mpz_class mant;
  if (mpz_set_str(mant.get_mpz_t(), digits.c_str(), 10) != 0)
    throw std::invalid_argument("bad rational literal: " + text);
  Rational q(mant);
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0)
    q *= Rational(p10);
  else
    q /= Rational(p10);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  return q.get_str();
}

}  // namespace plab
