// Exact sums of exponentials and the rational parsing / log-domain
// helpers they sit on.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"

using namespace plab;
using plabtest::rat;

TEST_CASE("terms merge by exponent") {
  ExpSum s;
  s.add_term(rat(1), rat(1));
  s.add_term(rat(1), rat(2));
  s.add_term(rat(2), rat(1, 2));
  CHECK(s.term_count() == 2);
  CHECK(s.terms().at(rat(1)) == 3);
  s.add_term(rat(2), rat(-1, 2));  // exact cancellation
  CHECK(s.term_count() == 1);
  ExpSum z;
  CHECK(z.is_zero());
  CHECK(std::isinf(z.log_value()));
}

TEST_CASE("negative coefficients may only cancel") {
  ExpSum s = ExpSum::exp_of(rat(0), rat(1));
  CHECK_THROWS(s.add_term(rat(0), rat(-2)));
  CHECK_THROWS(s.add_term(rat(5), rat(-1)));
}

TEST_CASE("scale and exponent shift") {
  ExpSum s;
  s.add_term(rat(0), rat(1));
  s.add_term(rat(1), rat(2));  // 1 + 2e
  ExpSum t = s;
  t.scale(rat(3));
  ExpSum u;
  u.add_term(rat(0), rat(3));
  u.add_term(rat(1), rat(6));
  CHECK(t == u);

  ExpSum v = s;
  v.shift_exponent(rat(2));  // e^2 + 2e^3
  ExpSum w;
  w.add_term(rat(2), rat(1));
  w.add_term(rat(3), rat(2));
  CHECK(v == w);

  ExpSum sum = s;
  sum.add(v);
  CHECK(sum.term_count() == 4);
}

TEST_CASE("comparison is an order") {
  const ExpSum a = ExpSum::exp_of(rat(0));          // 1
  const ExpSum b = ExpSum::exp_of(rat(1));          // e
  const ExpSum c = ExpSum::exp_of(rat(0), rat(3));  // 3
  CHECK(a.compare(b) == -1);
  CHECK(b.compare(a) == 1);
  CHECK(a.compare(a) == 0);
  CHECK(b.compare(c) == -1);  // e < 3
  CHECK(a < b);
  CHECK(a <= a);
  ExpSum empty;
  CHECK(empty.compare(a) == -1);
  CHECK(empty.compare(empty) == 0);
}

TEST_CASE("comparison separates nearly equal values") {
  // x versus x + 10^{-6} e^{-100}: the gap is around 3.7e-50, far below
  // double resolution, so the comparison has to escalate precision.
  ExpSum x;
  x.add_term(rat(0), rat(1));
  x.add_term(rat(1), rat(1));
  ExpSum y = x;
  y.add_term(rat(-100), rat(1, 1000000));
  CHECK(x.compare(y) == -1);
  CHECK(y.compare(x) == 1);
  CHECK(x.compare(x) == 0);

  // e against a close rational (continued fraction convergent)
  const ExpSum e1 = ExpSum::exp_of(rat(1));
  const ExpSum close_below = ExpSum::exp_of(rat(0), rat(2721, 1001));
  CHECK(close_below < e1);
}

TEST_CASE("log value") {
  ExpSum s;
  s.add_term(rat(3), rat(2));  // 2 e^3
  CHECK(s.log_value() == doctest::Approx(3 + std::log(2.0)).epsilon(1e-12));
  ExpSum big;
  big.add_term(rat(10000), rat(1));
  big.add_term(rat(9999), rat(1));
  CHECK(big.log_value() ==
        doctest::Approx(10000 + std::log1p(std::exp(-1.0))).epsilon(1e-12));
  CHECK_FALSE(ExpSum::exp_of(rat(2)).str().empty());
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-1/2") == rat(-1, 2));
  CHECK(parse_rational("0.25") == rat(1, 4));
  CHECK(parse_rational("1e-3") == rat(1, 1000));
  CHECK(parse_rational("2.5e2") == 250);
  CHECK(parse_rational("-0.125") == rat(-1, 8));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
  for (const Rational& q : {rat(22, 7), rat(-3, 11), rat(0), rat(100)})
    CHECK(parse_rational(rational_to_string(q)) == q);
}

TEST_CASE("log domain helpers") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_add_exp(std::log(2.0), std::log(3.0)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(log_add_exp(ninf, 2.0) == 2.0);
  CHECK(log_add_exp(ninf, ninf) == ninf);
  CHECK(log_sum_exp(std::vector<double>{}) == ninf);
  CHECK(log_sum_exp(std::vector<double>{0.0, 0.0, 0.0}) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(pow2(-3) == rat(1, 8));
  CHECK(pow2(4) == 16);
  CHECK(to_double(rat(1, 3)) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}
