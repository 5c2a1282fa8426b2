// Pressure minimization over refining partitions and subcovers,
// separated and spanning pressures, greedy certificates and the full
// report with its inequality audits.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"

using namespace plab;
using plabtest::assignment_brute;
using plabtest::binomial_expsum;
using plabtest::golden_mean;
using plabtest::one_cylinder_cover;
using plabtest::random_cover;
using plabtest::random_energy;
using plabtest::random_sft;
using plabtest::rat;
using plabtest::fixedpoint_cover;
using plabtest::fixedpoint_energy;
using plabtest::fixedpoint_system;
using plabtest::spanning_separated_naive;
using plabtest::spanning_separated_oracle;
using plabtest::subcover_brute;

namespace {

ExpSum count_times_one(long count) {
  ExpSum s;
  s.add_term(rat(0), rat(count));
  return s;
}

const ExpSum& exact_of(const LogValue& v) {
  REQUIRE(v.exact.has_value());
  return *v.exact;
}

}  // namespace

TEST_CASE("zero energy reduces every variant to minimal subcover counts") {
  const Subshift S = fixedpoint_system();
  const Cover U = fixedpoint_cover(S);
  const EnergyFunctional Z = EnergyFunctional::zero(S);
  for (int n = 1; n <= 3; ++n) {
    const ExpSum expect = count_times_one(1l << n);
    CHECK(exact_of(p1(S, U, Z, n, Precision::Exact)) == expect);
    CHECK(exact_of(p2(S, U, Z, n, Precision::Exact)) == expect);
    CHECK(exact_of(p3(S, U, Z, n, Precision::Exact)) == expect);
    CHECK(exact_of(p4(S, U, Z, n, Precision::Exact)) == expect);
    CHECK(minimal_subcover_count(S, iterated_join(S, U, n).as_cover()) == (1l << n));
  }
  // separated and spanning collapse to word counts
  const Subshift G = golden_mean();
  const EnergyFunctional ZG = EnergyFunctional::zero(G);
  for (int n = 1; n <= 3; ++n)
    for (int m = 0; m <= 2; ++m) {
      const ExpSum expect = count_times_one(static_cast<long>(G.word_count(n + m)));
      CHECK(exact_of(pn_separated(G, ZG, n, m, Precision::Exact)) == expect);
      CHECK(exact_of(qn_spanning(G, ZG, n, m, Precision::Exact)) == expect);
    }
}

TEST_CASE("isolated high energy fixed point closed forms") {
  const Subshift S = fixedpoint_system();
  const Cover U = fixedpoint_cover(S);
  const EnergyFunctional E = fixedpoint_energy(S);
  for (int n = 1; n <= 4; ++n) {
    // every join element is [w] union [2^n]; its sup weight is 10n and
    // all 2^n elements are needed
    ExpSum expect3;
    expect3.add_term(rat(10 * n), rat(1l << n));
    CHECK(exact_of(p3(S, U, E, n, Precision::Exact)) == expect3);

    // the best refining partition gives the fixed point to one element
    ExpSum expect1;
    expect1.add_term(rat(0), rat((1l << n) - 1));
    expect1.add_term(rat(10 * n), rat(1));
    CHECK(exact_of(p1(S, U, E, n, Precision::Exact)) == expect1);

    // inf weights see the weight zero binary part of every element
    const ExpSum expect4 = count_times_one(1l << n);
    CHECK(exact_of(p4(S, U, E, n, Precision::Exact)) == expect4);
    CHECK(exact_of(p2(S, U, E, n, Precision::Exact)) == expect4);

    // admissible words are the binary ones plus the all twos word
    for (int m = 0; m <= 1; ++m) {
      ExpSum span;
      span.add_term(rat(0), rat(1l << (n + m)));
      span.add_term(rat(10 * n), rat(1));
      CHECK(exact_of(pn_separated(S, E, n, m, Precision::Exact)) == span);
      CHECK(exact_of(qn_spanning(S, E, n, m, Precision::Exact)) == span);
    }
  }
}

TEST_CASE("full shift linear energy gives binomial sums") {
  const Subshift S = Subshift::full_shift(2);
  const Cover U = one_cylinder_cover(S);
  const EnergyFunctional E =
      EnergyFunctional::linear(S, CylinderFunction(S, 1, {rat(1), rat(0)}));
  for (int n = 1; n <= 5; ++n) {
    const ExpSum expect = binomial_expsum(n, rat(1), rat(0));
    CHECK(exact_of(p1(S, U, E, n, Precision::Exact)) == expect);
    CHECK(exact_of(p3(S, U, E, n, Precision::Exact)) == expect);
    CHECK(exact_of(pn_separated(S, E, n, 0, Precision::Exact)) == expect);
    CHECK(exact_of(qn_spanning(S, E, n, 0, Precision::Exact)) == expect);
  }
}

TEST_CASE("separated and spanning match the point based oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const Subshift S = random_sft(rng);
    const EnergyFunctional E = random_energy(rng, S);
    const int n = 1 + static_cast<int>(rng() % 3);
    const int m = static_cast<int>(rng() % 3);
    const auto oracle = spanning_separated_oracle(S, E, n, m);
    CHECK(exact_of(pn_separated(S, E, n, m, Precision::Exact)).compare(oracle.separated) == 0);
    CHECK(exact_of(qn_spanning(S, E, n, m, Precision::Exact)).compare(oracle.spanning) == 0);
    // float mode agrees in the log domain
    CHECK(pn_separated(S, E, n, m).log_value ==
          doctest::Approx(oracle.separated.log_value()).epsilon(1e-9));
  }
}

TEST_CASE("point based oracle agrees with exhaustive subset search") {
  std::mt19937_64 rng(43);
  int compared = 0;
  for (int trial = 0; trial < 30 && compared < 8; ++trial) {
    const Subshift S = random_sft(rng, 2);
    const EnergyFunctional E = random_energy(rng, S, 1);
    const int n = 1 + static_cast<int>(rng() % 2);
    const int m = static_cast<int>(rng() % 2);
    const auto naive = spanning_separated_naive(S, E, n, m);
    if (!naive) continue;
    const auto fast = spanning_separated_oracle(S, E, n, m);
    CHECK(fast.separated.compare(naive->separated) == 0);
    CHECK(fast.spanning.compare(naive->spanning) == 0);
    ++compared;
  }
  CHECK(compared > 0);
}

TEST_CASE("partition pressure matches exhaustive assignment search") {
  std::mt19937_64 rng(47);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Subshift S = random_sft(rng);
    const Cover U = random_cover(rng, S);
    const EnergyFunctional E = random_energy(rng, S);
    const int n = 1 + static_cast<int>(rng() % 2);
    const auto brute = assignment_brute(S, U, E, n, true);
    if (!brute) continue;
    CHECK(exact_of(p1(S, U, E, n, Precision::Exact)).compare(*brute) == 0);
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("subcover pressures match exhaustive subset search") {
  std::mt19937_64 rng(53);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Subshift S = random_sft(rng);
    const Cover U = random_cover(rng, S);
    const EnergyFunctional E = random_energy(rng, S);
    const int n = 1 + static_cast<int>(rng() % 2);
    const auto sup_brute = subcover_brute(S, U, E, n, true);
    const auto inf_brute = subcover_brute(S, U, E, n, false);
    if (!sup_brute || !inf_brute) continue;
    CHECK(exact_of(p3(S, U, E, n, Precision::Exact)).compare(*sup_brute) == 0);
    CHECK(exact_of(p4(S, U, E, n, Precision::Exact)).compare(*inf_brute) == 0);
    CHECK(exact_of(p2(S, U, E, n, Precision::Exact)).compare(*inf_brute) == 0);
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("assigning inf weights over partitions can exceed the subcover infimum") {
  // two overlapping elements around a shared low energy atom: the
  // partition route forces exp(10) terms while enlarging to the full
  // elements reaches 2
  const Subshift S = Subshift::full_shift(3);
  Cover U;
  U.elements.push_back(set_union(S, CylSet::cylinder(S, {0}), CylSet::cylinder(S, {1})));
  U.elements.push_back(set_union(S, CylSet::cylinder(S, {0}), CylSet::cylinder(S, {2})));
  const EnergyFunctional E = EnergyFunctional::linear(
      S, CylinderFunction(S, 1, {rat(0), rat(10), rat(10)}));
  const auto literal = assignment_brute(S, U, E, 1, false);
  REQUIRE(literal.has_value());
  ExpSum expect_literal;
  expect_literal.add_term(rat(0), rat(1));
  expect_literal.add_term(rat(10), rat(1));
  CHECK(literal->compare(expect_literal) == 0);

  const ExpSum two = count_times_one(2);
  CHECK(exact_of(p2(S, U, E, 1, Precision::Exact)) == two);
  CHECK(exact_of(p4(S, U, E, 1, Precision::Exact)) == two);
  CHECK(two.compare(*literal) < 0);  // the literal assignment value is strictly worse
}

TEST_CASE("atom weights agree with completed point evaluation") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const Subshift S = random_sft(rng);
    const Cover U = random_cover(rng, S);
    const EnergyFunctional E = random_energy(rng, S);
    const int n = 1 + static_cast<int>(rng() % 2);
    const AtomWeightTable T = atom_weights(S, U, E, n);
    for (const WeightedAtom& a : T.atoms) {
      bool first = true;
      Rational mx(0), mn(0);
      for (const Word& w : a.atom.words_at(S, T.working_resolution)) {
        const PointRep x = complete_to_point(S, w);
        const Rational v = Rational(n) * E.eval(S, empirical_measure(S, x, n));
        if (first || v > mx) mx = v;
        if (first || v < mn) mn = v;
        first = false;
      }
      CHECK_FALSE(first);
      CHECK(a.sup_weight == mx);
      CHECK(a.inf_weight == mn);
    }
  }
}

TEST_CASE("greedy point sweep certificate") {
  const Subshift S = Subshift::full_shift(2);
  const Cover U = one_cylinder_cover(S);
  const EnergyFunctional E =
      EnergyFunctional::linear(S, CylinderFunction(S, 1, {rat(1), rat(0)}));
  const Partition P{one_cylinder_cover(S).elements};
  const GreedyBnResult r = greedy_bn(S, U, E, 3, {P}, Precision::Exact);
  CHECK(r.certificate_ok());
  CHECK(r.points.size() == 8);  // one point per 3-cylinder
  for (const PointRep& x : r.points) CHECK(is_valid_point(S, x));
  CHECK(r.sum.exact.has_value());

  const Subshift R = fixedpoint_system();
  const GreedyBnResult rr = greedy_bn(R, fixedpoint_cover(R), fixedpoint_energy(R), 2,
                                      {Partition{one_cylinder_cover(R).elements}},
                                      Precision::Exact);
  CHECK(rr.certificate_ok());
}

TEST_CASE("greedy disjointification certificate") {
  const Subshift S = fixedpoint_system();
  const DisjointifyResult r =
      greedy_disjointify(S, fixedpoint_cover(S), fixedpoint_energy(S), 2, 1, Precision::Exact);
  CHECK(r.certificate_ok());
  CHECK(r.disjoint_cover.size() == r.points.size());
  CHECK(r.element_index.size() == r.disjoint_cover.size());

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 8; ++trial) {
    const Subshift T = random_sft(rng);
    const Cover U = random_cover(rng, T);
    const EnergyFunctional E = random_energy(rng, T);
    const CoverGeometry g = cover_geometry(T, U);
    const int n = 1 + static_cast<int>(rng() % 2);
    const DisjointifyResult d =
        greedy_disjointify(T, U, E, n, g.lebesgue_level, Precision::Exact);
    CHECK(d.certificate_ok());
  }
}

TEST_CASE("report on the full shift with linear energy") {
  const Subshift S = Subshift::full_shift(2);
  const Cover U = one_cylinder_cover(S);
  const EnergyFunctional E =
      EnergyFunctional::linear(S, CylinderFunction(S, 1, {rat(1), rat(0)}));
  const PressureReport rep =
      pressure_report(S, U, E, 1, 8, {0, 2}, Precision::Exact, {}, 3);
  CHECK(rep.audits_ok());
  REQUIRE(rep.rows.size() == 8);
  const double expect = std::log(1 + std::exp(1.0));
  for (const PressureRow& row : rep.rows) {
    CHECK(row.p1.rate(row.n) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(row.p3.rate(row.n) == doctest::Approx(expect).epsilon(1e-12));
    REQUIRE(row.pn.size() == 2);
    CHECK(row.pn[0].first == 0);
    CHECK(row.pn[1].first == 2);
  }
  for (const RateBand* band : {&rep.rate_p1, &rep.rate_p2, &rep.rate_p3, &rep.rate_p4}) {
    CHECK(band->low <= band->high + 1e-15);
    CHECK(band->low == doctest::Approx(expect).epsilon(1e-12));
    CHECK(band->high == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(rep.m_eps == 1);             // cover diameter 1/2
  CHECK(rep.m_half_lebesgue == 2);   // lebesgue level 1
  CHECK(rep.tau_hat >= 0);
}

TEST_CASE("report rates on the isolated fixed point example") {
  const Subshift S = fixedpoint_system();
  const PressureReport rep = pressure_report(S, fixedpoint_cover(S), fixedpoint_energy(S), 1, 6,
                                             {0}, Precision::Exact, {}, 2);
  CHECK(rep.audits_ok());
  const double l2 = std::log(2.0);
  CHECK(rep.rate_p3.low == doctest::Approx(l2 + 10).epsilon(1e-12));
  CHECK(rep.rate_p3.high == doctest::Approx(l2 + 10).epsilon(1e-12));
  CHECK(rep.rate_p1.high == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(rep.rate_p1.low == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(rep.rate_p2.high == doctest::Approx(l2).epsilon(1e-12));
  CHECK(rep.rate_p4.high == doctest::Approx(l2).epsilon(1e-12));
}

TEST_CASE("resolution caps") {
  CHECK(default_resolution_cap(2) == 22);
  CHECK(default_resolution_cap(3) == 13);
  const Subshift S = Subshift::full_shift(2);
  const EnergyFunctional E = EnergyFunctional::zero(S);
  SearchCaps caps;
  caps.max_resolution = 3;
  CHECK_THROWS_AS(pn_separated(S, E, 5, 2, Precision::Float, caps), ResolutionCapError);
  CHECK_THROWS_AS(p3(S, one_cylinder_cover(S), E, 5, Precision::Float, caps),
                  ResolutionCapError);
  try {
    pn_separated(S, E, 5, 2, Precision::Float, caps);
    CHECK(false);
  } catch (const ResolutionCapError& e) {
    CHECK(e.required == 7);
    CHECK(e.cap == 3);
  }
  // within the cap nothing throws
  CHECK(pn_separated(S, E, 2, 1, Precision::Float, caps).log_value ==
        doctest::Approx(3 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("float and exact modes agree in the log domain") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    const Subshift S = random_sft(rng);
    const Cover U = random_cover(rng, S);
    const EnergyFunctional E = random_energy(rng, S);
    const int n = 1 + static_cast<int>(rng() % 2);
    const LogValue f = p3(S, U, E, n);
    const LogValue x = p3(S, U, E, n, Precision::Exact);
    CHECK_FALSE(f.exact.has_value());
    REQUIRE(x.exact.has_value());
    CHECK(f.log_value == doctest::Approx(x.exact->log_value()).epsilon(1e-9));
    CHECK(x.log_value == doctest::Approx(x.exact->log_value()).epsilon(1e-9));
  }
}
