// Cylinder functions, polynomial outers and the energy functional:
// evaluation, orbit weights, and the continuity modulus bound.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

using namespace plab;
using plabtest::random_atomic;
using plabtest::random_energy;
using plabtest::random_sft;
using plabtest::random_word;
using plabtest::rat;

TEST_CASE("cylinder function evaluation") {
  const Subshift S = Subshift::full_shift(2);
  const CylinderFunction f(S, 2, {rat(1), rat(2), rat(3), rat(4)});  // 00 01 10 11
  CHECK(f.value({0, 1}) == 2);
  CHECK(f.value({1, 1}) == 4);
  CHECK(f.value_at(PointRep({}, {0, 1})) == 2);
  CHECK(f.value_at(PointRep({}, {1, 0})) == 3);
  CHECK(f.min_value() == 1);
  CHECK(f.max_value() == 4);

  const AtomicMeasure d = AtomicMeasure::point_mass(S, PointRep({}, {0, 1}));
  CHECK(f.integral(S, d) == 2);
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  CHECK(f.integral(S, u) == rat(5, 2));  // every 2-word has mass 1/4
}

TEST_CASE("indicator and constant") {
  const Subshift S = Subshift::full_shift(2);
  const CylinderFunction ind = CylinderFunction::indicator(S, CylSet::cylinder(S, {1}));
  CHECK(ind.value({1}) == 1);
  CHECK(ind.value({0}) == 0);
  const CylinderFunction c = CylinderFunction::constant(S, rat(7, 3));
  CHECK(c.value_at(PointRep({}, {1})) == rat(7, 3));
  CHECK(c.min_value() == c.max_value());
}

TEST_CASE("lipschitz bound holds on sampled pairs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Subshift S = random_sft(rng);
    const int w = 1 + static_cast<int>(rng() % 2);
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < enumerate_words(S, w).size(); ++i)
      vals.push_back(rat(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3)));
    const CylinderFunction f(S, w, vals);
    const Rational L = f.lipschitz_bound();
    for (int rep = 0; rep < 10; ++rep) {
      const PointRep x = complete_to_point(S, random_word(rng, S, 4));
      const PointRep y = complete_to_point(S, random_word(rng, S, 4));
      CHECK(abs(f.value_at(x) - f.value_at(y)) <= L * dist(x, y));
    }
  }
}

TEST_CASE("polynomial evaluation and derivative bound") {
  const Polynomial p{{rat(1), rat(2), rat(3)}};  // 1 + 2s + 3s^2
  CHECK(p(rat(2)) == 17);
  CHECK(p(rat(-1, 2)) == rat(3, 4));
  const Rational b = p.derivative_bound(rat(2));
  CHECK(b >= 14);  // |p'(2)| = 14
  CHECK(Polynomial{{rat(0), rat(1)}}.is_identity());
  CHECK_FALSE(Polynomial{{rat(1), rat(1)}}.is_identity());
  CHECK_FALSE(p.is_identity());
}

TEST_CASE("linear energy equals the integral and zero vanishes") {
  const Subshift S = Subshift::full_shift(2);
  const CylinderFunction f(S, 1, {rat(0), rat(1)});
  const EnergyFunctional E = EnergyFunctional::linear(S, f);
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  CHECK(E.eval(S, u) == rat(1, 2));
  CHECK(E.window() == 1);

  const EnergyFunctional Z = EnergyFunctional::zero(S);
  CHECK(Z.eval(S, u) == 0);
  CHECK(Z.orbit_weight({0, 1, 0}, 3) == 0);
}

TEST_CASE("nonlinear outer applies to the integral") {
  const Subshift S = Subshift::full_shift(2);
  const CylinderFunction f(S, 1, {rat(0), rat(1)});
  // E(mu) = (integral f)^2 - 3 (integral f)
  std::vector<EnergyFunctional::Term> terms;
  terms.push_back({Polynomial{{rat(0), rat(-3), rat(1)}}, f});
  const EnergyFunctional E(std::move(terms));
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  CHECK(E.eval(S, u) == rat(1, 4) - rat(3, 2));
  const AtomicMeasure d1 = AtomicMeasure::point_mass(S, PointRep({}, {1}));
  CHECK(E.eval(S, d1) == -2);
}

TEST_CASE("orbit weights count occurrences for linear indicators") {
  const Subshift S = Subshift::full_shift(2);
  const EnergyFunctional ones =
      EnergyFunctional::linear(S, CylinderFunction(S, 1, {rat(0), rat(1)}));
  CHECK(ones.orbit_weight({1, 0, 1}, 3) == 2);
  CHECK(ones.orbit_weight({0, 0, 0, 1}, 4) == 1);

  const EnergyFunctional pairs =
      EnergyFunctional::linear(S, CylinderFunction(S, 2, {rat(0), rat(0), rat(0), rat(1)}));
  CHECK(pairs.window() == 2);
  CHECK(pairs.orbit_weight({1, 1, 1, 0}, 3) == 2);  // 11 at positions 0 and 1
  CHECK_THROWS(pairs.orbit_weight({1, 1, 1}, 3));   // needs n + window - 1 symbols
}

TEST_CASE("orbit weight equals n times the empirical energy") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Subshift S = random_sft(rng);
    const EnergyFunctional E = random_energy(rng, S);
    const int n = 1 + static_cast<int>(rng() % 4);
    const PointRep x = complete_to_point(S, random_word(rng, S, n + E.window() - 1 + 2));
    const Rational direct = E.orbit_weight(x.prefix(n + E.window() - 1), n);
    const Rational via_measure = Rational(n) * E.eval(S, empirical_measure(S, x, n));
    CHECK(direct == via_measure);
  }
}

TEST_CASE("modulus bound controls energy differences") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Subshift S = random_sft(rng);
    const EnergyFunctional E = random_energy(rng, S);
    const AtomicMeasure mu = random_atomic(rng, S, 5);
    const AtomicMeasure nu = random_atomic(rng, S, 5);
    const Rational eps = w1(S, mu, nu);
    const Rational gap = abs(E.eval(S, mu) - E.eval(S, nu));
    CHECK(gap <= E.modulus_bound(eps));
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("modulus coefficient scales linearly") {
  const Subshift S = Subshift::full_shift(2);
  const EnergyFunctional E =
      EnergyFunctional::linear(S, CylinderFunction(S, 1, {rat(0), rat(1)}));
  CHECK(E.modulus_bound(rat(1)) == E.modulus_coefficient());
  CHECK(E.modulus_bound(rat(1, 4)) == E.modulus_coefficient() * rat(1, 4));
}
