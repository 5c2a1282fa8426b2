// Sliding block codes: application, pullbacks, pushforwards and the
// pressure identity along surjective codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "pressurelab/factor.hpp"

using namespace plab;
using plabtest::golden_mean;
using plabtest::one_cylinder_cover;
using plabtest::random_atomic;
using plabtest::random_cover;
using plabtest::random_energy;
using plabtest::random_word;
using plabtest::rat;

namespace {

SlidingBlockCode xor_code() {
  const Subshift S = Subshift::full_shift(2);
  std::map<Word, Symbol> bm;
  bm[{0, 0}] = 0;
  bm[{0, 1}] = 1;
  bm[{1, 0}] = 1;
  bm[{1, 1}] = 0;
  return SlidingBlockCode(S, S, 2, std::move(bm));
}

}  // namespace

TEST_CASE("block map validation") {
  const Subshift F = Subshift::full_shift(2);
  const Subshift G = golden_mean();
  std::map<Word, Symbol> partial;
  partial[{0}] = 0;
  CHECK_THROWS(SlidingBlockCode(F, F, 1, partial));
  // image of the admissible source word 01 would be the forbidden 11
  std::map<Word, Symbol> bad;
  bad[{0}] = 1;
  bad[{1}] = 1;
  CHECK_THROWS(SlidingBlockCode(G, G, 1, bad));
}

TEST_CASE("identity code") {
  const Subshift S = golden_mean();
  const SlidingBlockCode id = SlidingBlockCode::identity(S);
  CHECK(id.window() == 1);
  const PointRep x({0}, {0, 1});
  CHECK(points_equal(id.apply(x), x));
  CHECK(id.apply_word({0, 1, 0}) == Word{0, 1, 0});
  CHECK(id.is_surjective_to_length(6));
  CHECK(pullback_set(id, CylSet::cylinder(S, {1})) == CylSet::cylinder(S, {1}));
}

TEST_CASE("xor code application and surjectivity") {
  const SlidingBlockCode pi = xor_code();
  CHECK(points_equal(pi.apply(PointRep({}, {0, 1})), PointRep({}, {1})));
  CHECK(points_equal(pi.apply(PointRep({}, {0})), PointRep({}, {0})));
  CHECK(pi.apply_word({0, 1, 1, 0}) == Word{1, 0, 1});
  CHECK(pi.map_symbol({1, 1}) == 0);
  CHECK(pi.is_surjective_to_length(8));

  CHECK(pullback_set(pi, CylSet::cylinder(pi.target(), {1})) ==
        CylSet(pi.source(), 2, {{0, 1}, {1, 0}}));
  const Cover pulled = pullback_cover(pi, one_cylinder_cover(pi.target()));
  validate_cover(pi.source(), pulled);
  CHECK(pulled.elements.size() == 2);
}

TEST_CASE("higher block codes invert each other") {
  const Subshift S = golden_mean();
  for (int k : {2, 3}) {
    const SlidingBlockCode up = SlidingBlockCode::to_higher_block(S, k);
    const SlidingBlockCode down = SlidingBlockCode::from_higher_block(S, k);
    CHECK(up.window() == k);
    CHECK(down.window() == 1);
    CHECK(up.is_surjective_to_length(5));
    CHECK(down.is_surjective_to_length(5));
    std::mt19937_64 rng(7 + k);
    for (int trial = 0; trial < 5; ++trial) {
      const PointRep x = complete_to_point(S, random_word(rng, S, 5));
      CHECK(points_equal(down.apply(up.apply(x)), x));
      const PointRep y = complete_to_point(up.target(), random_word(rng, up.target(), 5));
      CHECK(points_equal(up.apply(down.apply(y)), y));
    }
  }
}

TEST_CASE("pullback energy matches the pushforward exactly") {
  std::mt19937_64 rng(31);
  const SlidingBlockCode pi = xor_code();
  for (int trial = 0; trial < 15; ++trial) {
    const EnergyFunctional E = random_energy(rng, pi.target());
    const EnergyFunctional pulled = pullback_energy(pi, E);
    CHECK(pulled.window() == E.window() + 1);
    const AtomicMeasure mu = random_atomic(rng, pi.source(), 5);
    const AtomicMeasure nu = pushforward_measure(pi, mu);
    CHECK(pulled.eval(pi.source(), mu) == E.eval(pi.target(), nu));
    // orbit weights agree through the word map
    const int n = 1 + static_cast<int>(rng() % 3);
    const Word u = random_word(rng, pi.source(), n + pulled.window() - 1);
    CHECK(pulled.orbit_weight(u, n) == E.orbit_weight(pi.apply_word(u), n));
  }
}

TEST_CASE("pushforward of a point mass") {
  const SlidingBlockCode pi = xor_code();
  const PointRep x({}, {0, 1});
  const AtomicMeasure img = pushforward_measure(pi, AtomicMeasure::point_mass(pi.source(), x));
  REQUIRE(img.atoms().size() == 1);
  CHECK(points_equal(img.atoms()[0].first, PointRep({}, {1})));
}

TEST_CASE("xor image of the uniform bernoulli measure") {
  const SlidingBlockCode pi = xor_code();
  const MarkovMeasure mu = MarkovMeasure::uniform_kernel(pi.source());
  const PushforwardMeasure img = pushforward_measure(pi, mu, 5);
  CHECK(img.depth == 5);
  for (const auto& [w, mass] : img.marginals)
    CHECK(mass == pow2(-static_cast<long>(w.size())));
  CHECK_FALSE(img.lossy);
  REQUIRE(img.markov.has_value());
  CHECK(img.block_level == 1);
  CHECK(img.markov->rows()[0][1] == rat(1, 2));
}

TEST_CASE("pushforward marginals are consistent") {
  std::mt19937_64 rng(37);
  const SlidingBlockCode pi = xor_code();
  const MarkovMeasure mu(pi.source(), {{rat(1, 3), rat(2, 3)}, {rat(3, 4), rat(1, 4)}});
  const PushforwardMeasure img = pushforward_measure(pi, mu, 5);
  for (int len = 1; len < 5; ++len) {
    Rational total(0);
    for (const auto& [w, mass] : img.marginals) {
      if (static_cast<int>(w.size()) != len) continue;
      total += mass;
      // Chapman consistency: mass splits over one step extensions
      Rational ext(0);
      for (Symbol a = 0; a < pi.target().alphabet_size(); ++a) {
        Word wa = w;
        wa.push_back(a);
        auto it = img.marginals.find(wa);
        if (it != img.marginals.end()) ext += it->second;
      }
      CHECK(ext == mass);
    }
    CHECK(total == 1);
  }
  if (img.markov.has_value() && img.block_level == 1)
    for (const auto& [w, mass] : img.marginals) CHECK(img.markov->word_mass(w) == mass);
}

TEST_CASE("pressure identity along surjective codes") {
  std::mt19937_64 rng(73);
  const SlidingBlockCode pi = xor_code();
  for (int trial = 0; trial < 5; ++trial) {
    const Cover U = random_cover(rng, pi.target());
    const EnergyFunctional E = random_energy(rng, pi.target(), 1);
    const FactorPressureAudit audit =
        factor_pressure_identity(pi, U, E, 1, 3, Precision::Exact);
    CHECK(audit.surjective_to_length);
    CHECK(audit.all_equal);
    CHECK_FALSE(audit.first_failure.has_value());
    REQUIRE(audit.rows.size() == 3);
    for (const auto& row : audit.rows) CHECK(row.equal);
  }

  const Subshift G = golden_mean();
  const SlidingBlockCode down = SlidingBlockCode::from_higher_block(G, 2);
  const EnergyFunctional EG =
      EnergyFunctional::linear(G, CylinderFunction(G, 1, {rat(2), rat(-1)}));
  const FactorPressureAudit conj =
      factor_pressure_identity(down, one_cylinder_cover(G), EG, 1, 3, Precision::Exact);
  CHECK(conj.all_equal);
}

TEST_CASE("non surjective inclusion fails the audit") {
  const Subshift G = golden_mean();
  const Subshift F = Subshift::full_shift(2);
  std::map<Word, Symbol> incl;
  incl[{0}] = 0;
  incl[{1}] = 1;
  const SlidingBlockCode pi(G, F, 1, std::move(incl));
  const FactorPressureAudit audit = factor_pressure_identity(
      pi, one_cylinder_cover(F), EnergyFunctional::zero(F), 1, 3, Precision::Exact);
  CHECK_FALSE(audit.surjective_to_length);
  CHECK_FALSE(audit.all_equal);
  REQUIRE(audit.first_failure.has_value());
  CHECK(*audit.first_failure == 2);  // 3 source words of length 2 vs 4 target words
}
