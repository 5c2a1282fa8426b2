// Shannon entropy over partitions and covers, entropy rates, and the
// log-sum inequality in Gibbs form.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "pressurelab/entropy.hpp"

using namespace plab;
using plabtest::golden_mean;
using plabtest::one_cylinder_cover;
using plabtest::rat;
using plabtest::fixedpoint_cover;
using plabtest::fixedpoint_system;

namespace {

Partition one_cylinder_partition(const Subshift& S) {
  return Partition{one_cylinder_cover(S).elements};
}

double h2(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

}  // namespace

TEST_CASE("shannon entropy of the symbol partition") {
  const Subshift S = Subshift::full_shift(2);
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  CHECK(shannon_entropy(S, MeasureRef(&u), one_cylinder_partition(S)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const MarkovMeasure b(S, {{rat(1, 4), rat(3, 4)}, {rat(1, 4), rat(3, 4)}});
  CHECK(shannon_entropy(S, MeasureRef(&b), one_cylinder_partition(S)) ==
        doctest::Approx(h2(0.25)).epsilon(1e-12));
}

TEST_CASE("static cover entropy minimizes over atom assignments") {
  const Subshift S = fixedpoint_system();
  const AtomicMeasure mu(S, {{PointRep({}, {0}), rat(1, 2)},
                             {PointRep({}, {1}), rat(1, 3)},
                             {PointRep({}, {2}), rat(1, 6)}});
  // the shared atom [2] joins either side; (2/3, 1/3) beats (1/2, 1/2)
  const double expect = h2(1.0 / 3);
  CHECK(cover_entropy_static(S, MeasureRef(&mu), fixedpoint_cover(S)) ==
        doctest::Approx(expect).epsilon(1e-12));
  // on a partition there is nothing to choose
  CHECK(cover_entropy_static(S, MeasureRef(&mu), one_cylinder_cover(S)) ==
        doctest::Approx(shannon_entropy(S, MeasureRef(&mu), one_cylinder_partition(S)))
            .epsilon(1e-12));
}

TEST_CASE("markov entropy rate closed form") {
  const Subshift S = golden_mean();
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  CHECK(markov_entropy_rate(u) == doctest::Approx((2.0 / 3) * std::log(2.0)).epsilon(1e-12));
  const MarkovMeasure b(Subshift::full_shift(2),
                        {{rat(1, 4), rat(3, 4)}, {rat(1, 4), rat(3, 4)}});
  CHECK(markov_entropy_rate(b) == doctest::Approx(h2(0.25)).epsilon(1e-12));
}

TEST_CASE("partition entropy rate follows the markov chain rule") {
  const Subshift S = golden_mean();
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  const double h = markov_entropy_rate(u);
  const double H1 = shannon_entropy(S, MeasureRef(&u), one_cylinder_partition(S));
  const EntropyRateEstimate est =
      entropy_rate_partition(S, MeasureRef(&u), one_cylinder_partition(S), 8);
  REQUIRE(est.per_n.size() == 8);
  for (const auto& [n, v] : est.per_n)
    CHECK(v == doctest::Approx((H1 + (n - 1) * h) / n).epsilon(1e-9));
  CHECK(est.monotone);
  CHECK(est.final_value == est.per_n.back().second);
  CHECK(est.min_value == est.final_value);  // nonincreasing
  CHECK(est.final_value >= h);
}

TEST_CASE("cover entropy rate via the one cylinder cover matches the partition rate") {
  const Subshift S = Subshift::full_shift(2);
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  const EntropyRateEstimate est =
      entropy_rate_cover(S, MeasureRef(&u), one_cylinder_cover(S), 6);
  for (const auto& [n, v] : est.per_n)
    CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("cover entropy rate with an overlapping cover can vanish") {
  const Subshift S = Subshift::full_shift(2);
  const MarkovMeasure u = MarkovMeasure::uniform_kernel(S);
  Cover trivial;
  trivial.elements.push_back(CylSet::whole_space(S));
  trivial.elements.push_back(CylSet::cylinder(S, {1}));
  CHECK(entropy_rate_cover(S, MeasureRef(&u), trivial, 4).final_value ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy_rate_cover_plus(S, MeasureRef(&u), trivial, 4) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy_rate_cover_plus(S, MeasureRef(&u), one_cylinder_cover(S), 4) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("topological cover entropy counts minimal subcovers") {
  const Subshift F = Subshift::full_shift(2);
  const EntropyRateEstimate full = topological_cover_entropy(F, one_cylinder_cover(F), 6);
  for (const auto& [n, v] : full.per_n)
    CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const Subshift G = golden_mean();
  const EntropyRateEstimate gm = topological_cover_entropy(G, one_cylinder_cover(G), 8);
  for (const auto& [n, v] : gm.per_n)
    CHECK(v == doctest::Approx(std::log(static_cast<double>(G.word_count(n))) / n)
                   .epsilon(1e-12));

  // overlapping elements: the shared fixed point never forces an extra
  // element, so the count stays 2^n
  const Subshift R = fixedpoint_system();
  const EntropyRateEstimate rm = topological_cover_entropy(R, fixedpoint_cover(R), 5);
  for (const auto& [n, v] : rm.per_n)
    CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("log sum inequality and gibbs weights") {
  const std::vector<double> a = {std::log(1.0), std::log(2.0), std::log(3.0)};
  const std::vector<double> uniform = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const LogSumBound at_uniform = log_sum_bound(a, uniform);
  CHECK(at_uniform.rhs == doctest::Approx(std::log(6.0)).epsilon(1e-12));
  CHECK(at_uniform.lhs < at_uniform.rhs);
  REQUIRE(at_uniform.gibbs.size() == 3);
  CHECK(at_uniform.gibbs[0] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(at_uniform.gibbs[2] == doctest::Approx(0.5).epsilon(1e-12));

  const LogSumBound at_gibbs = log_sum_bound(a, at_uniform.gibbs);
  CHECK(at_gibbs.lhs == doctest::Approx(at_gibbs.rhs).epsilon(1e-12));

  // zero weights contribute nothing
  const LogSumBound partial = log_sum_bound(a, {0.0, 0.0, 1.0});
  CHECK(partial.lhs == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(partial.lhs < partial.rhs);
}
