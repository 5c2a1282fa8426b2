// Entropy computations for partitions and covers.

#include "pressurelab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace plab {

namespace {

double phi(const Rational& m) {
  double x = to_double(m);
  return x > 0 ? -x * std::log(x) : 0.0;
}

constexpr double kMonotoneTol = 1e-9;

}  // namespace

Rational measure_of(const Subshift& S, const MeasureRef& mu, const CylSet& a) {
  if (std::holds_alternative<const AtomicMeasure*>(mu))
    return measure_of(S, *std::get<const AtomicMeasure*>(mu), a);
  return measure_of(S, *std::get<const MarkovMeasure*>(mu), a);
}

double shannon_entropy(const Subshift& S, const MeasureRef& mu, const Partition& P) {
  double h = 0;
  for (const CylSet& c : P.classes) h += phi(measure_of(S, mu, c));
  return h;
}

double cover_entropy_static(const Subshift& S, const MeasureRef& mu, const Cover& U) {
  GeneratedPartition gp = generated_partition(S, U.elements);
  const std::size_t natoms = gp.partition.classes.size();
  for (const auto& homes : gp.homes)
    if (homes.empty())
      throw std::invalid_argument("cover_entropy_static: family does not cover the space");

  // Atoms with the same candidate element set can be assigned as one
  // block: the objective is concave in transfers of block mass between
  // two elements, so some optimum keeps each block together.
  std::map<std::vector<int>, Rational> blocks;
  for (std::size_t i = 0; i < natoms; ++i) {
    Rational m = measure_of(S, mu, gp.partition.classes[i]);
    if (m == 0) continue;  // contributes nothing wherever it goes
    blocks[gp.homes[i]] += m;
  }
  std::vector<std::pair<std::vector<int>, Rational>> blk(blocks.begin(), blocks.end());
  std::sort(blk.begin(), blk.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<Rational> class_mass(U.elements.size(), Rational(0));
  double best = std::numeric_limits<double>::infinity();
  // phi' >= -1 on (0, 1], so completing an assignment can lower the
  // objective by at most the unassigned mass; that gives the bound.
  std::vector<Rational> remaining_after(blk.size() + 1, Rational(0));
  for (std::size_t i = blk.size(); i-- > 0;)
    remaining_after[i] = remaining_after[i + 1] + blk[i].second;

  auto rec = [&](auto&& self, std::size_t i, double partial) -> void {
    if (partial - to_double(remaining_after[i]) >= best) return;
    if (i == blk.size()) {
      best = std::min(best, partial);
      return;
    }
    for (int e : blk[i].first) {
      const Rational before = class_mass[e];
      double delta = -phi(before);
      class_mass[e] = before + blk[i].second;
      delta += phi(class_mass[e]);
      self(self, i + 1, partial + delta);
      class_mass[e] = before;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

namespace {

EntropyRateEstimate finish_estimate(std::vector<std::pair<int, double>> per_n) {
  EntropyRateEstimate est;
  est.per_n = std::move(per_n);
  est.monotone = true;
  for (std::size_t i = 1; i < est.per_n.size(); ++i)
    if (est.per_n[i].second > est.per_n[i - 1].second + kMonotoneTol) est.monotone = false;
  est.final_value = est.per_n.back().second;
  est.min_value = est.per_n.front().second;
  for (const auto& [n, v] : est.per_n) est.min_value = std::min(est.min_value, v);
  return est;
}

}  // namespace

EntropyRateEstimate entropy_rate_partition(const Subshift& S, const MeasureRef& mu,
                                           const Partition& P, int n_max) {
  if (n_max < 1) throw std::invalid_argument("entropy_rate_partition: n_max must be >= 1");
  validate_partition(S, P);
  bool invariant = true;
  if (std::holds_alternative<const AtomicMeasure*>(mu))
    invariant = is_invariant(S, *std::get<const AtomicMeasure*>(mu));
  std::vector<std::pair<int, double>> per_n;
  for (int n = 1; n <= n_max; ++n) {
    JoinedCover jc = iterated_join(S, P.as_cover(), n);
    double h = 0;
    for (const CylSet& c : jc.elements) h += phi(measure_of(S, mu, c));
    per_n.emplace_back(n, h / n);
  }
  EntropyRateEstimate est = finish_estimate(std::move(per_n));
  if (invariant && !est.monotone)
    throw std::logic_error("entropy_rate_partition: rate increased for an invariant measure");
  return est;
}

double markov_entropy_rate(const MarkovMeasure& mu) {
  double h = 0;
  for (int i = 0; i < mu.states(); ++i) {
    double pi = to_double(mu.stationary()[i]);
    if (pi <= 0) continue;
    for (int j = 0; j < mu.states(); ++j) {
      double p = to_double(mu.rows()[i][j]);
      if (p > 0) h -= pi * p * std::log(p);
    }
  }
  return h;
}

EntropyRateEstimate entropy_rate_cover(const Subshift& S, const MeasureRef& mu,
                                       const Cover& U, int n_max) {
  if (n_max < 1) throw std::invalid_argument("entropy_rate_cover: n_max must be >= 1");
  std::vector<std::pair<int, double>> per_n;
  for (int n = 1; n <= n_max; ++n) {
    JoinedCover jc = iterated_join(S, U, n);
    per_n.emplace_back(n, cover_entropy_static(S, mu, jc.as_cover()) / n);
  }
  return finish_estimate(std::move(per_n));
}

double entropy_rate_cover_plus(const Subshift& S, const MeasureRef& mu, const Cover& U,
                               int n_max) {
  double best = std::numeric_limits<double>::infinity();
  enumerate_assignments(S, U.elements,
                        [&](const Partition& P, const std::vector<int>&) {
                          EntropyRateEstimate est = entropy_rate_partition(S, mu, P, n_max);
                          best = std::min(best, est.final_value);
                        });
  return best;
}

EntropyRateEstimate topological_cover_entropy(const Subshift& S, const Cover& U, int n_max) {
  if (n_max < 1) throw std::invalid_argument("topological_cover_entropy: n_max must be >= 1");
  std::vector<std::pair<int, double>> per_n;
  for (int n = 1; n <= n_max; ++n) {
    JoinedCover jc = iterated_join(S, U, n);
    int count = minimal_subcover_count(S, jc.as_cover());
    per_n.emplace_back(n, std::log(static_cast<double>(count)) / n);
  }
  return finish_estimate(std::move(per_n));
}

LogSumBound log_sum_bound(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("log_sum_bound: size mismatch or empty input");
  double total = 0;
  for (double bi : b) {
    if (bi < 0) throw std::invalid_argument("log_sum_bound: negative probability");
    total += bi;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("log_sum_bound: probabilities do not sum to 1");
  LogSumBound out;
  out.rhs = log_sum_exp(a);
  out.lhs = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] > 0) out.lhs += b[i] * (a[i] - std::log(b[i]));
  out.gibbs.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.gibbs[i] = std::exp(a[i] - out.rhs);
  return out;
}

}  // namespace plab
