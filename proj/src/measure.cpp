// Measures: atomic and Markov, exact stationary vectors, empirical
// measures, total variation and Wasserstein-1.

#include "pressurelab/measure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace plab {

namespace {

// Gaussian elimination over the rationals; A must be nonsingular.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> A,
                                   std::vector<Rational> b) {
  const std::size_t n = A.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) throw std::logic_error("solve_linear: singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    Rational inv = A[col][col];
    for (std::size_t j = col; j < n; ++j) A[col][j] /= inv;
    b[col] /= inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || A[row][col] == 0) continue;
      Rational f = A[row][col];
      for (std::size_t j = col; j < n; ++j) A[row][j] -= f * A[col][j];
      b[row] -= f * b[col];
    }
  }
  return b;
}

// Strongly connected components, Kosaraju.  Returns component id per
// node, ids in reverse topological order of the condensation.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& adj, int& count) {
  const int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> radj(n);
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) radj[v].push_back(u);
  std::vector<bool> seen(n, false);
  std::vector<int> order;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = true;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i < adj[u].size()) {
        int v = adj[u][i++];
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back({v, 0});
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  count = 0;
  for (int idx = n - 1; idx >= 0; --idx) {
    int s = order[idx];
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = count;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : radj[u])
        if (comp[v] < 0) {
          comp[v] = count;
          stack.push_back(v);
        }
    }
    ++count;
  }
  return comp;
}

}  // namespace

AtomicMeasure::AtomicMeasure(const Subshift& S,
                             std::vector<std::pair<PointRep, Rational>> atoms) {
  std::map<PointRep, Rational> merged;
  for (auto& [x, w] : atoms) {
    if (w < 0) throw std::invalid_argument("AtomicMeasure: negative weight");
    if (w == 0) continue;
    if (!is_valid_point(S, x)) throw std::invalid_argument("AtomicMeasure: point not in the subshift");
    merged[x] += w;
  }
  Rational total(0);
  for (auto& [x, w] : merged) {
    total += w;
    atoms_.emplace_back(x, w);
  }
  if (total != 1) throw std::invalid_argument("AtomicMeasure: weights must sum to 1");
}

AtomicMeasure AtomicMeasure::point_mass(const Subshift& S, const PointRep& x) {
  return AtomicMeasure(S, {{x, Rational(1)}});
}

AtomicMeasure empirical_measure(const Subshift& S, const PointRep& x, int n) {
  if (n < 1) throw std::invalid_argument("empirical_measure: n must be >= 1");
  std::vector<std::pair<PointRep, Rational>> atoms;
  Rational w = Rational(1) / n;
  PointRep y = x;
  for (int i = 0; i < n; ++i) {
    atoms.emplace_back(y, w);
    y = shift(y);
  }
  return AtomicMeasure(S, std::move(atoms));
}

AtomicMeasure pushforward(const Subshift& S, const AtomicMeasure& mu) {
  std::vector<std::pair<PointRep, Rational>> atoms;
  for (const auto& [x, w] : mu.atoms()) atoms.emplace_back(shift(x), w);
  return AtomicMeasure(S, std::move(atoms));
}

AtomicMeasure convex_combine(const Subshift& S,
                             const std::vector<std::pair<Rational, AtomicMeasure>>& parts) {
  Rational total(0);
  std::vector<std::pair<PointRep, Rational>> atoms;
  for (const auto& [lambda, mu] : parts) {
    if (lambda < 0) throw std::invalid_argument("convex_combine: negative coefficient");
    total += lambda;
    for (const auto& [x, w] : mu.atoms()) atoms.emplace_back(x, lambda * w);
  }
  if (total != 1) throw std::invalid_argument("convex_combine: coefficients must sum to 1");
  return AtomicMeasure(S, std::move(atoms));
}

Rational measure_of(const Subshift& S, const AtomicMeasure& mu, const CylSet& a) {
  (void)S;
  Rational total(0);
  for (const auto& [x, w] : mu.atoms())
    if (a.contains(x)) total += w;
  return total;
}

bool is_invariant(const Subshift& S, const AtomicMeasure& mu) {
  return pushforward(S, mu) == mu;
}

MarkovMeasure::MarkovMeasure(const Subshift& S, std::vector<std::vector<Rational>> rows)
    : rows_(std::move(rows)) {
  const int n = S.alphabet_size();
  if (static_cast<int>(rows_.size()) != n)
    throw std::invalid_argument("MarkovMeasure: wrong row count");
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows_[i].size()) != n)
      throw std::invalid_argument("MarkovMeasure: wrong column count");
    Rational sum(0);
    for (int j = 0; j < n; ++j) {
      const Rational& p = rows_[i][j];
      if (p < 0) throw std::invalid_argument("MarkovMeasure: negative entry");
      if (p > 0) {
        if (!S.allows(i, j))
          throw std::invalid_argument("MarkovMeasure: mass on a forbidden transition");
        adj[i].push_back(j);
      }
      sum += p;
    }
    if (sum != 1) throw std::invalid_argument("MarkovMeasure: row does not sum to 1");
  }

  int ncomp = 0;
  std::vector<int> comp = scc_ids(adj, ncomp);
  std::vector<bool> comp_closed(ncomp, true);
  for (int u = 0; u < n; ++u)
    for (int v : adj[u])
      if (comp[v] != comp[u]) comp_closed[comp[u]] = false;

  std::vector<std::vector<int>> classes;  // recurrent classes, state lists
  for (int c = 0; c < ncomp; ++c) {
    if (!comp_closed[c]) continue;
    std::vector<int> members;
    for (int u = 0; u < n; ++u)
      if (comp[u] == c) members.push_back(u);
    classes.push_back(std::move(members));
  }
  std::vector<int> transients;
  for (int u = 0; u < n; ++u)
    if (!comp_closed[comp[u]]) transients.push_back(u);

  // Stationary vector per recurrent class.
  std::vector<std::vector<Rational>> class_pi;
  for (const auto& members : classes) {
    const std::size_t k = members.size();
    std::vector<std::vector<Rational>> A(k, std::vector<Rational>(k, Rational(0)));
    std::vector<Rational> b(k, Rational(0));
    // Equations pi P = pi for the first k-1 columns, then sum = 1.
    for (std::size_t col = 0; col + 1 < k; ++col) {
      for (std::size_t i = 0; i < k; ++i)
        A[col][i] = rows_[members[i]][members[col]];
      A[col][col] -= 1;
    }
    for (std::size_t i = 0; i < k; ++i) A[k - 1][i] = 1;
    b[k - 1] = 1;
    class_pi.push_back(solve_linear(std::move(A), std::move(b)));
  }

  // Absorption probabilities from the uniform start.
  std::vector<Rational> weight(classes.size(), Rational(0));
  const Rational u0 = Rational(1) / n;
  std::vector<int> tindex(n, -1);
  for (std::size_t t = 0; t < transients.size(); ++t) tindex[transients[t]] = static_cast<int>(t);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    weight[c] += u0 * static_cast<long>(classes[c].size());
    if (transients.empty()) continue;
    const std::size_t m = transients.size();
    std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> b(m, Rational(0));
    std::vector<bool> in_class(n, false);
    for (int s : classes[c]) in_class[s] = true;
    for (std::size_t i = 0; i < m; ++i) {
      int s = transients[i];
      for (int j = 0; j < n; ++j) {
        const Rational& p = rows_[s][j];
        if (p == 0) continue;
        if (tindex[j] >= 0)
          A[i][tindex[j]] += p;
        else if (in_class[j])
          b[i] += p;
      }
      A[i][i] -= 1;
      b[i] = -b[i];
    }
    std::vector<Rational> h = solve_linear(std::move(A), std::move(b));
    for (const Rational& hi : h) weight[c] += u0 * hi;
  }

  stationary_.assign(n, Rational(0));
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t i = 0; i < classes[c].size(); ++i)
      stationary_[classes[c][i]] += weight[c] * class_pi[c][i];
}

MarkovMeasure::MarkovMeasure(const Subshift& S, std::vector<std::vector<Rational>> rows,
                             std::vector<Rational> stationary)
    : MarkovMeasure(S, rows) {
  const int n = S.alphabet_size();
  if (static_cast<int>(stationary.size()) != n)
    throw std::invalid_argument("MarkovMeasure: wrong stationary length");
  Rational sum(0);
  for (const Rational& p : stationary) {
    if (p < 0) throw std::invalid_argument("MarkovMeasure: negative stationary entry");
    sum += p;
  }
  if (sum != 1) throw std::invalid_argument("MarkovMeasure: stationary does not sum to 1");
  for (int j = 0; j < n; ++j) {
    Rational acc(0);
    for (int i = 0; i < n; ++i) acc += stationary[i] * rows_[i][j];
    if (acc != stationary[j])
      throw std::invalid_argument("MarkovMeasure: vector is not stationary");
  }
  stationary_ = std::move(stationary);
}

MarkovMeasure MarkovMeasure::uniform_kernel(const Subshift& S) {
  const int n = S.alphabet_size();
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    const auto& nx = S.successors(i);
    Rational p = Rational(1) / static_cast<long>(nx.size());
    for (int j : nx) rows[i][j] = p;
  }
  return MarkovMeasure(S, std::move(rows));
}

Rational MarkovMeasure::word_mass(const Word& w) const {
  if (w.empty()) return Rational(1);
  Rational m = stationary_[w[0]];
  for (std::size_t i = 0; i + 1 < w.size() && m != 0; ++i) m *= rows_[w[i]][w[i + 1]];
  return m;
}

Rational measure_of(const Subshift& S, const MarkovMeasure& mu, const CylSet& a) {
  (void)S;
  Rational total(0);
  for (const Word& w : a.words()) total += mu.word_mass(w);
  return total;
}

bool is_ergodic_mixing(const Subshift& S, const MarkovMeasure& mu) {
  const int n = S.alphabet_size();
  std::vector<int> support;
  for (int i = 0; i < n; ++i)
    if (mu.stationary()[i] > 0) support.push_back(i);
  if (support.empty()) return false;
  std::vector<int> pos(n, -1);
  for (std::size_t i = 0; i < support.size(); ++i) pos[support[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(support.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    for (int j = 0; j < n; ++j)
      if (mu.rows()[support[i]][j] > 0) {
        if (pos[j] < 0) return false;  // positive mass leaks off the support
        adj[i].push_back(pos[j]);
      }
  int ncomp = 0;
  std::vector<int> comp = scc_ids(adj, ncomp);
  if (ncomp != 1) return false;
  // Aperiodicity: gcd over edges of depth(u) + 1 - depth(v) must be 1.
  std::vector<int> depth(support.size(), -1);
  std::vector<int> queue{0};
  depth[0] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int u = queue[qi];
    for (int v : adj[u])
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
  }
  int g = 0;
  for (std::size_t u = 0; u < adj.size(); ++u)
    for (int v : adj[u]) g = std::gcd(g, std::abs(depth[u] + 1 - depth[v]));
  return g == 1;
}

std::vector<std::vector<int>> recurrent_classes(const Subshift& S, const MarkovMeasure& mu) {
  const int n = S.alphabet_size();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (mu.rows()[i][j] > 0) adj[i].push_back(j);
  int ncomp = 0;
  std::vector<int> comp = scc_ids(adj, ncomp);
  std::vector<bool> closed(ncomp, true);
  for (int u = 0; u < n; ++u)
    for (int v : adj[u])
      if (comp[v] != comp[u]) closed[comp[u]] = false;
  std::vector<std::vector<int>> classes;
  for (int c = 0; c < ncomp; ++c) {
    if (!closed[c]) continue;
    std::vector<int> members;
    for (int u = 0; u < n; ++u)
      if (comp[u] == c) members.push_back(u);
    classes.push_back(std::move(members));
  }
  std::sort(classes.begin(), classes.end());
  return classes;
}

MarkovMeasure restrict_to_class(const Subshift& S, const MarkovMeasure& mu,
                                const std::vector<int>& cls) {
  const int n = S.alphabet_size();
  std::vector<bool> in_cls(n, false);
  for (int s : cls) {
    if (s < 0 || s >= n) throw std::invalid_argument("restrict_to_class: bad state");
    in_cls[s] = true;
  }
  for (int s : cls)
    for (int j = 0; j < n; ++j)
      if (mu.rows()[s][j] > 0 && !in_cls[j])
        throw std::invalid_argument("restrict_to_class: class is not closed");

  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    if (in_cls[i]) {
      rows[i] = mu.rows()[i];
    } else {
      const auto& nx = S.successors(i);
      Rational p = Rational(1) / static_cast<long>(nx.size());
      for (int j : nx) rows[i][j] = p;
    }
  }

  const std::size_t k = cls.size();
  std::vector<std::vector<Rational>> A(k, std::vector<Rational>(k, Rational(0)));
  std::vector<Rational> b(k, Rational(0));
  for (std::size_t col = 0; col + 1 < k; ++col) {
    for (std::size_t i = 0; i < k; ++i) A[col][i] = mu.rows()[cls[i]][cls[col]];
    A[col][col] -= 1;
  }
  for (std::size_t i = 0; i < k; ++i) A[k - 1][i] = 1;
  b[k - 1] = 1;
  std::vector<Rational> pi = solve_linear(std::move(A), std::move(b));
  std::vector<Rational> stationary(n, Rational(0));
  for (std::size_t i = 0; i < k; ++i) stationary[cls[i]] = pi[i];
  return MarkovMeasure(S, std::move(rows), std::move(stationary));
}

namespace {

// Combined support with per-point signed discrepancy mu - nu.
std::vector<std::pair<PointRep, Rational>> discrepancies(const AtomicMeasure& mu,
                                                         const AtomicMeasure& nu) {
  std::map<PointRep, Rational> d;
  for (const auto& [x, w] : mu.atoms()) d[x] += w;
  for (const auto& [x, w] : nu.atoms()) d[x] -= w;
  return {d.begin(), d.end()};
}

}  // namespace

Rational total_variation(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu) {
  (void)S;
  Rational sum(0);
  for (const auto& [x, d] : discrepancies(mu, nu)) sum += abs(d);
  return sum / 2;
}

Rational w1_hierarchical(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu) {
  (void)S;
  auto diff = discrepancies(mu, nu);
  // Depth at which all distinct support points separate.
  std::size_t depth = 0;
  for (std::size_t i = 0; i < diff.size(); ++i)
    for (std::size_t j = i + 1; j < diff.size(); ++j) {
      const Rational d = dist(diff[i].first, diff[j].first);
      // d = 2^{-k}; separation needs k+1 symbols.
      std::size_t k = 0;
      Rational t = d;
      while (t < 1) {
        t *= 2;
        ++k;
      }
      depth = std::max(depth, k + 1);
    }
  Rational total(0);
  for (std::size_t j = 1; j < depth; ++j) {
    std::map<Word, Rational> level;
    for (const auto& [x, d] : diff) level[x.prefix(j)] += d;
    Rational layer(0);
    for (const auto& [w, d] : level) layer += abs(d);
    total += pow2(-static_cast<long>(j) - 1) * layer;
  }
  Rational tail(0);
  for (const auto& [x, d] : diff) tail += abs(d);
  total += pow2(-static_cast<long>(depth)) * tail;
  return total;
}

Rational w1_lp(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu) {
  (void)S;
  const auto& A = mu.atoms();
  const auto& B = nu.atoms();
  const std::size_t n = A.size(), m = B.size();
  if (n > 64 || m > 64) throw std::invalid_argument("w1_lp: support too large");
  std::vector<std::vector<Rational>> cost(n, std::vector<Rational>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) cost[i][j] = dist(A[i].first, B[j].first);
  std::vector<Rational> supply(n), demand(m);
  for (std::size_t i = 0; i < n; ++i) supply[i] = A[i].second;
  for (std::size_t j = 0; j < m; ++j) demand[j] = B[j].second;
  std::vector<std::vector<Rational>> flow(n, std::vector<Rational>(m, Rational(0)));

  const std::size_t V = n + m;
  auto remaining = [&] {
    Rational r(0);
    for (const Rational& s : supply) r += s;
    return r;
  };
  std::size_t guard = 4 * V * V + 16;
  while (remaining() > 0) {
    if (guard-- == 0) throw std::logic_error("w1_lp: augmentation did not terminate");
    // Bellman-Ford from all supplied sources over the residual graph.
    std::vector<std::optional<Rational>> dist_(V);
    std::vector<int> parent(V, -1);
    for (std::size_t i = 0; i < n; ++i)
      if (supply[i] > 0) dist_[i] = Rational(0);
    for (std::size_t pass = 0; pass < V; ++pass) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          if (dist_[i]) {
            Rational cand = *dist_[i] + cost[i][j];
            if (!dist_[n + j] || cand < *dist_[n + j]) {
              dist_[n + j] = cand;
              parent[n + j] = static_cast<int>(i);
              changed = true;
            }
          }
          if (dist_[n + j] && flow[i][j] > 0) {
            Rational cand = *dist_[n + j] - cost[i][j];
            if (!dist_[i] || cand < *dist_[i]) {
              dist_[i] = cand;
              parent[i] = static_cast<int>(n + j);
              changed = true;
            }
          }
        }
      if (!changed) break;
    }
    // Closest sink with demand.
    int sink = -1;
    for (std::size_t j = 0; j < m; ++j) {
      if (demand[j] == 0 || !dist_[n + j]) continue;
      if (sink < 0 || *dist_[n + j] < *dist_[n + sink]) sink = static_cast<int>(j);
    }
    if (sink < 0) throw std::logic_error("w1_lp: no augmenting path");
    // Recover the path and its bottleneck.
    std::vector<int> path;  // node ids ending at source
    int cur = static_cast<int>(n) + sink;
    path.push_back(cur);
    while (parent[cur] >= 0) {
      cur = parent[cur];
      path.push_back(cur);
    }
    Rational bottleneck = demand[sink];
    bottleneck = std::min(bottleneck, supply[path.back()]);
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      int to = path[t], from = path[t + 1];
      if (from >= static_cast<int>(n)) {
        // Backward edge sink -> source, capacity = current flow.
        bottleneck = std::min(bottleneck, flow[to][from - static_cast<int>(n)]);
      }
    }
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      int to = path[t], from = path[t + 1];
      if (from < static_cast<int>(n))
        flow[from][to - n] += bottleneck;
      else
        flow[to][from - static_cast<int>(n)] -= bottleneck;
    }
    supply[path.back()] -= bottleneck;
    demand[sink] -= bottleneck;
  }
  Rational total(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) total += flow[i][j] * cost[i][j];
  return total;
}

Rational w1(const Subshift& S, const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (mu.atoms().size() <= 64 && nu.atoms().size() <= 64) return w1_lp(S, mu, nu);
  return w1_hierarchical(S, mu, nu);
}

}  // namespace plab
