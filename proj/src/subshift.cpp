// Subshift and eventually periodic point implementation.

#include "pressurelab/subshift.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace plab {

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol a : w) {
    if (a < 0 || a > 9) throw std::invalid_argument("word_to_string: symbol out of digit range");
    s.push_back(static_cast<char>('0' + a));
  }
  return s;
}

Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("word_from_string: non-digit character");
    w.push_back(c - '0');
  }
  return w;
}

Subshift::Subshift(int alphabet_size, std::vector<std::vector<bool>> allowed,
                   bool one_sided)
    : alphabet_(alphabet_size), one_sided_(one_sided), allowed_(std::move(allowed)) {
  if (alphabet_ < 1) throw std::invalid_argument("Subshift: alphabet must be nonempty");
  if (static_cast<int>(allowed_.size()) != alphabet_)
    throw std::invalid_argument("Subshift: transition matrix has wrong row count");
  for (const auto& row : allowed_)
    if (static_cast<int>(row.size()) != alphabet_)
      throw std::invalid_argument("Subshift: transition matrix has wrong column count");
  succ_.resize(alphabet_);
  pred_.resize(alphabet_);
  for (Symbol a = 0; a < alphabet_; ++a)
    for (Symbol b = 0; b < alphabet_; ++b)
      if (allowed_[a][b]) {
        succ_[a].push_back(b);
        pred_[b].push_back(a);
      }
  for (Symbol a = 0; a < alphabet_; ++a) {
    if (succ_[a].empty())
      throw std::invalid_argument("Subshift: symbol " + std::to_string(a) + " has no successor");
    if (pred_[a].empty())
      throw std::invalid_argument("Subshift: symbol " + std::to_string(a) + " has no predecessor");
  }
}

Subshift Subshift::full_shift(int alphabet_size) {
  std::vector<std::vector<bool>> all(alphabet_size, std::vector<bool>(alphabet_size, true));
  return Subshift(alphabet_size, std::move(all));
}

bool Subshift::is_admissible(const Word& w) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] >= alphabet_) return false;
    if (i + 1 < w.size() && !allowed_[w[i]][w[i + 1]]) return false;
  }
  return true;
}

std::uint64_t Subshift::word_count(int length) const {
  if (length < 0) throw std::invalid_argument("word_count: negative length");
  if (length == 0) return 1;
  std::vector<std::uint64_t> cnt(alphabet_, 1);
  for (int l = 1; l < length; ++l) {
    std::vector<std::uint64_t> nxt(alphabet_, 0);
    for (Symbol a = 0; a < alphabet_; ++a)
      for (Symbol b : succ_[a]) nxt[a] += cnt[b];
    cnt.swap(nxt);
  }
  std::uint64_t total = 0;
  for (Symbol a = 0; a < alphabet_; ++a) total += cnt[a];
  return total;
}

bool Subshift::is_mixing() const {
  // A^p positive for some p <= (A-1)^2 + 1 iff primitive.
  const int n = alphabet_;
  std::vector<std::vector<bool>> m = allowed_;
  auto all_positive = [&] {
    for (const auto& row : m)
      for (bool v : row)
        if (!v) return false;
    return true;
  };
  int limit = (n - 1) * (n - 1) + 1;
  for (int p = 1; p <= limit; ++p) {
    if (all_positive()) return true;
    std::vector<std::vector<bool>> nx(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (m[a][b])
          for (int c = 0; c < n; ++c)
            if (allowed_[b][c]) nx[a][c] = true;
    m.swap(nx);
  }
  return all_positive();
}

std::vector<Word> enumerate_words(const Subshift& S, int length) {
  if (length < 0) throw std::invalid_argument("enumerate_words: negative length");
  std::vector<Word> out;
  if (length == 0) {
    out.push_back({});
    return out;
  }
  Word cur;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == length) {
      out.push_back(cur);
      return;
    }
    if (depth == 0) {
      for (Symbol a = 0; a < S.alphabet_size(); ++a) {
        cur.push_back(a);
        self(self, 1);
        cur.pop_back();
      }
    } else {
      for (Symbol b : S.successors(cur.back())) {
        cur.push_back(b);
        self(self, depth + 1);
        cur.pop_back();
      }
    }
  };
  rec(rec, 0);
  return out;
}

namespace {

// Smallest d dividing |c| with c = (c[0..d))^{|c|/d}.
std::size_t primitive_period(const Word& c) {
  for (std::size_t d = 1; d <= c.size(); ++d) {
    if (c.size() % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < c.size() && ok; ++i)
      if (c[i] != c[i - d]) ok = false;
    if (ok) return d;
  }
  return c.size();
}

}  // namespace

PointRep::PointRep(Word preperiod, Word cycle)
    : preperiod_(std::move(preperiod)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw std::invalid_argument("PointRep: empty cycle");
  std::size_t d = primitive_period(cycle_);
  cycle_.resize(d);
  // Absorb trailing preperiod symbols that extend the cycle backwards.
  while (!preperiod_.empty() && preperiod_.back() == cycle_.back()) {
    preperiod_.pop_back();
    std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
  }
}

Symbol PointRep::at(std::size_t i) const {
  if (i < preperiod_.size()) return preperiod_[i];
  return cycle_[(i - preperiod_.size()) % cycle_.size()];
}

Word PointRep::prefix(std::size_t length) const {
  Word w(length);
  for (std::size_t i = 0; i < length; ++i) w[i] = at(i);
  return w;
}

std::string PointRep::str() const {
  return word_to_string(preperiod_) + "(" + word_to_string(cycle_) + ")";
}

bool is_valid_point(const Subshift& S, const PointRep& x) {
  Word w = x.prefix(x.preperiod().size() + x.cycle().size() + 1);
  return S.is_admissible(w);
}

PointRep shift(const PointRep& x) {
  if (!x.preperiod().empty()) {
    Word p(x.preperiod().begin() + 1, x.preperiod().end());
    return PointRep(std::move(p), x.cycle());
  }
  Word c = x.cycle();
  std::rotate(c.begin(), c.begin() + 1, c.end());
  return PointRep(std::move(c));
}

PointRep shift_n(const PointRep& x, int n) {
  PointRep y = x;
  for (int i = 0; i < n; ++i) y = shift(y);
  return y;
}

PointRep shift_preimage(const Subshift& S, const PointRep& x) {
  Symbol first = x.at(0);
  Symbol a = S.predecessors(first).front();
  Word p;
  p.push_back(a);
  p.insert(p.end(), x.preperiod().begin(), x.preperiod().end());
  return PointRep(std::move(p), x.cycle());
}

namespace {

std::size_t comparison_bound(const PointRep& x, const PointRep& y) {
  std::size_t pre = std::max(x.preperiod().size(), y.preperiod().size());
  std::size_t l = std::lcm(x.cycle().size(), y.cycle().size());
  return pre + l + 1;
}

}  // namespace

Rational dist(const PointRep& x, const PointRep& y) {
  std::size_t bound = comparison_bound(x, y);
  for (std::size_t k = 0; k < bound; ++k)
    if (x.at(k) != y.at(k)) return pow2(-static_cast<long>(k));
  return Rational(0);
}

bool points_equal(const PointRep& x, const PointRep& y) {
  std::size_t bound = comparison_bound(x, y);
  for (std::size_t k = 0; k < bound; ++k)
    if (x.at(k) != y.at(k)) return false;
  return true;
}

int bowen_resolution(int n, int m) {
  if (n < 1) throw std::invalid_argument("bowen_resolution: n must be >= 1");
  if (m < 0) throw std::invalid_argument("bowen_resolution: m must be >= 0");
  return n + m;
}

PointRep complete_to_point(const Subshift& S, const Word& w) {
  if (!S.is_admissible(w)) throw std::invalid_argument("complete_to_point: inadmissible word");
  Word path = w;
  std::vector<int> seen_at(S.alphabet_size(), -1);
  Symbol cur;
  std::size_t start;
  if (path.empty()) {
    cur = 0;
    path.push_back(cur);
    start = 0;
  } else {
    cur = path.back();
    start = path.size() - 1;
  }
  seen_at[cur] = static_cast<int>(start);
  for (;;) {
    Symbol nxt = S.successors(cur).front();
    if (seen_at[nxt] >= 0) {
      std::size_t i = static_cast<std::size_t>(seen_at[nxt]);
      Word pre(path.begin(), path.begin() + i);
      Word cyc(path.begin() + i, path.end());
      return PointRep(std::move(pre), std::move(cyc));
    }
    path.push_back(nxt);
    seen_at[nxt] = static_cast<int>(path.size() - 1);
    cur = nxt;
  }
}

HigherBlock higher_block(const Subshift& S, int k) {
  if (k < 1) throw std::invalid_argument("higher_block: k must be >= 1");
  std::vector<Word> words = enumerate_words(S, k);
  int n = static_cast<int>(words.size());
  std::vector<std::vector<bool>> allowed(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Overlap: words[i][1..k) == words[j][0..k-1) and the joint
      // (k+1)-word admissible; with memory 1 the overlap plus the single
      // extra transition words[i][0] -> words[j][0] (k = 1) or the
      // overlap itself (k > 1) settle admissibility.
      bool ok = true;
      for (int t = 0; t + 1 < k && ok; ++t)
        if (words[i][t + 1] != words[j][t]) ok = false;
      if (ok) {
        if (k == 1)
          ok = S.allows(words[i][0], words[j][0]);
        else
          ok = S.allows(words[i][k - 1], words[j][k - 1]);
      }
      allowed[i][j] = ok;
    }
  return HigherBlock{Subshift(n, std::move(allowed), S.one_sided()), std::move(words)};
}

}  // namespace plab
