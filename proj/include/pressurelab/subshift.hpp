// Subshifts of finite type over a finite alphabet, admissible words,
// eventually periodic points, the shift map and the 2^{-k} metric.
//
// The phase space is the set of one-sided sequences avoiding forbidden
// transitions (memory 1; longer memory via higher-block recoding).
// Eventually periodic points (preperiod word + repeating cycle) are the
// computable stand-ins for arbitrary points: every cylinder contains
// one, and equality/distance are decidable for them.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pressurelab/numeric.hpp"

namespace plab {

using Symbol = int;
using Word = std::vector<Symbol>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

class Subshift {
 public:
  // allowed[a][b] == true iff the transition a -> b is admissible.
  // Every symbol must have at least one successor and one predecessor
  // (the shift is then onto and the word sets are nonempty).
  Subshift(int alphabet_size, std::vector<std::vector<bool>> allowed,
           bool one_sided = true);

  static Subshift full_shift(int alphabet_size);

  int alphabet_size() const { return alphabet_; }
  bool one_sided() const { return one_sided_; }
  bool allows(Symbol a, Symbol b) const { return allowed_[a][b]; }
  const std::vector<Symbol>& successors(Symbol a) const { return succ_[a]; }
  const std::vector<Symbol>& predecessors(Symbol b) const { return pred_[b]; }

  bool is_admissible(const Word& w) const;

  /// Number of admissible words of length L (L >= 0).
  std::uint64_t word_count(int length) const;

  /// True iff the transition matrix is primitive (irreducible and
  /// aperiodic), i.e. the SFT is topologically mixing.
  bool is_mixing() const;

  bool operator==(const Subshift& o) const {
    return alphabet_ == o.alphabet_ && allowed_ == o.allowed_ && one_sided_ == o.one_sided_;
  }

 private:
  int alphabet_;
  bool one_sided_;
  std::vector<std::vector<bool>> allowed_;
  std::vector<std::vector<Symbol>> succ_, pred_;
};

/// Exactly the admissible words of length L, lexicographic. L = 0 gives
/// the empty word.
std::vector<Word> enumerate_words(const Subshift& S, int length);

// Eventually periodic point  preperiod . cycle^infinity.  Stored in the
// unique canonical form: primitive cycle, preperiod not absorbable into
// the cycle.  Structural equality of canonical forms is sequence
// equality.
class PointRep {
 public:
  PointRep(Word preperiod, Word cycle);
  explicit PointRep(Word cycle) : PointRep(Word{}, std::move(cycle)) {}

  const Word& preperiod() const { return preperiod_; }
  const Word& cycle() const { return cycle_; }

  Symbol at(std::size_t i) const;
  Word prefix(std::size_t length) const;

  bool operator==(const PointRep& o) const {
    return preperiod_ == o.preperiod_ && cycle_ == o.cycle_;
  }
  /// Lexicographic on the canonical (preperiod, cycle) pair; a total
  /// order used as a map key, not the metric order.
  bool operator<(const PointRep& o) const {
    if (preperiod_ != o.preperiod_) return preperiod_ < o.preperiod_;
    return cycle_ < o.cycle_;
  }

  std::string str() const;

 private:
  Word preperiod_;
  Word cycle_;  // nonempty, primitive
};

bool is_valid_point(const Subshift& S, const PointRep& x);

/// The shift map T: drops the first symbol.
PointRep shift(const PointRep& x);
PointRep shift_n(const PointRep& x, int n);

/// Some shift-preimage of x (first admissible predecessor symbol).
PointRep shift_preimage(const Subshift& S, const PointRep& x);

/// d(x, y) = 2^{-k}, k the first index of disagreement; 0 iff equal.
Rational dist(const PointRep& x, const PointRep& y);

/// Decidable equality of the represented sequences (prefix comparison up
/// to max preperiod + lcm of cycle lengths; equivalent to canonical
/// structural equality, kept as an independent route for tests).
bool points_equal(const PointRep& x, const PointRep& y);

/// Prefix length r = n + m such that the Bowen ball B_n(x, 2^{-m}) is
/// exactly the cylinder [x_0 .. x_{r-1}].  Requires n >= 1, m >= 0.
int bowen_resolution(int n, int m);

/// Deterministic extension of an admissible word to an eventually
/// periodic point: follow least successors until a symbol repeats.
PointRep complete_to_point(const Subshift& S, const Word& w);

// Higher-block recoding: alphabet = admissible k-words, transitions by
// overlap.  block_words[i] is the source k-word of recoded symbol i.
struct HigherBlock {
  Subshift recoded;
  std::vector<Word> block_words;
};
HigherBlock higher_block(const Subshift& S, int k);

}  // namespace plab
