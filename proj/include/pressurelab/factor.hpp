// Sliding block codes between subshifts: application to points and
// words, pullback of covers and energies, pushforward of measures, and
// the per-n identity between the source and target pressures of a
// surjective code.
//
// By Curtis-Hedlund-Lyndon the continuous shift-commuting maps between
// subshifts are exactly the sliding block codes, so this class covers
// every factor map the rest of the library can meet.

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pressurelab/cover.hpp"
#include "pressurelab/energy.hpp"
#include "pressurelab/measure.hpp"
#include "pressurelab/pressure.hpp"
#include "pressurelab/subshift.hpp"

namespace plab {

class SlidingBlockCode {
 public:
  /// block_map must assign a target symbol to every admissible source
  /// word of the window length.  Validation checks that consecutive
  /// windows map to admissible target transitions, which makes every
  /// image word admissible.
  SlidingBlockCode(Subshift source, Subshift target, int window,
                   std::map<Word, Symbol> block_map);

  static SlidingBlockCode identity(const Subshift& S);
  /// Conjugacy onto the k-block recoding (window k).
  static SlidingBlockCode to_higher_block(const Subshift& S, int k);
  /// Inverse direction: project each block symbol to its first letter.
  static SlidingBlockCode from_higher_block(const Subshift& S, int k);

  const Subshift& source() const { return source_; }
  const Subshift& target() const { return target_; }
  int window() const { return window_; }

  Symbol map_symbol(const Word& w) const;  // |w| == window
  /// Image of a word of length >= window; result length |u| - window + 1.
  Word apply_word(const Word& u) const;
  PointRep apply(const PointRep& x) const;

  /// Every admissible target word of length <= max_len is an image
  /// word.  Sound only up to the checked length; callers report it.
  bool is_surjective_to_length(int max_len) const;

 private:
  Subshift source_, target_;
  int window_;
  std::map<Word, Symbol> block_map_;
};

CylSet pullback_set(const SlidingBlockCode& pi, const CylSet& a);

/// Preimage cover; elements with empty preimage are dropped (none when
/// the code is surjective).
Cover pullback_cover(const SlidingBlockCode& pi, const Cover& U);

/// Energy on the source whose value at an empirical measure equals the
/// target energy at the pushforward: inner functions compose with the
/// block map (window grows by window - 1), outer polynomials unchanged.
EnergyFunctional pullback_energy(const SlidingBlockCode& pi, const EnergyFunctional& E);

AtomicMeasure pushforward_measure(const SlidingBlockCode& pi, const AtomicMeasure& mu);

// Image of a Markov measure.  Exact cylinder marginals up to the
// requested depth are always produced; when some k-block Markov chain
// reproduces every checked marginal the fitted chain is returned
// (block_level = k, on the k-block recoding for k > 1), otherwise
// lossy is set and only the marginal table is available.
struct PushforwardMeasure {
  std::map<Word, Rational> marginals;  // positive masses, lengths 1..depth
  int depth = 0;
  int block_level = 0;
  std::optional<HigherBlock> block_system;  // set when block_level > 1
  std::optional<MarkovMeasure> markov;
  bool lossy = true;
};
PushforwardMeasure pushforward_measure(const SlidingBlockCode& pi, const MarkovMeasure& mu,
                                       int depth = 6);

// Per-n pressure identity for a surjective code: the source pressure of
// the pulled-back cover and energy equals the target pressure.
struct FactorPressureAudit {
  struct Row {
    int n = 0;
    LogValue source_value;
    LogValue target_value;
    bool equal = false;
  };
  std::vector<Row> rows;
  int surjectivity_checked_length = 0;  // word-level check horizon
  bool surjective_to_length = false;
  bool all_equal = true;
  std::optional<int> first_failure;
};
FactorPressureAudit factor_pressure_identity(const SlidingBlockCode& pi, const Cover& U,
                                             const EnergyFunctional& E, int n_lo, int n_hi,
                                             Precision prec = Precision::Float,
                                             const SearchCaps& caps = {},
                                             int surjectivity_check_length = 6);

}  // namespace plab
