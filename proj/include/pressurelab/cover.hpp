// Clopen sets as finite unions of cylinders, plus covers, partitions,
// joins under shift preimages, generated partitions and cover
// combinatorics (minimal subcovers, diameter, Lebesgue number).
//
// A CylSet at resolution r is a set of admissible r-words; the set it
// denotes is the union of their cylinders.  Canonical form uses the
// least resolution at which the set is such a union, so structural
// equality is set equality.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pressurelab/subshift.hpp"

namespace plab {

class CylSet {
 public:
  /// Canonicalizes: sorts, dedupes, checks admissibility, then lowers
  /// the resolution while every word group is saturated.
  CylSet(const Subshift& S, int resolution, std::vector<Word> words);

  static CylSet whole_space(const Subshift& S);
  static CylSet empty_set(const Subshift& S);
  static CylSet cylinder(const Subshift& S, const Word& w);

  int resolution() const { return resolution_; }
  const std::vector<Word>& words() const { return words_; }
  bool is_empty() const { return words_.empty(); }
  bool is_whole_space() const { return resolution_ == 0 && !words_.empty(); }

  /// Member words at a resolution r >= resolution(): all admissible
  /// r-extensions of the stored words.
  std::vector<Word> words_at(const Subshift& S, int r) const;

  /// Does the cylinder of w (|w| >= resolution needed? any |w| works:
  /// shorter words test containment of the whole cylinder) meet/lie in
  /// this set?  contains_cylinder requires [w] subset of the set.
  bool contains_cylinder(const Subshift& S, const Word& w) const;
  bool contains(const PointRep& x) const;

  bool operator==(const CylSet& o) const {
    return resolution_ == o.resolution_ && words_ == o.words_;
  }
  bool operator<(const CylSet& o) const {
    if (resolution_ != o.resolution_) return resolution_ < o.resolution_;
    return words_ < o.words_;
  }

  std::string str() const;

 private:
  CylSet() : resolution_(0) {}
  int resolution_;
  std::vector<Word> words_;  // sorted, unique, admissible
};

CylSet set_union(const Subshift& S, const CylSet& a, const CylSet& b);
CylSet set_intersect(const Subshift& S, const CylSet& a, const CylSet& b);
CylSet set_complement(const Subshift& S, const CylSet& a);
CylSet set_difference(const Subshift& S, const CylSet& a, const CylSet& b);
bool is_subset(const Subshift& S, const CylSet& a, const CylSet& b);
/// Preimage T^{-1}A: prepend every admissible symbol.
CylSet shift_preimage(const Subshift& S, const CylSet& a);

// A cover: finitely many nonempty CylSets whose union is the whole
// space.  Element order is kept as given (it is part of bookkeeping for
// joins); use validate_cover to check the union property.
struct Cover {
  std::vector<CylSet> elements;
};

// A partition: a cover with pairwise disjoint elements.
struct Partition {
  std::vector<CylSet> classes;
  Cover as_cover() const { return Cover{classes}; }
};

void validate_cover(const Subshift& S, const Cover& U);
void validate_partition(const Subshift& S, const Partition& P);

/// Largest resolution among elements (0 for the trivial cover).
int cover_resolution(const Cover& U);

/// U refines V: every element of U lies inside some element of V.
bool is_finer(const Subshift& S, const Cover& U, const Cover& V);

/// Pairwise intersections, empties dropped, order (i, j) lexicographic.
Cover join(const Subshift& S, const Cover& U, const Cover& V);

// Iterated join U_0^{n-1} = U v T^{-1}U v ... v T^{-(n-1)}U, keeping the
// choice sequence that produced each nonempty element.
struct JoinedCover {
  int base_size = 0;
  int steps = 0;  // n
  std::vector<CylSet> elements;
  std::vector<std::vector<int>> choices;  // parallel to elements
  Cover as_cover() const { return Cover{elements}; }
};
JoinedCover iterated_join(const Subshift& S, const Cover& U, int n);

// The partition generated by a finite family: atoms are the nonempty
// intersections over membership patterns.  homes[i] lists the indices of
// the family elements containing atom i.  Atoms sorted by CylSet order.
struct GeneratedPartition {
  Partition partition;
  std::vector<std::vector<int>> homes;
};
GeneratedPartition generated_partition(const Subshift& S, const std::vector<CylSet>& family);

/// All partitions refining the cover: each atom of the generated
/// partition is assigned to one of its homes and classes with the same
/// assignment merge.  Calls fn(partition, assignment) for every
/// assignment (assignment[i] = home chosen for atom i, an index into
/// family).  Returns the number of assignments visited.
std::uint64_t enumerate_assignments(
    const Subshift& S, const std::vector<CylSet>& family,
    const std::function<void(const Partition&, const std::vector<int>&)>& fn);

/// Cardinality of a minimal subcover, exact (branch and bound over the
/// atom incidence structure).
int minimal_subcover_count(const Subshift& S, const Cover& U);

// Exact cover geometry.  Diameter: max of 2^{-k} over first-difference
// levels inside the union (0 for singletons).  Lebesgue number: largest
// 2^{-k} such that every admissible k-cylinder lies inside one element;
// for this metric every ball is a cylinder, so scanning levels is exact.
struct CoverGeometry {
  Rational diameter;       // max over elements
  Rational lebesgue;       // 2^{-m_leb}
  int diameter_level;      // diameter == 2^{-diameter_level}, or -1 when 0
  int lebesgue_level;
};
CoverGeometry cover_geometry(const Subshift& S, const Cover& U);

Rational set_diameter(const Subshift& S, const CylSet& a);

}  // namespace plab
