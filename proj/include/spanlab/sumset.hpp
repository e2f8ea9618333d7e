#pragma once

// Subset sums, restricted h-fold sums and pairwise sumsets by bitset DP.

#include <vector>

#include "spanlab/group.hpp"

namespace spanlab {

/// A sequence of group elements; repetition allowed. A set is the
/// squarefree special case.
struct Sequence {
  GroupPtr group;
  std::vector<int> terms;

  static Sequence from_set(const ElementSet& s) { return Sequence{s.group_ptr(), s.elements()}; }
  int length() const { return static_cast<int>(terms.size()); }
};

/// Sums over nonempty subsequences; {0} for the empty sequence. 0 is in the
/// result of a nonempty sequence iff some nonempty subsequence sums to 0.
ElementSet subset_sums(const Sequence& t);
ElementSet subset_sums(const ElementSet& a);

/// subset_sums(t) together with 0.
ElementSet subset_sums_with_zero(const Sequence& t);
ElementSet subset_sums_with_zero(const ElementSet& a);

/// Sums over index subsets of size exactly h, 0 <= h <= |t|; {0} for h = 0.
ElementSet restricted_sums(const Sequence& t, int h);
ElementSet restricted_sums(const ElementSet& a, int h);

/// A + B for nonempty A, B.
ElementSet sumset(const ElementSet& a, const ElementSet& b);

bool spans(const ElementSet& a);
/// Sigma(a) equals the subgroup a generates. a must be nonempty.
bool is_complete(const ElementSet& a);

/// In-place step sums |= {x} | (sums + x). scratch needs g.words() words.
void extend_subset_sums(const Group& g, Word* sums, int x, Word* scratch);

}  // namespace spanlab
