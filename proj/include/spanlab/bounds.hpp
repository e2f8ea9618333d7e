#pragma once

// Executable forms of the classical sumset and subset-sum bounds used in the
// structure theory of non-spanning sets, plus the helpers they rely on.
// Each check_* evaluates the statement's hypothesis on a concrete instance
// and, when it applies, whether the conclusion holds.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spanlab/group.hpp"
#include "spanlab/sumset.hpp"

namespace spanlab {

/// 2 for l = 0, 1 for l = 1, 0 for l >= 2.
int epsilon(int l);
/// 0 for m = 0, 1 for m > 0.
int delta(int m);

struct APWitness {
  bool is_ap = false;
  int first = 0;
  int difference = 0;
};

/// Every d in [1, p-1] such that b = {a + i d : 0 <= i < |b|} for some a.
/// b must be a nonempty subset of a single-factor group of prime order.
std::vector<int> ap_differences(const ElementSet& b);

/// Canonical witness: least difference in [1, (p-1)/2] (difference 1 when
/// every difference works), first = the progression's starting point.
APWitness detect_ap(const ElementSet& b);

struct BoundReport {
  bool applicable = true;  // hypothesis met; otherwise no claim is made
  long actual = 0;
  long bound = 0;
  bool holds = true;       // !applicable || conclusion verified
  std::string note;
};

/// |A_1 + ... + A_h| >= min(p, sum |A_i| - h + 1) over Z_p.
BoundReport check_cauchy_davenport(std::span<const ElementSet> sets);

/// How "pairwise distinct differences" is decided for progressions.
enum class DifferenceRule {
  /// Differences may be chosen from {d_i, -d_i} independently, so two
  /// progressions with differences d and -d count as distinct.
  sign_tuple,
  /// Progressions must use pairwise distinct classes {d, -d}.
  distinct_classes,
};

/// |A_1 + ... + A_h| >= min(p, sum |A_i| - 1) over Z_p when all sets but at
/// most one are progressions with pairwise distinct nonzero differences.
/// applicable reports whether that precondition was met.
BoundReport check_diderrich(std::span<const ElementSet> sets, DifferenceRule rule = DifferenceRule::sign_tuple);

struct VosperReport {
  int sumset_size = 0;
  int threshold = 0;        // min(p, |B1| + |B2|)
  bool triggered = false;   // sumset_size < threshold
  bool both_ap = false;
  bool differences_match = false;
  bool holds = true;        // !triggered || (both_ap && differences_match)
  bool below_p_minus_1 = false;  // sumset_size <= p - 2
  APWitness w1, w2;
};

/// Critical pairs over Z_p, p an odd prime, 2 <= |B_i| <= p - 2.
VosperReport check_vosper(const ElementSet& b1, const ElementSet& b2);

struct DichotomyReport {
  int sigma0_size = 0;
  int bound_i = 0;          // min(|G| - 3, 3|A| - 3)
  bool branch_i = false;
  bool branch_ii = false;
  std::optional<SubgroupHandle> subgroup;  // realizes branch (ii)
  bool holds = false;
};

/// 0 not in A, |A| >= 14: |Sigma0(A)| >= min(|G|-3, 3|A|-3) or some proper
/// subgroup H has |A cap H| >= |A| - 1.
DichotomyReport check_hamidoune_dichotomy(const ElementSet& a);

struct ThreeFactsReport {
  std::optional<BoundReport> restricted_bound;   // |Sigma_h(A)| >= min(p, h|A| - h^2 + 1)
  std::optional<BoundReport> half_size_cover;    // |A| = floor(sqrt(4p-7)), h = floor(|A|/2) => Sigma_h(A) = Z_p
  std::optional<BoundReport> critical_cover;     // |A| >= floor(2 sqrt(p-2)), 0 not in A => Sigma(A) = Z_p
  bool holds = true;
};

/// A nonempty in Z_p; the restricted bound is evaluated for the given h,
/// which must lie in [1, |A|].
ThreeFactsReport check_three_facts(const ElementSet& a, int h);

/// |A| + |B| >= |G| + 1 => A + B = G.
BoundReport check_folk_lemma(const ElementSet& a, const ElementSet& b);

/// A nonempty, 0 not in A: |Sigma(A)| >= min(|<A>|, 2|A| - 1).
BoundReport check_subset_sum_growth(const ElementSet& a);

/// A in Z_p \ {0}: |Sigma0(A)| >= min(p, 2|A| - 1 + epsilon(|A|)).
BoundReport check_prime_zero_sums(const ElementSet& a);

struct SequenceSumsReport {
  BoundReport bound;        // |Sigma0(T)| >= min(p, |T| + 1)
  bool equality = false;
  bool long_sequence = false;   // |T| >= p - 1
  bool plus_minus_support = false;  // supp(T) in {g, -g}
  bool holds = true;        // bound and (equality <=> long_sequence or plus_minus_support)
};

/// T over Z_p \ {0}, |T| >= 2.
SequenceSumsReport check_sequence_sums(const Sequence& t);

/// Throws unless g is a single-factor group of prime order.
void require_prime_cyclic(const Group& g);

}  // namespace spanlab
