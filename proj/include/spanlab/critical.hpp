#pragma once

// The critical number cr(G): the least l such that every A in G\{0} with
// |A| >= l spans G. Computed from the closed-form case table and by exact
// search, so the two can be compared.

#include <optional>
#include <string>
#include <vector>

#include "spanlab/group.hpp"
#include "spanlab/search.hpp"

namespace spanlab {

enum class CrCase { prime, special_case2, general_case3 };
std::string to_string(CrCase c);

struct CrFormula {
  int value = 0;
  CrCase which = CrCase::general_case3;
};

/// Requires |G| >= 3.
CrFormula cr_formula(const Group& g);

/// floor(sqrt(n)) for n >= 0.
int isqrt(long long n);
/// floor(2 sqrt(p - 2)), the prime-order critical number.
int floor_two_sqrt(int p_minus_2);

struct CrSearchOptions {
  bool orbit_reduction = true;  // single-factor specs only
  bool spanning_prune = true;
  int exact_max_order = 24;     // largest order searched without `extended`
  bool extended = false;
  SearchBudget budget;
  int threads = 1;
};

enum class SearchStatus { complete, budget_exceeded };
std::string to_string(SearchStatus s);

struct CrResult {
  GroupPtr group;
  int formula_value = 0;
  CrCase formula_case = CrCase::general_case3;
  std::optional<int> searched_value;
  /// Lexicographically least largest non-spanning set among the searched targets.
  std::optional<ElementSet> witness_max_nonspanning;
  SearchStatus status = SearchStatus::complete;
  std::uint64_t nodes = 0;
  int targets_searched = 0;
  double seconds = 0;
};

/// 1 + max{|A| : A in G\{0}, Sigma(A) != G}, by per-target branch and bound.
CrResult cr_search(const GroupPtr& g, const CrSearchOptions& opt = {});

struct TheoremARow {
  std::vector<int> invariant_factors;
  int order = 0;
  int smallest_prime = 0;
  CrResult result;
  bool match = false;
};

struct TheoremAReport {
  int max_order = 0;
  std::vector<TheoremARow> rows;
  bool all_match = true;
  double seconds = 0;
};

/// Searches every abelian group (one per isomorphism class) with
/// 3 <= |G| <= max_order and compares with cr_formula.
TheoremAReport verify_theorem_a(int max_order, const CrSearchOptions& opt = {});

}  // namespace spanlab
