#include "spanlab/critical.hpp"

#include <algorithm>
#include <cmath>

namespace spanlab {

std::string to_string(CrCase c) {
  switch (c) {
    case CrCase::prime: return "prime";
    case CrCase::special_case2: return "special_case2";
    case CrCase::general_case3: return "general_case3";
  }
  return "?";
}

std::string to_string(SearchStatus s) { return s == SearchStatus::complete ? "complete" : "budget_exceeded"; }

int isqrt(long long n) {
  if (n < 0) throw Error("isqrt of a negative number");
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<int>(r);
}

int floor_two_sqrt(int p_minus_2) { return isqrt(4LL * p_minus_2); }

CrFormula cr_formula(const Group& g) {
  const int n = g.order();
  if (n < 3) throw Error("cr(G) is defined here for |G| >= 3, got " + std::to_string(n));
  const int p = smallest_prime_divisor(n);
  if (n == p) return {floor_two_sqrt(p - 2), CrCase::prime};

  static const std::vector<std::vector<int>> kSpecial = {{2, 2}, {3, 3}, {4}, {6}, {2, 4}, {8}};
  const auto inv = invariant_factors(g.cyclic_orders());
  const bool listed = std::find(kSpecial.begin(), kSpecial.end(), inv) != kSpecial.end();
  const int q = n / p;
  const bool window = q % 2 == 1 && is_prime(q) && 2 < p && p < q && q <= p + floor_two_sqrt(p - 2) + 1;
  if (listed || window) return {q + p - 1, CrCase::special_case2};
  return {q + p - 2, CrCase::general_case3};
}

CrResult cr_search(const GroupPtr& g, const CrSearchOptions& opt) {
  CrResult res;
  res.group = g;
  const CrFormula f = cr_formula(*g);
  res.formula_value = f.value;
  res.formula_case = f.which;
  if (g->order() > opt.exact_max_order && !opt.extended) {
    res.status = SearchStatus::budget_exceeded;
    return res;
  }

  BudgetClock clock(opt.budget);
  const std::vector<int> targets = search_targets(*g, opt.orbit_reduction);
  res.targets_searched = static_cast<int>(targets.size());

  // Phase 1: the maximum size, with a bound shared across targets.
  SharedBest best;
  const MaxAvoidOptions mopt{opt.spanning_prune};
  parallel_for(static_cast<int>(targets.size()), opt.threads,
               [&](int i) { max_avoiding(*g, targets[i], mopt, best, clock); });
  if (clock.exhausted()) {
    res.status = SearchStatus::budget_exceeded;
    res.nodes = clock.nodes();
    res.seconds = clock.elapsed_seconds();
    return res;
  }
  const int max_size = best.get();

  // Phase 2: per target, the first set of that size in DFS order is the
  // lexicographically least one; keep the least over targets.
  std::vector<std::optional<std::vector<int>>> firsts(targets.size());
  parallel_for(static_cast<int>(targets.size()), opt.threads,
               [&](int i) { firsts[i] = first_avoiding(*g, targets[i], max_size, clock); });
  if (clock.exhausted()) {
    res.status = SearchStatus::budget_exceeded;
    res.nodes = clock.nodes();
    res.seconds = clock.elapsed_seconds();
    return res;
  }
  std::optional<std::vector<int>> witness;
  for (const auto& w : firsts)
    if (w && (!witness || *w < *witness)) witness = w;
  if (!witness) throw Error("internal: no witness of the maximum size was found");

  res.searched_value = max_size + 1;
  res.witness_max_nonspanning = ElementSet(g, *witness);
  res.nodes = clock.nodes();
  res.seconds = clock.elapsed_seconds();
  return res;
}

TheoremAReport verify_theorem_a(int max_order, const CrSearchOptions& opt) {
  TheoremAReport rep;
  rep.max_order = max_order;
  BudgetClock timer({});
  for (int n = 3; n <= max_order; ++n) {
    for (const auto& inv : abelian_groups_of_order(n)) {
      TheoremARow row;
      row.invariant_factors = inv;
      row.order = n;
      row.smallest_prime = smallest_prime_divisor(n);
      CrSearchOptions o = opt;
      o.extended = true;
      row.result = cr_search(Group::make(inv), o);
      row.match = row.result.searched_value && *row.result.searched_value == row.result.formula_value;
      rep.all_match = rep.all_match && row.match;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.seconds = timer.elapsed_seconds();
  return rep;
}

}  // namespace spanlab
