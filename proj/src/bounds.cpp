#include "spanlab/bounds.hpp"

#include <algorithm>
#include <set>

#include "spanlab/critical.hpp"

namespace spanlab {

int epsilon(int l) {
  if (l < 0) throw Error("epsilon is defined for l >= 0");
  return l == 0 ? 2 : l == 1 ? 1 : 0;
}

int delta(int m) {
  if (m < 0) throw Error("delta is defined for m >= 0");
  return m == 0 ? 0 : 1;
}

void require_prime_cyclic(const Group& g) {
  if (!g.is_cyclic() || !is_prime(g.order())) {
    throw Error("expected Z_p for a prime p, got " + g.name());
  }
}

namespace {

void require_same(std::span<const ElementSet> sets) {
  if (sets.empty()) throw Error("empty list of sets");
  require_prime_cyclic(sets[0].group());
  for (const auto& s : sets) {
    if (s.empty()) throw Error("sets must be nonempty");
    if (!s.group().same_as(sets[0].group())) throw Error("sets belong to different groups");
  }
}

int iterated_sumset_size(std::span<const ElementSet> sets) {
  ElementSet acc = sets[0];
  for (std::size_t i = 1; i < sets.size(); ++i) acc = sumset(acc, sets[i]);
  return acc.size();
}

// Kuhn's augmenting paths: can every row be matched to a distinct value?
bool has_system_of_distinct_representatives(const std::vector<std::vector<int>>& rows, int values) {
  std::vector<int> owner(values, -1);
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    std::vector<char> seen(values, 0);
    auto augment = [&](auto&& self, int row) -> bool {
      for (int v : rows[row]) {
        if (seen[v]) continue;
        seen[v] = 1;
        if (owner[v] < 0 || self(self, owner[v])) {
          owner[v] = row;
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, r)) return false;
  }
  return true;
}

}  // namespace

std::vector<int> ap_differences(const ElementSet& b) {
  require_prime_cyclic(b.group());
  if (b.empty()) throw Error("progression test needs a nonempty set");
  const int p = b.group().order();
  std::vector<int> out;
  if (b.size() == p) {
    for (int d = 1; d < p; ++d) out.push_back(d);
    return out;
  }
  // b is a progression of difference d iff it forms a single run along the
  // cycle 0, d, 2d, ...: exactly one member has its predecessor missing.
  for (int d = 1; d < p; ++d)
    if ((b - b.translated(d)).size() == 1) out.push_back(d);
  return out;
}

APWitness detect_ap(const ElementSet& b) {
  const auto diffs = ap_differences(b);
  if (diffs.empty()) return {};
  const int p = b.group().order();
  int d = diffs.front();
  for (int c : diffs)
    if (c <= (p - 1) / 2) {
      d = c;
      break;
    }
  if (b.size() >= p - 1 || b.size() == 1) d = 1;
  const int first = b.size() == p ? 0 : (b - b.translated(d)).first();
  return {true, first, d};
}

BoundReport check_cauchy_davenport(std::span<const ElementSet> sets) {
  require_same(sets);
  const int p = sets[0].group().order();
  long total = 0;
  for (const auto& s : sets) total += s.size();
  BoundReport r;
  r.actual = iterated_sumset_size(sets);
  r.bound = std::min<long>(p, total - static_cast<long>(sets.size()) + 1);
  r.holds = r.actual >= r.bound;
  return r;
}

BoundReport check_diderrich(std::span<const ElementSet> sets, DifferenceRule rule) {
  require_same(sets);
  const int p = sets[0].group().order();
  const int h = static_cast<int>(sets.size());
  std::vector<std::vector<int>> diffs(h);
  for (int i = 0; i < h; ++i) diffs[i] = ap_differences(sets[i]);

  bool met = false;
  for (int exception = -1; exception < h && !met; ++exception) {
    std::vector<std::vector<int>> rows;
    bool all_ap = true;
    for (int i = 0; i < h && all_ap; ++i) {
      if (i == exception) continue;
      if (diffs[i].empty()) {
        all_ap = false;
        break;
      }
      std::set<int> values;
      for (int d : diffs[i]) values.insert(rule == DifferenceRule::sign_tuple ? d : std::min(d, p - d));
      rows.emplace_back(values.begin(), values.end());
    }
    met = all_ap && has_system_of_distinct_representatives(rows, p);
  }

  BoundReport r;
  long total = 0;
  for (const auto& s : sets) total += s.size();
  r.bound = std::min<long>(p, total - 1);
  r.actual = iterated_sumset_size(sets);
  r.applicable = met;
  r.holds = !met || r.actual >= r.bound;
  if (!met) r.note = "precondition not met";
  return r;
}

VosperReport check_vosper(const ElementSet& b1, const ElementSet& b2) {
  const ElementSet pair[] = {b1, b2};
  require_same(pair);
  const int p = b1.group().order();
  if (p < 3) throw Error("critical pairs need an odd prime");
  for (const auto& b : pair)
    if (b.size() < 2 || b.size() > p - 2) throw Error("critical pair sets need 2 <= |B| <= p - 2");
  VosperReport r;
  r.sumset_size = sumset(b1, b2).size();
  r.threshold = std::min(p, b1.size() + b2.size());
  r.triggered = r.sumset_size < r.threshold;
  r.below_p_minus_1 = r.sumset_size <= p - 2;
  r.w1 = detect_ap(b1);
  r.w2 = detect_ap(b2);
  if (r.triggered) {
    const auto d1 = ap_differences(b1), d2 = ap_differences(b2);
    r.both_ap = !d1.empty() && !d2.empty();
    // both lists are closed under negation, so d1 in {d2, -d2} iff they meet
    r.differences_match = std::any_of(d1.begin(), d1.end(), [&](int d) {
      return std::find(d2.begin(), d2.end(), d) != d2.end();
    });
    r.holds = r.both_ap && r.differences_match;
  }
  return r;
}

DichotomyReport check_hamidoune_dichotomy(const ElementSet& a) {
  if (a.contains(0)) throw Error("dichotomy requires 0 not in A");
  if (a.size() < 14) throw Error("dichotomy requires |A| >= 14");
  const int n = a.group().order();
  DichotomyReport r;
  r.sigma0_size = subset_sums_with_zero(a).size();
  r.bound_i = std::min(n - 3, 3 * a.size() - 3);
  r.branch_i = r.sigma0_size >= r.bound_i;
  for (auto& h : all_subgroups(a.group_ptr())) {
    if (h.order == n) continue;
    if ((a & h.elements).size() >= a.size() - 1) {
      r.branch_ii = true;
      r.subgroup = std::move(h);
      break;
    }
  }
  r.holds = r.branch_i || r.branch_ii;
  return r;
}

ThreeFactsReport check_three_facts(const ElementSet& a, int h) {
  require_prime_cyclic(a.group());
  if (a.empty()) throw Error("A must be nonempty");
  const int p = a.group().order();
  const int n = a.size();
  if (h < 1 || h > n) throw Error("h must lie in [1, |A|]");
  ThreeFactsReport r;

  BoundReport i;
  i.actual = restricted_sums(a, h).size();
  i.bound = std::min<long>(p, static_cast<long>(h) * n - static_cast<long>(h) * h + 1);
  i.holds = i.actual >= i.bound;
  r.restricted_bound = i;

  if (n == isqrt(4LL * p - 7)) {
    BoundReport ii;
    ii.actual = restricted_sums(a, n / 2).size();
    ii.bound = p;
    ii.holds = ii.actual == p;
    r.half_size_cover = ii;
  }
  if (!a.contains(0) && n >= floor_two_sqrt(p - 2)) {
    BoundReport iii;
    iii.actual = subset_sums(a).size();
    iii.bound = p;
    iii.holds = iii.actual == p;
    r.critical_cover = iii;
  }
  r.holds = r.restricted_bound->holds && (!r.half_size_cover || r.half_size_cover->holds) &&
            (!r.critical_cover || r.critical_cover->holds);
  return r;
}

BoundReport check_folk_lemma(const ElementSet& a, const ElementSet& b) {
  const int n = a.group().order();
  BoundReport r;
  r.actual = sumset(a, b).size();
  r.bound = n;
  r.applicable = a.size() + b.size() >= n + 1;
  r.holds = !r.applicable || r.actual == n;
  if (!r.applicable) r.note = "|A| + |B| <= |G|";
  return r;
}

BoundReport check_subset_sum_growth(const ElementSet& a) {
  if (a.empty() || a.contains(0)) throw Error("growth bound needs nonempty A with 0 not in A");
  BoundReport r;
  r.actual = subset_sums(a).size();
  r.bound = std::min(generated_subgroup(a).order, 2 * a.size() - 1);
  r.holds = r.actual >= r.bound;
  return r;
}

BoundReport check_prime_zero_sums(const ElementSet& a) {
  require_prime_cyclic(a.group());
  if (a.contains(0)) throw Error("A must avoid 0");
  const int p = a.group().order();
  const int l = a.size();
  BoundReport r;
  r.actual = subset_sums_with_zero(a).size();
  r.bound = std::min(p, 2 * l - 1 + epsilon(l));
  r.holds = r.actual >= r.bound;
  return r;
}

SequenceSumsReport check_sequence_sums(const Sequence& t) {
  require_prime_cyclic(*t.group);
  if (t.length() < 2) throw Error("sequence must have length >= 2");
  const int p = t.group->order();
  std::set<int> support;
  for (int x : t.terms) {
    if (x <= 0 || x >= p) throw Error("sequence terms must be nonzero elements of Z_p");
    support.insert(x);
  }
  SequenceSumsReport r;
  r.bound.actual = subset_sums_with_zero(t).size();
  r.bound.bound = std::min(p, t.length() + 1);
  r.bound.holds = r.bound.actual >= r.bound.bound;
  r.equality = r.bound.actual == r.bound.bound;
  r.long_sequence = t.length() >= p - 1;
  r.plus_minus_support =
      support.size() == 1 || (support.size() == 2 && t.group->add(*support.begin(), *support.rbegin()) == 0);
  r.holds = r.bound.holds && (r.equality == (r.long_sequence || r.plus_minus_support));
  return r;
}

}  // namespace spanlab
