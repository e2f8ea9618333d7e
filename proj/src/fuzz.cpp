#include "spanlab/fuzz.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "spanlab/bounds.hpp"
#include "spanlab/critical.hpp"

namespace spanlab {

using nlohmann::json;

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 over (seed, trial)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

json FuzzReport::to_json() const {
  json subs = json::array();
  for (const auto& s : subsuites) {
    subs.push_back({{"name", s.name},
                    {"cases", s.cases},
                    {"violations", s.violations},
                    {"counted", s.counted},
                    {"note", s.note},
                    {"examples", s.examples}});
  }
  return {{"lemma", lemma},         {"trials", trials},   {"seed", seed},
          {"max_p", max_p},         {"applicable", applicable},
          {"violation_count", violation_count},             {"violations", violations},
          {"subsuites", subs},      {"ok", ok()}};
}

const std::vector<std::string>& fuzz_lemmas() {
  static const std::vector<std::string> k = {"2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8", "2.9"};
  return k;
}

namespace {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<int> primes_in(int lo, int hi) {
  std::vector<int> out;
  for (int n = std::max(lo, 2); n <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  if (out.empty()) throw Error("no prime in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return out;
}

class GroupCache {
 public:
  GroupPtr get(const std::vector<int>& spec) {
    auto it = cache_.find(spec);
    if (it == cache_.end()) it = cache_.emplace(spec, Group::make(spec)).first;
    return it->second;
  }
  GroupPtr cyclic(int n) { return get({n}); }
  GroupPtr random(Rng& rng, int lo, int hi) {
    const int n = uniform(rng, lo, hi);
    auto it = classes_.find(n);
    if (it == classes_.end()) it = classes_.emplace(n, abelian_groups_of_order(n)).first;
    return get(it->second[uniform(rng, 0, static_cast<int>(it->second.size()) - 1)]);
  }

 private:
  std::map<std::vector<int>, GroupPtr> cache_;
  std::map<int, std::vector<std::vector<int>>> classes_;
};

ElementSet random_subset(const GroupPtr& g, std::vector<int> pool, int k, Rng& rng) {
  k = std::clamp(k, 0, static_cast<int>(pool.size()));
  for (int i = 0; i < k; ++i) std::swap(pool[i], pool[uniform(rng, i, static_cast<int>(pool.size()) - 1)]);
  return ElementSet(g, std::span<const int>(pool.data(), k));
}

std::vector<int> all_elements(const Group& g, bool with_zero) {
  std::vector<int> v(g.order());
  std::iota(v.begin(), v.end(), 0);
  if (!with_zero) v.erase(v.begin());
  return v;
}

ElementSet random_ap(const GroupPtr& g, int size, Rng& rng) {
  const int p = g->order();
  const int first = uniform(rng, 0, p - 1), d = uniform(rng, 1, p - 1);
  ElementSet s(g);
  for (int i = 0; i < size; ++i) s.insert(g->add(first, g->multiple(i, d)));
  return s;
}

json set_json(const ElementSet& s) { return s.elements(); }

json sets_json(std::span<const ElementSet> sets) {
  json arr = json::array();
  for (const auto& s : sets) arr.push_back(set_json(s));
  return {{"group", sets.empty() ? "" : sets[0].group().name()}, {"sets", arr}};
}

class Campaign {
 public:
  explicit Campaign(const FuzzConfig& cfg) {
    rep_.lemma = cfg.lemma;
    rep_.trials = cfg.trials;
    rep_.seed = cfg.seed;
    rep_.max_p = cfg.max_p;
  }

  void violation(json j) {
    ++rep_.violation_count;
    if (rep_.violations.size() < kMaxStoredViolations) rep_.violations.push_back(std::move(j));
  }
  void applicable() { ++rep_.applicable; }

  /// Runs an exhaustive or structured side suite; fn returns the number of
  /// cases and reports failures through the callback.
  void subsuite(std::string name, bool counted, std::string note,
                const std::function<long(const std::function<void(json)>&)>& fn) {
    SubsuiteReport s;
    s.name = std::move(name);
    s.counted = counted;
    s.note = std::move(note);
    s.cases = fn([&](json j) {
      ++s.violations;
      if (s.examples.size() < 10) s.examples.push_back(j);
      if (s.counted) violation(std::move(j));
    });
    rep_.subsuites.push_back(std::move(s));
  }

  /// Adds an informational tally gathered alongside the random trials.
  void tally(SubsuiteReport s) {
    s.counted = false;
    rep_.subsuites.push_back(std::move(s));
  }

  FuzzReport take() { return std::move(rep_); }

 private:
  FuzzReport rep_;
};

// Visits every k-subset of pool (ascending index combinations).
template <class F>
void for_each_combination(const std::vector<int>& pool, int k, F&& f) {
  const int n = static_cast<int>(pool.size());
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> pick(k);
  while (true) {
    for (int i = 0; i < k; ++i) pick[i] = pool[idx[i]];
    f(pick);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Visits every multiset of size k over pool (nondecreasing index sequences).
template <class F>
void for_each_multiset(const std::vector<int>& pool, int k, F&& f) {
  const int n = static_cast<int>(pool.size());
  std::vector<int> idx(k, 0), pick(k);
  if (n == 0) return;
  while (true) {
    for (int i = 0; i < k; ++i) pick[i] = pool[idx[i]];
    f(pick);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - 1) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[i];
  }
}

void fuzz_folk(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const int hi = std::max(cfg.max_p, 2);
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.random(rng, 2, hi);
    const int n = g->order();
    const int na = uniform(rng, 1, n);
    const int nb = chance(rng, 0.8) || na == n ? uniform(rng, std::max(1, n + 1 - na), n) : uniform(rng, 1, n - na);
    const auto pool = all_elements(*g, true);
    ElementSet a = random_subset(g, pool, na, rng), b = random_subset(g, pool, nb, rng);
    const auto r = check_folk_lemma(a, b);
    if (r.applicable) c.applicable();
    if (!r.holds) c.violation({{"group", g->name()}, {"A", set_json(a)}, {"B", set_json(b)}, {"sumset_size", r.actual}});
  }
}

void fuzz_hamidoune(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.random(rng, 40, 60);
    const int n = g->order();
    const auto nonzero = all_elements(*g, false);
    ElementSet a(g);
    std::vector<SubgroupHandle> big;
    for (auto& h : all_subgroups(g))
      if (h.order >= 14 && h.order < n) big.push_back(std::move(h));
    if (!big.empty() && chance(rng, 0.5)) {
      // mostly inside one proper subgroup, plus a few outsiders
      const auto& h = big[uniform(rng, 0, static_cast<int>(big.size()) - 1)];
      std::vector<int> inside, outside;
      for (int x : nonzero) (h.elements.contains(x) ? inside : outside).push_back(x);
      a = random_subset(g, inside, uniform(rng, std::min(12, h.order - 1), h.order - 1), rng);
      a |= random_subset(g, outside, uniform(rng, 0, 3), rng);
      while (a.size() < 14) a.insert(outside[uniform(rng, 0, static_cast<int>(outside.size()) - 1)]);
    } else {
      a = random_subset(g, nonzero, uniform(rng, 14, n - 1), rng);
    }
    const auto r = check_hamidoune_dichotomy(a);
    c.applicable();
    if (!r.holds) c.violation({{"group", g->name()}, {"A", set_json(a)}, {"sigma0_size", r.sigma0_size}});
  }
}

void fuzz_cauchy_davenport(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const auto primes = primes_in(2, cfg.max_p);
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.cyclic(primes[uniform(rng, 0, static_cast<int>(primes.size()) - 1)]);
    const int p = g->order();
    std::vector<ElementSet> sets;
    const int h = uniform(rng, 1, 6);
    for (int i = 0; i < h; ++i) sets.push_back(random_subset(g, all_elements(*g, true), uniform(rng, 1, p), rng));
    const auto r = check_cauchy_davenport(sets);
    c.applicable();
    if (!r.holds) c.violation(sets_json(sets));
  }
}

void fuzz_diderrich(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const auto primes = primes_in(3, cfg.max_p);
  SubsuiteReport classes{"distinct difference classes {d,-d}", 0, 0, false,
                         "same random instances, progressions required to use pairwise distinct classes {d,-d}", {}};
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.cyclic(primes[uniform(rng, 0, static_cast<int>(primes.size()) - 1)]);
    const int p = g->order();
    std::vector<ElementSet> sets;
    const int h = uniform(rng, 1, 5);
    for (int i = 0; i < h; ++i) {
      const int size = uniform(rng, 2, p);
      sets.push_back(chance(rng, 0.85) ? random_ap(g, size, rng) : random_subset(g, all_elements(*g, true), size, rng));
    }
    const auto r = check_diderrich(sets, DifferenceRule::sign_tuple);
    if (r.applicable) c.applicable();
    if (!r.holds) c.violation({{"instance", sets_json(sets)}, {"actual", r.actual}, {"bound", r.bound}});
    const auto strict = check_diderrich(sets, DifferenceRule::distinct_classes);
    if (strict.applicable) ++classes.cases;
    if (!strict.holds && ++classes.violations <= 10) classes.examples.push_back(sets_json(sets));
  }
  c.tally(std::move(classes));
}

void fuzz_vosper(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const auto primes = primes_in(5, cfg.max_p);
  SubsuiteReport below{"triggered with |B1+B2| <= p-2", 0, 0, false,
                       "the triggered random instances whose sumset misses at least two residues", {}};
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.cyclic(primes[uniform(rng, 0, static_cast<int>(primes.size()) - 1)]);
    const int p = g->order();
    auto make = [&] {
      const int size = uniform(rng, 2, p - 2);
      return chance(rng, 0.4) ? random_ap(g, size, rng) : random_subset(g, all_elements(*g, true), size, rng);
    };
    ElementSet b1 = make(), b2 = make();
    const auto r = check_vosper(b1, b2);
    if (r.triggered) c.applicable();
    if (r.triggered && r.below_p_minus_1) {
      ++below.cases;
      if (!r.holds && ++below.violations <= 10) below.examples.push_back({{"B1", set_json(b1)}, {"B2", set_json(b2)}});
    }
    if (!r.holds) {
      c.violation({{"group", g->name()},
                   {"B1", set_json(b1)},
                   {"B2", set_json(b2)},
                   {"sumset_size", r.sumset_size},
                   {"both_ap", r.both_ap}});
    }
  }
  c.tally(std::move(below));
}

void fuzz_three_facts(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const auto primes = primes_in(3, cfg.max_p);
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.cyclic(primes[uniform(rng, 0, static_cast<int>(primes.size()) - 1)]);
    const int p = g->order();
    const bool avoid_zero = chance(rng, 0.5);
    ElementSet a = random_subset(g, all_elements(*g, !avoid_zero), uniform(rng, 1, avoid_zero ? p - 1 : p), rng);
    const int h = uniform(rng, 1, a.size());
    const auto r = check_three_facts(a, h);
    c.applicable();
    if (!r.holds) {
      c.violation({{"group", g->name()},
                   {"A", set_json(a)},
                   {"h", h},
                   {"clause_i", r.restricted_bound->holds},
                   {"clause_ii", !r.half_size_cover || r.half_size_cover->holds},
                   {"clause_iii", !r.critical_cover || r.critical_cover->holds}});
    }
  }

  auto half_size_suite = [&](int p, bool with_zero, int extra) {
    return [=, &groups](const std::function<void(json)>& fail) {
      GroupPtr g = groups.cyclic(p);
      const int n = isqrt(4LL * p - 7) + extra;
      const int h = n / 2;
      long cases = 0;
      const auto nonzero = all_elements(*g, false);
      for_each_combination(nonzero, with_zero ? n - 1 : n, [&](const std::vector<int>& pick) {
        ElementSet a(g, pick);
        if (with_zero) a.insert(0);
        ++cases;
        const int got = restricted_sums(a, h).size();
        if (got != p) fail({{"group", g->name()}, {"A", set_json(a)}, {"h", h}, {"restricted_sums_size", got}});
      });
      return cases;
    };
  };
  c.subsuite("(ii) exhaustive p=13, 0 not in A", true, "|A| = floor(sqrt(4p-7)) = 6, h = 3",
             half_size_suite(13, false, 0));
  c.subsuite("(ii) exhaustive p=13, 0 in A", true, "|A| = floor(sqrt(4p-7)) = 6, h = 3",
             half_size_suite(13, true, 0));
  c.subsuite("(ii) with |A| = floor(sqrt(4p-7)) + 1, exhaustive p=13", false,
             "one element more than the stated size; h = floor(|A|/2)", [&](const auto& fail) {
               return half_size_suite(13, false, 1)(fail) + half_size_suite(13, true, 1)(fail);
             });

  auto cover_suite = [&](int p, bool with_zero) {
    return [=, &groups](const std::function<void(json)>& fail) {
      GroupPtr g = groups.cyclic(p);
      const int n = floor_two_sqrt(p - 2);
      const auto nonzero = all_elements(*g, false);
      long cases = 0;
      for (int k = n; k <= p - 1; ++k) {
        for_each_combination(nonzero, with_zero ? k - 1 : k, [&](const std::vector<int>& pick) {
          ElementSet a(g, pick);
          if (with_zero) a.insert(0);
          ++cases;
          const int got = subset_sums(a).size();
          if (got != p) fail({{"group", g->name()}, {"A", set_json(a)}, {"subset_sums_size", got}});
        });
      }
      return cases;
    };
  };
  c.subsuite("(iii) exhaustive p=11, A in Z_p\\{0}, |A| >= 6", true, "", cover_suite(11, false));
  c.subsuite("(iii) exhaustive p=11, 0 in A, |A| >= 6", false, "reading that admits 0 in A", cover_suite(11, true));
}

void fuzz_growth(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const int hi = std::max(cfg.max_p, 2);
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.random(rng, 2, hi);
    ElementSet a = random_subset(g, all_elements(*g, false), uniform(rng, 1, g->order() - 1), rng);
    const auto r = check_subset_sum_growth(a);
    c.applicable();
    if (!r.holds) c.violation({{"group", g->name()}, {"A", set_json(a)}, {"actual", r.actual}, {"bound", r.bound}});
  }
}

void fuzz_prime_zero_sums(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const auto primes = primes_in(2, cfg.max_p);
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.cyclic(primes[uniform(rng, 0, static_cast<int>(primes.size()) - 1)]);
    ElementSet a = random_subset(g, all_elements(*g, false), uniform(rng, 0, g->order() - 1), rng);
    const auto r = check_prime_zero_sums(a);
    c.applicable();
    if (!r.holds) c.violation({{"group", g->name()}, {"A", set_json(a)}, {"actual", r.actual}, {"bound", r.bound}});
  }
  c.subsuite("exhaustive p <= 13", true, "every subset of Z_p\\{0}", [&](const auto& fail) {
    long cases = 0;
    for (int p : primes_in(2, 13)) {
      GroupPtr g = groups.cyclic(p);
      const auto nonzero = all_elements(*g, false);
      for (int k = 0; k <= p - 1; ++k) {
        for_each_combination(nonzero, k, [&](const std::vector<int>& pick) {
          ++cases;
          ElementSet a(g, pick);
          if (!check_prime_zero_sums(a).holds) fail({{"group", g->name()}, {"A", set_json(a)}});
        });
      }
    }
    return cases;
  });
}

void fuzz_sequence_sums(const FuzzConfig& cfg, Campaign& c) {
  GroupCache groups;
  const auto primes = primes_in(2, cfg.max_p);
  auto report = [](const Sequence& s, const SequenceSumsReport& r) {
    return json{{"group", s.group->name()},
                {"T", s.terms},
                {"sigma0_size", r.bound.actual},
                {"bound", r.bound.bound},
                {"equality", r.equality}};
  };
  for (long t = 0; t < cfg.trials; ++t) {
    Rng rng = trial_rng(cfg.seed, t);
    GroupPtr g = groups.cyclic(primes[uniform(rng, 0, static_cast<int>(primes.size()) - 1)]);
    const int p = g->order();
    Sequence s{g, {}};
    const int len = uniform(rng, 2, 2 * p);
    const bool pm = chance(rng, 0.3);
    const int base = uniform(rng, 1, p - 1);
    for (int i = 0; i < len; ++i) s.terms.push_back(pm ? (chance(rng, 0.5) ? base : g->neg(base)) : uniform(rng, 1, p - 1));
    const auto r = check_sequence_sums(s);
    c.applicable();
    if (!r.holds) c.violation(report(s, r));
  }
  c.subsuite("exhaustive p <= 13, 2 <= |T| <= 6", true, "every multiset over Z_p\\{0}", [&](const auto& fail) {
    long cases = 0;
    for (int p : primes_in(2, 13)) {
      GroupPtr g = groups.cyclic(p);
      const auto nonzero = all_elements(*g, false);
      for (int len = 2; len <= 6; ++len) {
        for_each_multiset(nonzero, len, [&](const std::vector<int>& pick) {
          ++cases;
          Sequence s{g, pick};
          const auto r = check_sequence_sums(s);
          if (!r.holds) fail(report(s, r));
        });
      }
    }
    return cases;
  });
}

}  // namespace

FuzzReport run_fuzz(const FuzzConfig& cfg) {
  if (cfg.trials < 0) throw Error("trial count must be nonnegative");
  if (cfg.max_p < 5) throw Error("max-p must be at least 5");
  Campaign c(cfg);
  const std::string& l = cfg.lemma;
  if (l == "2.1") fuzz_folk(cfg, c);
  else if (l == "2.2") fuzz_hamidoune(cfg, c);
  else if (l == "2.3") fuzz_cauchy_davenport(cfg, c);
  else if (l == "2.4") fuzz_diderrich(cfg, c);
  else if (l == "2.5") fuzz_vosper(cfg, c);
  else if (l == "2.6") fuzz_three_facts(cfg, c);
  else if (l == "2.7") fuzz_growth(cfg, c);
  else if (l == "2.8") fuzz_prime_zero_sums(cfg, c);
  else if (l == "2.9") fuzz_sequence_sums(cfg, c);
  else throw Error("unknown lemma '" + l + "'; expected one of 2.1 .. 2.9");
  return c.take();
}

}  // namespace spanlab
