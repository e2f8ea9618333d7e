#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "oracle.hpp"
#include "spanlab/critical.hpp"
#include "spanlab/extremal.hpp"
#include "spanlab/sumset.hpp"

using namespace spanlab;

namespace {

/// Every extremal set by walking all (|G|-1 choose cr-1) subsets.
std::set<std::vector<int>> brute_extremal(const std::vector<int>& orders) {
  oracle::Cyclic o{orders};
  const int n = o.order();
  const int size = cr_formula(*Group::make(orders)).value - 1;
  std::set<std::vector<int>> out;
  std::vector<bool> pick(n - 1, false);
  std::fill(pick.begin(), pick.begin() + size, true);
  do {
    std::vector<int> a;
    for (int i = 0; i < n - 1; ++i)
      if (pick[i]) a.push_back(i + 1);
    if (!oracle::spans(o, a)) out.insert(a);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

std::vector<ExtremalRecord> run(const ExtremalContext& ctx, const EnumerateOptions& opt,
                                std::optional<EnumerationCheckpoint> resume = std::nullopt,
                                EnumerateResult* result = nullptr) {
  std::vector<ExtremalRecord> out;
  auto r = enumerate_extremal(ctx, opt, [&](const ExtremalRecord& rec) { out.push_back(rec); }, {}, resume);
  if (result) *result = r;
  return out;
}

std::vector<std::string> dump(const std::vector<ExtremalRecord>& recs) {
  std::vector<std::string> out;
  for (const auto& r : recs) out.push_back(to_json(r).dump());
  return out;
}

}  // namespace

TEST_CASE("complete subsets: fixed instances") {
  auto z15 = Group::make({15});
  auto k = contains_complete_subset(ElementSet(z15, {1, 3, 6, 9, 12}));
  REQUIRE(k);
  CHECK(k->elements.elements() == std::vector<int>{0, 3, 6, 9, 12});
  CHECK_FALSE(contains_complete_subset(ElementSet(Group::make({5}), {1})));
  auto sym = ElementSet(z15, {1, 2, 3, 12, 13, 14});
  CHECK(contains_complete_subset(sym).has_value() ==
        oracle::has_complete_subset(oracle::Cyclic{{15}}, sym.elements()));
  CHECK_FALSE(contains_complete_subset(sym));
}

TEST_CASE("complete subsets match the subset oracle on random instances") {
  std::mt19937_64 rng(11);
  std::vector<std::vector<int>> groups;
  for (int n = 4; n <= 36; ++n)
    for (const auto& inv : abelian_groups_of_order(n)) groups.push_back(inv);
  int positives = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto& orders = groups[rng() % groups.size()];
    oracle::Cyclic o{orders};
    const int n = o.order();
    const int size = 1 + static_cast<int>(rng() % std::min(12, n - 1));
    auto a = oracle::random_subset(rng, n, size, rng() % 4 == 0);
    auto g = Group::make(orders);
    ElementSet s(g, std::span<const int>(a));
    const bool expect = oracle::has_complete_subset(o, a);
    auto got = contains_complete_subset(s);
    CAPTURE(g->name());
    CHECK(got.has_value() == expect);
    if (got) {
      ++positives;
      CHECK(subset_sums(s & got->elements) == got->elements);
    }
  }
  CHECK(positives > 20);
}

TEST_CASE("classification of named sets") {
  auto z15 = Group::make({15});
  auto ex2 = classify(ElementSet(z15, {1, 2, 3, 12, 13, 14}));
  CHECK(ex2.has(Tag::shape_ex2));
  CHECK(ex2.witnesses.at(Tag::shape_ex2).element == 1);
  CHECK(verify_tags(ex2).empty());

  auto z16 = Group::make({16});
  auto half = classify(ElementSet(z16, {2, 4, 6, 8, 10, 12, 14}));
  CHECK(half.tags == std::vector<Tag>{Tag::shape_i, Tag::has_complete_subset});
  CHECK(half.witnesses.at(Tag::shape_i).subgroup->elements() == std::vector<int>{0, 2, 4, 6, 8, 10, 12, 14});
  CHECK(verify_tags(half).empty());

  // seven elements in Z15 is not extremal
  CHECK_THROWS_AS(classify(ElementSet(z15, {1, 2, 3, 6, 9, 12, 14})), Error);
  // H\{0} with the two cosets of +-1 spans Z15
  CHECK_THROWS_AS(classify(ElementSet(z15, {1, 3, 6, 9, 12, 14})), Error);

  auto z33 = Group::make({33});
  ElementSet two(z33, {1});
  for (int x = 3; x < 33; x += 3) two.insert(x);
  auto ii = classify(two);
  CHECK(ii.has(Tag::shape_ii));
  CHECK(ii.witnesses.at(Tag::shape_ii).element == 1);
  CHECK(ii.witnesses.at(Tag::shape_ii).subgroup->size() == 11);
  CHECK(verify_tags(ii).empty());

  auto z27 = Group::make({27});
  ElementSet b(z27, {1});
  for (int x = 3; x < 27; x += 3) b.insert(x);
  auto rb = classify(b);
  CHECK(rb.has(Tag::shape_b));
  CHECK_FALSE(rb.has(Tag::shape_ii));
  CHECK(verify_tags(rb).empty());

  auto ex1 = classify(make_example_1(5, 11, 1));
  CHECK(ex1.has(Tag::shape_ex1));
  CHECK(ex1.has(Tag::has_complete_subset));
  CHECK(verify_tags(ex1).empty());
}

TEST_CASE("tampered witnesses are caught") {
  auto z15 = Group::make({15});
  auto r = classify(ElementSet(z15, {1, 2, 3, 12, 13, 14}));
  r.witnesses[Tag::shape_ex2].element = 2;
  CHECK_FALSE(verify_tags(r).empty());
  auto s = classify(ElementSet(z15, {1, 2, 3, 12, 13, 14}));
  s.tags.push_back(Tag::has_complete_subset);
  s.witnesses[Tag::has_complete_subset] = {ElementSet(z15, {0, 5, 10}), std::nullopt};
  CHECK_FALSE(verify_tags(s).empty());
}

TEST_CASE("records survive a JSON round trip") {
  auto z21 = Group::make({21});
  ExtremalContext ctx(z21);
  auto recs = run(ctx, {});
  REQUIRE(recs.size() == 390);
  for (const auto& r : recs) {
    auto back = record_from_json(to_json(r), z21);
    CHECK(to_json(back) == to_json(r));
    CHECK(verify_tags(back).empty());
  }
  CHECK_THROWS_AS(record_from_json(to_json(recs[0]), Group::make({15})), Error);
  CHECK_THROWS_AS(record_from_json(nlohmann::json{{"set", 1}}, z21), Error);
}

TEST_CASE("coset profiles") {
  auto z15 = Group::make({15});
  auto h = generated_subgroup(ElementSet(z15, {3}));
  auto p = coset_profile(ElementSet(z15, {1, 2, 3, 12, 13, 14}), h);
  CHECK(p.l0 == 2);
  CHECK(p.k == 2);
  CHECK(p.lengths == std::vector<int>{2, 2});
  CHECK(p.r == std::array<int, 5>{0, 2, 0, 0, 0});
  CHECK(p.m == std::array<int, 5>{2, 2, 0, 0, 0});

  auto q = coset_profile(h.elements - ElementSet(z15, {0}), h);
  CHECK(q.l0 == 4);
  CHECK(q.k == 0);

  std::mt19937_64 rng(5);
  auto z36 = Group::make({36});
  for (const auto& sub : all_subgroups(z36)) {
    if (sub.order == 1 || sub.order == 36) continue;
    auto a = oracle::random_subset(rng, 36, 14, false);
    auto pr = coset_profile(ElementSet(z36, std::span<const int>(a)), sub);
    int total = pr.l0;
    for (int l : pr.lengths) total += l;
    CHECK(total == 14);
    CHECK(std::is_sorted(pr.lengths.rbegin(), pr.lengths.rend()));
    int rs = 0;
    for (int x : pr.r) rs += x;
    CHECK(rs == pr.k);
  }
  CHECK_THROWS_AS(coset_profile(ElementSet(z15, {1}), generated_subgroup(ElementSet(z15, {1}))), Error);
}

TEST_CASE("example constructors") {
  auto a = make_example_2(3, 5, 1);
  CHECK(a.elements() == std::vector<int>{1, 2, 3, 12, 13, 14});
  CHECK_FALSE(spans(a));
  auto b = make_example_2(5, 7, 1);
  CHECK(b.size() == 10);
  CHECK(b.size() == cr_formula(b.group()).value - 1);
  CHECK_FALSE(oracle::spans(oracle::Cyclic{{35}}, b.elements()));
  CHECK(make_example_2(3, 5, 2).size() == 6);
  CHECK_THROWS_AS(make_example_2(3, 11, 1), Error);
  CHECK_THROWS_AS(make_example_2(3, 5, 3), Error);
  CHECK_THROWS_AS(make_example_2(2, 5, 1), Error);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto e = make_example_1(5, 11, seed);
    CHECK(e.size() == 13);
    CHECK(e.group().order() == 55);
    CHECK_FALSE(spans(e));
    CHECK(check_observation_31(e).holds);
  }
  CHECK(make_example_1(5, 11, 3) == make_example_1(5, 11, 3));
  CHECK_THROWS_AS(make_example_1(3, 5, 1), Error);
  CHECK_THROWS_AS(make_example_1(5, 13, 1), Error);
}

TEST_CASE("enumeration finds exactly the brute-force extremal sets") {
  for (const std::vector<int>& orders : {std::vector<int>{15}, {16}, {12}, {3, 3}, {2, 4}, {2, 6}, {9}, {14}}) {
    auto g = Group::make(orders);
    CAPTURE(g->name());
    ExtremalContext ctx(g);
    auto recs = run(ctx, {});
    std::set<std::vector<int>> got;
    for (const auto& r : recs) {
      CHECK(got.insert(r.set.elements()).second);
      CHECK(verify_tags(r).empty());
      CHECK(check_observation_31(r.set, ctx).holds);
    }
    CHECK(got == brute_extremal(orders));
  }
}

TEST_CASE("named enumeration counts") {
  ExtremalContext z15(Group::make({15}));
  auto recs = run(z15, {});
  CHECK(recs.size() == 28);
  int ex2 = 0;
  for (const auto& r : recs) ex2 += r.has(Tag::shape_ex2);
  CHECK(ex2 == 4);

  ExtremalContext z16(Group::make({16}));
  auto one = run(z16, {});
  REQUIRE(one.size() == 1);
  CHECK(one[0].set.elements() == std::vector<int>{2, 4, 6, 8, 10, 12, 14});
}

TEST_CASE("orbit mode covers every extremal set once") {
  for (int n : {15, 21, 25, 27}) {
    auto g = Group::make({n});
    CAPTURE(n);
    ExtremalContext ctx(g);
    auto full = run(ctx, {});
    std::set<std::vector<int>> all;
    for (const auto& r : full) all.insert(r.set.elements());
    EnumerateOptions o;
    o.orbit_dedup = true;
    auto reps = run(ctx, o);
    std::set<std::vector<int>> covered;
    for (const auto& r : reps) {
      REQUIRE(r.orbit_size);
      std::set<std::vector<int>> orbit;
      for (int u : unit_multipliers(*g)) {
        std::vector<int> ua;
        for (int x : r.set.elements()) ua.push_back(u * x % n);
        std::sort(ua.begin(), ua.end());
        orbit.insert(ua);
      }
      CHECK(static_cast<int>(orbit.size()) == *r.orbit_size);
      for (const auto& m : orbit) CHECK(covered.insert(m).second);
    }
    CHECK(covered == all);
  }
  EnumerateOptions o;
  o.orbit_dedup = true;
  CHECK_THROWS_AS(run(ExtremalContext(Group::make({3, 3})), o), Error);
}

TEST_CASE("interrupted enumeration resumes to the same stream") {
  ExtremalContext ctx(Group::make({15}));
  const auto full = dump(run(ctx, {}));
  for (std::uint64_t budget : {1, 2, 5, 17, 64, 100, 333, 1000, 2500, 4096, 5000, 9000}) {
    CAPTURE(budget);
    std::vector<std::string> joined;
    std::optional<EnumerationCheckpoint> ck;
    int legs = 0;
    while (true) {
      EnumerateOptions o;
      o.budget.max_nodes = budget;
      EnumerateResult res;
      auto part = dump(run(ctx, o, ck, &res));
      joined.insert(joined.end(), part.begin(), part.end());
      ++legs;
      if (res.status == RunStatus::complete) break;
      REQUIRE(res.checkpoint);
      CHECK(res.checkpoint->records_emitted == joined.size());
      ck = checkpoint_from_json(to_json(*res.checkpoint));
      REQUIRE(legs < 100000);
    }
    CHECK(joined == full);
  }

  for (bool orbit : {false, true}) {
    EnumerateOptions o;
    o.orbit_dedup = orbit;
    const auto expect = dump(run(ctx, o));
    o.budget.max_nodes = 1;
    EnumerateResult res;
    auto first = dump(run(ctx, o, std::nullopt, &res));
    REQUIRE(res.status == RunStatus::partial);
    o.budget = {};
    o.threads = 3;
    auto rest = dump(run(ctx, o, res.checkpoint));
    first.insert(first.end(), rest.begin(), rest.end());
    CHECK(first == expect);
  }
}

TEST_CASE("checkpoints: round trip and refusal") {
  EnumerationCheckpoint c;
  c.group = "Z21";
  c.set_size = 7;
  c.unit = 4;
  c.frontier = {{1, 5, 6}, 9};
  c.records_emitted = 12;
  c.output_bytes = 3456;
  c.nodes = 789;
  auto back = checkpoint_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.frontier == c.frontier);
  CHECK_THROWS_AS(checkpoint_from_json(nlohmann::json::parse(R"({"group": 3})")), Error);

  ExtremalContext ctx(Group::make({21}));
  auto other = c;
  other.engine_version = "spanlab-enum-0";
  CHECK_THROWS_AS(run(ctx, {}, other), Error);
  auto wrong = c;
  wrong.group = "Z15";
  CHECK_THROWS_AS(run(ctx, {}, wrong), Error);
  auto far = c;
  far.unit = 1 << 20;
  CHECK_THROWS_AS(run(ctx, {}, far), Error);
}

TEST_CASE("candidate limit") {
  ExtremalContext ctx(Group::make({21}));
  EnumerateOptions o;
  o.max_candidates = 1000;
  CHECK_THROWS_AS(run(ctx, o), Error);
  o.extended = true;
  CHECK(run(ctx, o).size() == 390);
  CHECK(binomial(20, 7) == 77520);
  CHECK(binomial(14, 6) == 3003);
  CHECK(binomial(5, 7) == 0);
}

TEST_CASE("conjecture certificates") {
  auto c2 = check_conjecture(2, 3, 5);
  CHECK(c2.verdict != Verdict::partial);
  CHECK(c2.records.size() == 28);
  CHECK(c2.counterexamples.size() + c2.tag_counts["SHAPE_EX2"] == 28);
  CHECK_THROWS_AS(check_conjecture(1, 3, 5), Error);
  CHECK_THROWS_AS(check_conjecture(2, 3, 11), Error);
  CHECK_THROWS_AS(check_conjecture(3, 3, 5), Error);

  EnumerateOptions o;
  o.orbit_dedup = true;
  auto orb = check_conjecture(2, 3, 5, o);
  int covered = 0;
  for (const auto& [size, count] : orb.orbits.orbit_sizes) covered += size * count;
  CHECK(covered == 28);
  CHECK(orb.orbits.orbits == c2.orbits.orbits);
  CHECK(orb.verdict == c2.verdict);
}

TEST_CASE("main theorem hypothesis") {
  CHECK(main_theorem_applies(*Group::make({33})));
  CHECK(main_theorem_applies(*Group::make({36})));
  CHECK(main_theorem_applies(*Group::make({2, 18})));
  CHECK_FALSE(main_theorem_applies(*Group::make({16})));
  CHECK_FALSE(main_theorem_applies(*Group::make({21})));
  CHECK_FALSE(main_theorem_applies(*Group::make({45})));
  CHECK_THROWS_AS(verify_theorem_main(Group::make({16}), {}), Error);
  EnumerateOptions o;
  o.orbit_dedup = true;
  o.extended = true;
  auto r = verify_theorem_main(Group::make({33}), o);
  CHECK(r.verdict == Verdict::verified);
  CHECK(r.tag_counts["SHAPE_II"] == static_cast<int>(r.records));
}
