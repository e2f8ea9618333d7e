#include <doctest.h>

#include <algorithm>

#include "oracle.hpp"
#include "spanlab/critical.hpp"
#include "spanlab/search.hpp"
#include "spanlab/sumset.hpp"

using namespace spanlab;

TEST_CASE("closed-form critical numbers") {
  auto f = [](std::vector<int> orders) { return cr_formula(*Group::make(std::move(orders))); };
  CHECK(f({7}).value == 4);
  CHECK(f({7}).which == CrCase::prime);
  CHECK(f({8}).value == 5);
  CHECK(f({8}).which == CrCase::special_case2);
  CHECK(f({15}).value == 7);
  CHECK(f({15}).which == CrCase::special_case2);
  CHECK(f({21}).value == 8);
  CHECK(f({21}).which == CrCase::general_case3);
  CHECK(f({12}).value == 6);
  CHECK(f({12}).which == CrCase::general_case3);
  CHECK(f({9}).value == 4);
  CHECK(f({9}).which == CrCase::general_case3);
  CHECK(f({3, 3}).value == 5);
  CHECK(f({3, 3}).which == CrCase::special_case2);
  CHECK(f({2, 2}).value == 3);
  CHECK(f({2, 4}).value == 5);
  CHECK(f({35}).value == 11);
  CHECK(f({3, 5}).value == 7);
  CHECK_THROWS_AS(f({2}), Error);
  CHECK(isqrt(45) == 6);
  CHECK(isqrt(0) == 0);
  CHECK(floor_two_sqrt(1) == 2);
  CHECK(floor_two_sqrt(9) == 6);
}

TEST_CASE("searched critical number matches the subset oracle for |G| <= 16") {
  for (int n = 3; n <= 16; ++n) {
    for (const auto& inv : abelian_groups_of_order(n)) {
      auto g = Group::make(inv);
      const int expect = oracle::critical_number(oracle::Cyclic{inv});
      CAPTURE(g->name());
      for (bool orbit : {true, false}) {
        for (bool prune : {true, false}) {
          CrSearchOptions o;
          o.orbit_reduction = orbit;
          o.spanning_prune = prune;
          auto r = cr_search(g, o);
          REQUIRE(r.searched_value);
          CHECK(*r.searched_value == expect);
          REQUIRE(r.witness_max_nonspanning);
          CHECK(r.witness_max_nonspanning->size() == expect - 1);
          CHECK_FALSE(r.witness_max_nonspanning->contains(0));
          CHECK_FALSE(spans(*r.witness_max_nonspanning));
        }
      }
    }
  }
}

TEST_CASE("named searches") {
  auto z7 = cr_search(Group::make({7}));
  CHECK(*z7.searched_value == 4);
  auto klein = cr_search(Group::make({2, 2}));
  CHECK(*klein.searched_value == 3);
  CHECK(klein.witness_max_nonspanning->elements() == std::vector<int>{1, 2});
  auto z15 = cr_search(Group::make({15}));
  CHECK(*z15.searched_value == 7);
  CHECK(z15.witness_max_nonspanning->size() == 6);
  CHECK_FALSE(spans(ElementSet(z15.group, {1, 2, 3, 12, 13, 14})));
  CHECK(*cr_search(Group::make({21})).searched_value == 8);
}

TEST_CASE("search above the exact limit needs the extended flag") {
  auto r = cr_search(Group::make({25}));
  CHECK(r.status == SearchStatus::budget_exceeded);
  CHECK_FALSE(r.searched_value);
  CHECK(r.formula_value == 8);
}

TEST_CASE("node budget stops the search") {
  CrSearchOptions o;
  o.budget.max_nodes = 10;
  auto r = cr_search(Group::make({24}), o);
  CHECK(r.status == SearchStatus::budget_exceeded);
  CHECK_FALSE(r.searched_value);
}

TEST_CASE("avoiding walker lists exactly the avoiding sets, in order, across pauses") {
  auto g = Group::make({2, 6});
  oracle::Cyclic o{{2, 6}};
  for (int target = 0; target < g->order(); ++target) {
    for (int size = 1; size <= 6; ++size) {
      std::vector<std::vector<int>> expect;
      std::vector<int> idx(size);
      std::vector<int> pool;
      for (int x = 1; x < g->order(); ++x) pool.push_back(x);
      std::vector<bool> pick(pool.size(), false);
      std::fill(pick.begin(), pick.begin() + size, true);
      do {
        std::vector<int> a;
        for (std::size_t i = 0; i < pool.size(); ++i)
          if (pick[i]) a.push_back(pool[i]);
        if (!oracle::subset_sums(o, a).count(target)) expect.push_back(a);
      } while (std::prev_permutation(pick.begin(), pick.end()));
      std::sort(expect.begin(), expect.end());

      std::vector<std::vector<int>> got;
      AvoidingWalker w(*g, target, size);
      for (auto s = w.next(); s == AvoidingWalker::Step::found; s = w.next()) got.push_back(w.current());
      CHECK(got == expect);

      std::vector<std::vector<int>> resumed;
      AvoidingWalker a(*g, target, size);
      while (true) {
        auto s = a.next(3);
        if (s == AvoidingWalker::Step::exhausted) break;
        if (s == AvoidingWalker::Step::found) resumed.push_back(a.current());
        AvoidingWalker b(*g, target, size);
        b.restore(a.frontier());
        CHECK(b.frontier() == a.frontier());
      }
      CHECK(resumed == expect);
    }
  }
}

TEST_CASE("search targets and units") {
  auto z12 = Group::make({12});
  CHECK(search_targets(*z12, true) == std::vector<int>{0, 1, 2, 3, 4, 6});
  CHECK(search_targets(*z12, false).size() == 12);
  CHECK(search_targets(*Group::make({2, 6}), true).size() == 12);
  CHECK(unit_multipliers(*z12) == std::vector<int>{1, 5, 7, 11});
  CHECK_THROWS_AS(unit_multipliers(*Group::make({2, 6})), Error);
}

TEST_CASE("Z9 search exceeds the closed form") {
  auto r = cr_search(Group::make({9}));
  CHECK(*r.searched_value == oracle::critical_number(oracle::Cyclic{{9}}));
  CHECK(*r.searched_value == 5);
  CHECK(r.formula_value == 4);
}
