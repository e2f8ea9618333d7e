#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "spanlab/sumset.hpp"

using namespace spanlab;

namespace {

std::vector<int> sorted(const std::set<int>& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("subset sums: fixed instances") {
  auto z8 = Group::make({8});
  CHECK(subset_sums(ElementSet(z8, {1, 2, 4})).elements() == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
  auto z15 = Group::make({15});
  CHECK(subset_sums(ElementSet(z15, {7})).elements() == std::vector<int>{7});
  CHECK(subset_sums(ElementSet::full(z15) - ElementSet(z15, {0})).is_full());
  CHECK(subset_sums(Sequence{z15, {}}).elements() == std::vector<int>{0});

  auto z5 = Group::make({5});
  CHECK(subset_sums_with_zero(ElementSet(z5, {1, 2})).elements() == std::vector<int>{0, 1, 2, 3});
  CHECK(subset_sums_with_zero(Sequence{z5, {}}).elements() == std::vector<int>{0});
  auto z7 = Group::make({7});
  CHECK(subset_sums_with_zero(ElementSet(z7, {3, 4})).elements() == std::vector<int>{0, 3, 4});
  CHECK(subset_sums(Sequence{z7, {3, 3}}).elements() == std::vector<int>{3, 6});
}

TEST_CASE("restricted sums: fixed instances") {
  auto z7 = Group::make({7});
  ElementSet a(z7, {1, 2, 3});
  CHECK(restricted_sums(a, 2).elements() == std::vector<int>{3, 4, 5});
  CHECK(restricted_sums(a, 0).elements() == std::vector<int>{0});
  CHECK(restricted_sums(a, 3).elements() == std::vector<int>{6});
  CHECK(restricted_sums(Sequence{z7, {1, 1, 1}}, 2).elements() == std::vector<int>{2});
  CHECK_THROWS_AS(restricted_sums(a, 4), Error);
  CHECK_THROWS_AS(restricted_sums(a, -1), Error);
}

TEST_CASE("sumset, spans, completeness") {
  auto z5 = Group::make({5});
  CHECK(sumset(ElementSet(z5, {0, 1}), ElementSet(z5, {0, 1})).elements() == std::vector<int>{0, 1, 2});
  ElementSet a(z5, {2, 4});
  CHECK(sumset(a, ElementSet(z5, {0})) == a);
  CHECK_THROWS_AS(sumset(a, ElementSet(z5)), Error);

  auto z15 = Group::make({15});
  CHECK(spans(ElementSet::full(z15) - ElementSet(z15, {0})));
  CHECK_FALSE(spans(ElementSet(z15)));
  auto z16 = Group::make({16});
  CHECK_FALSE(spans(ElementSet(z16, {2, 4, 6, 8, 10, 12, 14})));

  CHECK_FALSE(is_complete(ElementSet(z15, {4})));
  CHECK(is_complete(ElementSet(z15, {5, 10})));
  CHECK_THROWS_AS(is_complete(ElementSet(z15)), Error);
  for (int q : {5, 7, 11}) {
    auto g = Group::make({q});
    CHECK(is_complete(ElementSet::full(g) - ElementSet(g, {0})));
  }
}

TEST_CASE("sumset DP matches brute force on random sequences over mixed groups") {
  std::mt19937_64 rng(2024);
  const std::vector<std::vector<int>> groups = {{7}, {12}, {2, 6}, {3, 3}, {2, 2, 4}, {36}, {6, 6}, {5, 5}};
  int checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const auto& orders = groups[trial % groups.size()];
    auto g = Group::make(orders);
    oracle::Cyclic o{orders};
    const int len = static_cast<int>(rng() % 11);
    std::vector<int> t(len);
    for (int& x : t) x = static_cast<int>(rng() % g->order());
    Sequence s{g, t};
    CHECK(subset_sums(s).elements() == sorted(oracle::subset_sums(o, t)));
    const int h = static_cast<int>(rng() % (len + 1));
    CHECK(restricted_sums(s, h).elements() == sorted(oracle::restricted_sums(o, t, h)));
    if (len > 0) {
      auto b = static_cast<int>(rng() % g->order());
      std::set<int> expect;
      for (int x : t) expect.insert(o.add(x, b));
      std::vector<int> single{b};
      ElementSet tset(g, std::span<const int>(t));
      CHECK(sumset(tset, ElementSet(g, std::span<const int>(single))).elements() == sorted(expect));
    }
    ++checked;
  }
  CHECK(checked == 600);
}
