#pragma once

// Finite abelian groups Z_{n1} (+) ... (+) Z_{nk} with mixed-radix element
// indexing (last coordinate fastest), element sets as bitsets over the
// indices, subgroups, and cosets.

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spanlab/bits.hpp"

namespace spanlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using bits::Word;

inline constexpr std::int64_t kDefaultMaxOrder = 1'000'000;
inline constexpr int kDefaultSubgroupEnumerationMax = 10'000;

class Group;
using GroupPtr = std::shared_ptr<const Group>;

/// An element as explicit coordinates, coords[i] in [0, n_i).
struct Element {
  std::vector<int> coords;
  bool operator==(const Element&) const = default;
};

class Group {
  struct Private {};

 public:
  Group(Private, std::vector<int> cyclic_orders);
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  static GroupPtr make(std::vector<int> cyclic_orders, std::int64_t max_order = kDefaultMaxOrder);
  /// Parses "Z15", "z2xZ4", ... (case-insensitive, factors joined by 'x').
  static GroupPtr parse(std::string_view spec, std::int64_t max_order = kDefaultMaxOrder);

  int order() const { return order_; }
  int words() const { return words_; }
  const std::vector<int>& cyclic_orders() const { return orders_; }
  /// True for single-factor specs. [3,5] is cyclic as a group but not here.
  bool is_cyclic() const { return orders_.size() == 1; }
  std::string name() const;

  Element element(int index) const;
  int index(const Element& e) const;

  int add(int a, int b) const;
  int neg(int a) const;
  int sub(int a, int b) const { return add(a, neg(b)); }
  int multiple(std::int64_t k, int a) const;
  int element_order(int a) const;
  /// Largest element order.
  int exponent() const;

  /// out |= in + g. out and in must not alias.
  void translate_or(const Word* in, Word* out, int g) const;
  /// out |= -in. out and in must not alias.
  void negate_or(const Word* in, Word* out) const;

  bool same_as(const Group& other) const { return orders_ == other.orders_; }

  /// Cached subgroup lattice as raw bitsets, sorted by (order, elements).
  const std::vector<std::vector<Word>>& subgroup_bits(int max_order) const;

 private:
  void build_add_table() const;

  std::vector<int> orders_;
  std::vector<int> strides_;
  int order_ = 0;
  int words_ = 0;

  mutable std::once_flag add_table_once_;
  mutable std::vector<std::uint32_t> add_table_;

  mutable std::once_flag subgroups_once_;
  mutable std::vector<std::vector<Word>> subgroups_;
};

/// A subset of a group, one bit per element index.
class ElementSet {
 public:
  explicit ElementSet(GroupPtr g);
  ElementSet(GroupPtr g, std::span<const int> elements);
  ElementSet(GroupPtr g, std::initializer_list<int> elements);
  static ElementSet full(GroupPtr g);
  static ElementSet from_words(GroupPtr g, std::span<const Word> words);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }

  bool contains(int i) const { return bits::test(words_.data(), i); }
  void insert(int i);
  void erase(int i);
  int size() const { return bits::popcount(words_.data(), static_cast<int>(words_.size())); }
  bool empty() const;
  /// Smallest member, or -1 if empty.
  int first() const { return bits::next_set(words_.data(), static_cast<int>(words_.size()), 0); }
  std::vector<int> elements() const;

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  ElementSet& operator|=(const ElementSet& o);
  ElementSet& operator&=(const ElementSet& o);
  ElementSet& operator-=(const ElementSet& o);
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator-(ElementSet a, const ElementSet& b) { return a -= b; }

  ElementSet complement() const;
  ElementSet translated(int g) const;
  ElementSet negated() const;
  bool is_subset_of(const ElementSet& o) const;
  bool is_full() const { return size() == group_->order(); }

  bool operator==(const ElementSet& o) const;
  /// Lexicographic order of the sorted element lists.
  bool lex_less(const ElementSet& o) const;

  template <class F>
  void for_each(F&& f) const {
    const int nw = static_cast<int>(words_.size());
    for (int i = bits::next_set(words_.data(), nw, 0); i >= 0; i = bits::next_set(words_.data(), nw, i + 1)) f(i);
  }

 private:
  void check_same(const ElementSet& o) const;

  GroupPtr group_;
  std::vector<Word> words_;
};

struct SubgroupHandle {
  ElementSet elements;
  int order = 0;
  int index = 0;
};

int smallest_prime_divisor(int n);
int smallest_prime_divisor(const Group& g);
bool is_prime(int n);

/// Closure of s and 0 under addition; the empty set yields {0}.
SubgroupHandle generated_subgroup(const ElementSet& s);

/// Every subgroup exactly once, sorted by (order, element list).
std::vector<SubgroupHandle> all_subgroups(const GroupPtr& g, int max_order = kDefaultSubgroupEnumerationMax);
std::vector<SubgroupHandle> subgroups_of_order(const GroupPtr& g, int n);

/// Cosets of h, the coset of 0 first and the rest ordered by least element.
std::vector<ElementSet> cosets(const SubgroupHandle& h);
/// coset_index[x] = position in cosets(h) of the coset containing x.
std::vector<int> coset_index_map(const SubgroupHandle& h);

/// Invariant factors d1 | d2 | ... | dk, ascending, of the group given by
/// arbitrary cyclic orders; {} for the trivial group.
std::vector<int> invariant_factors(std::span<const int> cyclic_orders);

/// One invariant-factor spec per isomorphism class of abelian groups of order n.
std::vector<std::vector<int>> abelian_groups_of_order(int n);

std::string group_name(std::span<const int> cyclic_orders);

}  // namespace spanlab
