#include "spanlab/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace spanlab {

namespace {

constexpr int kAddTableMaxOrder = 1024;

bool lex_less_words(const std::vector<Word>& a, const std::vector<Word>& b) {
  // Sorted-element-list lexicographic order, see ElementSet::lex_less.
  const int nw = static_cast<int>(a.size());
  for (int i = 0; i < nw; ++i) {
    const Word diff = a[i] ^ b[i];
    if (!diff) continue;
    const int bit = std::countr_zero(diff);
    const Word above = bit == 63 ? Word{0} : (~Word{0} << (bit + 1));
    const bool in_a = (a[i] >> bit) & 1u;
    const auto& other = in_a ? b : a;
    bool other_has_more = (other[i] & above) != 0;
    for (int j = i + 1; j < nw && !other_has_more; ++j) other_has_more = other[j] != 0;
    // The set holding the smaller element wins unless the other one ran out.
    return in_a ? other_has_more : !other_has_more;
  }
  return false;
}

}  // namespace

Group::Group(Private, std::vector<int> cyclic_orders) : orders_(std::move(cyclic_orders)) {
  order_ = 1;
  strides_.assign(orders_.size(), 1);
  for (int i = static_cast<int>(orders_.size()) - 1; i >= 0; --i) {
    strides_[i] = order_;
    order_ *= orders_[i];
  }
  words_ = bits::words_for(order_);
}

GroupPtr Group::make(std::vector<int> cyclic_orders, std::int64_t max_order) {
  if (cyclic_orders.empty()) throw Error("group spec has no cyclic factors");
  std::int64_t prod = 1;
  for (int n : cyclic_orders) {
    if (n < 2) throw Error("cyclic order " + std::to_string(n) + " is below 2");
    prod *= n;
    if (prod > max_order) {
      throw Error("group order exceeds configured maximum " + std::to_string(max_order));
    }
  }
  return std::make_shared<const Group>(Private{}, std::move(cyclic_orders));
}

GroupPtr Group::parse(std::string_view spec, std::int64_t max_order) {
  std::vector<int> orders;
  std::string lowered;
  for (char c : spec) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = lowered.find('x', pos);
    const std::string token = lowered.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (token.size() < 2 || token[0] != 'z' ||
        !std::all_of(token.begin() + 1, token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw Error("malformed group spec '" + std::string(spec) + "': expected factors like Z15 joined by 'x'");
    }
    if (token.size() > 10) throw Error("cyclic order too large in group spec '" + std::string(spec) + "'");
    orders.push_back(std::stoi(token.substr(1)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return make(std::move(orders), max_order);
}

std::string Group::name() const { return group_name(orders_); }

std::string group_name(std::span<const int> cyclic_orders) {
  std::string out;
  for (std::size_t i = 0; i < cyclic_orders.size(); ++i) {
    if (i) out += 'x';
    out += 'Z' + std::to_string(cyclic_orders[i]);
  }
  return out;
}

Element Group::element(int index) const {
  if (index < 0 || index >= order_) throw Error("element index out of range");
  Element e;
  e.coords.resize(orders_.size());
  for (std::size_t i = 0; i < orders_.size(); ++i) e.coords[i] = (index / strides_[i]) % orders_[i];
  return e;
}

int Group::index(const Element& e) const {
  if (e.coords.size() != orders_.size()) throw Error("element has wrong number of coordinates");
  int idx = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (e.coords[i] < 0 || e.coords[i] >= orders_[i]) throw Error("element coordinate out of range");
    idx += e.coords[i] * strides_[i];
  }
  return idx;
}

int Group::add(int a, int b) const {
  if (orders_.size() == 1) {
    const int s = a + b;
    return s >= order_ ? s - order_ : s;
  }
  int r = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const int n = orders_[i];
    int c = (a / strides_[i]) % n + (b / strides_[i]) % n;
    if (c >= n) c -= n;
    r += c * strides_[i];
  }
  return r;
}

int Group::neg(int a) const {
  int r = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const int n = orders_[i];
    const int c = (a / strides_[i]) % n;
    r += (c == 0 ? 0 : n - c) * strides_[i];
  }
  return r;
}

int Group::multiple(std::int64_t k, int a) const {
  int r = 0;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const std::int64_t n = orders_[i];
    const std::int64_t c = (a / strides_[i]) % n;
    std::int64_t m = (c * (k % n)) % n;
    if (m < 0) m += n;
    r += static_cast<int>(m) * strides_[i];
  }
  return r;
}

int Group::element_order(int a) const {
  std::int64_t l = 1;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const int n = orders_[i];
    const int c = (a / strides_[i]) % n;
    l = std::lcm(l, static_cast<std::int64_t>(n / std::gcd(c, n)));
  }
  return static_cast<int>(l);
}

int Group::exponent() const {
  std::int64_t l = 1;
  for (int n : orders_) l = std::lcm(l, static_cast<std::int64_t>(n));
  return static_cast<int>(l);
}

void Group::build_add_table() const {
  std::call_once(add_table_once_, [this] {
    if (order_ > kAddTableMaxOrder || orders_.size() == 1) return;
    std::vector<std::uint32_t> table(static_cast<std::size_t>(order_) * order_);
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b) table[static_cast<std::size_t>(a) * order_ + b] = add(a, b);
    add_table_ = std::move(table);
  });
}

void Group::translate_or(const Word* in, Word* out, int g) const {
  if (orders_.size() == 1) {
    bits::rotate_or(in, out, order_, g);
    return;
  }
  build_add_table();
  if (!add_table_.empty()) {
    const std::uint32_t* row = add_table_.data() + static_cast<std::size_t>(g) * order_;
    for (int i = bits::next_set(in, words_, 0); i >= 0; i = bits::next_set(in, words_, i + 1)) bits::set(out, static_cast<int>(row[i]));
    return;
  }
  for (int i = bits::next_set(in, words_, 0); i >= 0; i = bits::next_set(in, words_, i + 1)) bits::set(out, add(i, g));
}

void Group::negate_or(const Word* in, Word* out) const {
  for (int i = bits::next_set(in, words_, 0); i >= 0; i = bits::next_set(in, words_, i + 1)) bits::set(out, neg(i));
}

// Breadth-first closure: every subgroup arises from a smaller one by adjoining
// one element, and S + <g> depends only on the coset g + S.
const std::vector<std::vector<Word>>& Group::subgroup_bits(int max_order) const {
  if (order_ > max_order) {
    throw Error("group " + name() + " is too large for subgroup enumeration (limit " + std::to_string(max_order) + ")");
  }
  std::call_once(subgroups_once_, [this] {
    const int nw = words_;
    std::vector<Word> trivial(nw, 0);
    bits::set(trivial.data(), 0);
    std::set<std::vector<Word>> seen{trivial};
    std::vector<std::vector<Word>> queue{trivial};
    std::vector<Word> covered(nw), next(nw), cyc(nw);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::vector<Word> s = queue[qi];
      covered = s;
      for (int g = 0; g < order_; ++g) {
        if (bits::test(covered.data(), g)) continue;
        // next = s + <g>
        std::fill(next.begin(), next.end(), 0);
        for (int m = 0, x = 0; m == 0 || x != 0; ++m, x = add(x, g)) translate_or(s.data(), next.data(), x);
        std::fill(cyc.begin(), cyc.end(), 0);
        translate_or(s.data(), cyc.data(), g);
        for (int i = 0; i < nw; ++i) covered[i] |= cyc[i];
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
    std::vector<std::vector<Word>> all(seen.begin(), seen.end());
    std::sort(all.begin(), all.end(), [nw](const std::vector<Word>& a, const std::vector<Word>& b) {
      const int ca = bits::popcount(a.data(), nw), cb = bits::popcount(b.data(), nw);
      if (ca != cb) return ca < cb;
      return lex_less_words(a, b);
    });
    subgroups_ = std::move(all);
  });
  return subgroups_;
}

// ---------------------------------------------------------------------------
// ElementSet

ElementSet::ElementSet(GroupPtr g) : group_(std::move(g)), words_(group_->words(), 0) {}

ElementSet::ElementSet(GroupPtr g, std::span<const int> elements) : ElementSet(std::move(g)) {
  for (int e : elements) insert(e);
}

ElementSet::ElementSet(GroupPtr g, std::initializer_list<int> elements)
    : ElementSet(std::move(g), std::span<const int>(elements.begin(), elements.size())) {}

ElementSet ElementSet::full(GroupPtr g) {
  ElementSet s(std::move(g));
  std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
  s.words_.back() &= bits::last_word_mask(s.group_->order());
  return s;
}

ElementSet ElementSet::from_words(GroupPtr g, std::span<const Word> words) {
  ElementSet s(std::move(g));
  if (words.size() != s.words_.size()) throw Error("bitset width does not match group");
  std::copy(words.begin(), words.end(), s.words_.begin());
  return s;
}

void ElementSet::insert(int i) {
  if (i < 0 || i >= group_->order()) throw Error("element index " + std::to_string(i) + " out of range for " + group_->name());
  bits::set(words_.data(), i);
}

void ElementSet::erase(int i) {
  if (i < 0 || i >= group_->order()) throw Error("element index out of range");
  bits::reset(words_.data(), i);
}

bool ElementSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

std::vector<int> ElementSet::elements() const {
  std::vector<int> out;
  for_each([&](int i) { out.push_back(i); });
  return out;
}

void ElementSet::check_same(const ElementSet& o) const {
  if (group_ != o.group_ && !group_->same_as(*o.group_)) {
    throw Error("element sets belong to different groups (" + group_->name() + " vs " + o.group_->name() + ")");
  }
}

ElementSet& ElementSet::operator|=(const ElementSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

ElementSet& ElementSet::operator&=(const ElementSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

ElementSet& ElementSet::operator-=(const ElementSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

ElementSet ElementSet::complement() const {
  ElementSet out(group_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  out.words_.back() &= bits::last_word_mask(group_->order());
  return out;
}

ElementSet ElementSet::translated(int g) const {
  ElementSet out(group_);
  group_->translate_or(words_.data(), out.words_.data(), g);
  return out;
}

ElementSet ElementSet::negated() const {
  ElementSet out(group_);
  group_->negate_or(words_.data(), out.words_.data());
  return out;
}

bool ElementSet::is_subset_of(const ElementSet& o) const {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool ElementSet::operator==(const ElementSet& o) const {
  return group_->same_as(*o.group_) && words_ == o.words_;
}

bool ElementSet::lex_less(const ElementSet& o) const {
  check_same(o);
  return lex_less_words(words_, o.words_);
}

// ---------------------------------------------------------------------------

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int smallest_prime_divisor(int n) {
  if (n < 2) throw Error("smallest prime divisor requires n >= 2");
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

int smallest_prime_divisor(const Group& g) { return smallest_prime_divisor(g.order()); }

SubgroupHandle generated_subgroup(const ElementSet& s) {
  const Group& g = s.group();
  ElementSet h(s.group_ptr(), {0});
  std::vector<Word> next(g.words());
  s.for_each([&](int x) {
    if (h.contains(x)) return;
    std::fill(next.begin(), next.end(), 0);
    for (int m = 0, y = 0; m == 0 || y != 0; ++m, y = g.add(y, x)) g.translate_or(h.words().data(), next.data(), y);
    h = ElementSet::from_words(s.group_ptr(), next);
  });
  const int order = h.size();
  return SubgroupHandle{std::move(h), order, g.order() / order};
}

std::vector<SubgroupHandle> all_subgroups(const GroupPtr& g, int max_order) {
  std::vector<SubgroupHandle> out;
  for (const auto& w : g->subgroup_bits(max_order)) {
    ElementSet e = ElementSet::from_words(g, w);
    const int order = e.size();
    out.push_back(SubgroupHandle{std::move(e), order, g->order() / order});
  }
  return out;
}

std::vector<SubgroupHandle> subgroups_of_order(const GroupPtr& g, int n) {
  if (n <= 0 || g->order() % n != 0) {
    throw Error(std::to_string(n) + " does not divide |G| = " + std::to_string(g->order()));
  }
  std::vector<SubgroupHandle> out;
  for (auto& h : all_subgroups(g))
    if (h.order == n) out.push_back(std::move(h));
  return out;
}

std::vector<ElementSet> cosets(const SubgroupHandle& h) {
  const GroupPtr& g = h.elements.group_ptr();
  ElementSet covered(g);
  std::vector<ElementSet> out;
  for (int x = 0; x < g->order(); ++x) {
    if (covered.contains(x)) continue;
    ElementSet c = h.elements.translated(x);
    covered |= c;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> coset_index_map(const SubgroupHandle& h) {
  const auto cs = cosets(h);
  std::vector<int> idx(h.elements.group().order(), -1);
  for (std::size_t i = 0; i < cs.size(); ++i) cs[i].for_each([&](int x) { idx[x] = static_cast<int>(i); });
  return idx;
}

std::vector<int> invariant_factors(std::span<const int> cyclic_orders) {
  std::map<int, std::vector<int>> exps;  // prime -> exponents
  for (int n : cyclic_orders) {
    for (int p = 2; n > 1; ++p) {
      if (p * p > n) p = n;
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      if (e) exps[p].push_back(e);
    }
  }
  std::size_t len = 0;
  for (auto& [p, es] : exps) {
    std::sort(es.begin(), es.end(), std::greater<>());
    len = std::max(len, es.size());
  }
  std::vector<int> out(len, 1);  // out[0] is the largest factor
  for (const auto& [p, es] : exps)
    for (std::size_t j = 0; j < es.size(); ++j)
      for (int k = 0; k < es[j]; ++k) out[j] *= p;
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> abelian_groups_of_order(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int prev) -> void {
    if (rem == 1) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    for (int d = 2; d <= rem; ++d) {
      if (rem % d != 0 || d % prev != 0) continue;
      cur.push_back(d);
      self(self, rem / d, d);
      cur.pop_back();
    }
  };
  rec(rec, n, 1);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

}  // namespace spanlab
