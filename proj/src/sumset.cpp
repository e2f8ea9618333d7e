#include "spanlab/sumset.hpp"

#include <algorithm>

namespace spanlab {

void extend_subset_sums(const Group& g, Word* sums, int x, Word* scratch) {
  const int nw = g.words();
  std::fill(scratch, scratch + nw, 0);
  g.translate_or(sums, scratch, x);
  for (int i = 0; i < nw; ++i) sums[i] |= scratch[i];
  bits::set(sums, x);
}

ElementSet subset_sums(const Sequence& t) {
  if (t.terms.empty()) return ElementSet(t.group, {0});
  ElementSet n(t.group);
  std::vector<Word> scratch(t.group->words());
  for (int x : t.terms) {
    if (x < 0 || x >= t.group->order()) throw Error("sequence term out of range");
    extend_subset_sums(*t.group, n.words().data(), x, scratch.data());
  }
  return n;
}

ElementSet subset_sums(const ElementSet& a) { return subset_sums(Sequence::from_set(a)); }

ElementSet subset_sums_with_zero(const Sequence& t) {
  ElementSet s = subset_sums(t);
  s.insert(0);
  return s;
}

ElementSet subset_sums_with_zero(const ElementSet& a) { return subset_sums_with_zero(Sequence::from_set(a)); }

ElementSet restricted_sums(const Sequence& t, int h) {
  if (h < 0 || h > t.length()) {
    throw Error("restricted sum size " + std::to_string(h) + " outside [0, " + std::to_string(t.length()) + "]");
  }
  const Group& g = *t.group;
  const int nw = g.words();
  // layer j holds sums of exactly j terms among those processed so far
  std::vector<std::vector<Word>> layer(h + 1, std::vector<Word>(nw, 0));
  bits::set(layer[0].data(), 0);
  int processed = 0;
  for (int x : t.terms) {
    ++processed;
    for (int j = std::min(h, processed); j >= 1; --j) g.translate_or(layer[j - 1].data(), layer[j].data(), x);
  }
  return ElementSet::from_words(t.group, layer[h]);
}

ElementSet restricted_sums(const ElementSet& a, int h) { return restricted_sums(Sequence::from_set(a), h); }

ElementSet sumset(const ElementSet& a, const ElementSet& b) {
  if (a.empty() || b.empty()) throw Error("sumset operands must be nonempty");
  if (!a.group().same_as(b.group())) throw Error("sumset operands belong to different groups");
  const ElementSet& big = a.size() >= b.size() ? a : b;
  const ElementSet& small = a.size() >= b.size() ? b : a;
  ElementSet out(a.group_ptr());
  small.for_each([&](int x) { a.group().translate_or(big.words().data(), out.words().data(), x); });
  return out;
}

bool spans(const ElementSet& a) { return subset_sums(a).is_full(); }

bool is_complete(const ElementSet& a) {
  if (a.empty()) throw Error("completeness is defined for nonempty sets only");
  return subset_sums(a) == generated_subgroup(a).elements;
}

}  // namespace spanlab
