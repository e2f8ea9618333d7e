#include "spanlab/search.hpp"

#include <numeric>

namespace spanlab {

bool BudgetClock::charge(std::uint64_t nodes) {
  const std::uint64_t total = nodes_.fetch_add(nodes, std::memory_order_relaxed) + nodes;
  if (budget_.max_nodes && total >= budget_.max_nodes) exhausted_.store(true, std::memory_order_relaxed);
  if (budget_.max_seconds > 0 && elapsed_seconds() >= budget_.max_seconds) exhausted_.store(true, std::memory_order_relaxed);
  return !exhausted();
}

double BudgetClock::elapsed_seconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

// ---------------------------------------------------------------------------
// AvoidingWalker

AvoidingWalker::AvoidingWalker(const Group& g, int target, int size, bool prune, int first_element)
    : g_(g), target_(target), size_(size), prune_(prune), first_(first_element), words_(g.words()) {
  if (size < 1) throw Error("avoiding search needs a positive set size");
  if (target < 0 || target >= g.order()) throw Error("search target out of range");
  store_.assign(static_cast<std::size_t>(size + 1) * 3 * words_, 0);
  scratch_.assign(words_, 0);
  chosen_.assign(size, -1);
  cursor_.assign(size + 1, 0);
  init_root();
}

void AvoidingWalker::init_root() {
  Word* root = level(0);
  std::fill(root, root + 3 * words_, 0);
  Word* pool = root + kPool * words_;
  for (int x = 1; x < g_.order(); ++x) bits::set(pool, x);
  if (prune_) bits::reset(pool, target_);
  cursor_[0] = 0;
  depth_ = 0;
}

void AvoidingWalker::build_child(int d, int x) {
  const Word* parent = level(d);
  Word* child = level(d + 1);
  const int w = words_;
  Word* sums = child + kSums * w;
  std::copy(parent + kSums * w, parent + kSums * w + w, sums);
  std::fill(scratch_.begin(), scratch_.end(), 0);
  g_.translate_or(parent + kSums * w, scratch_.data(), x);
  for (int i = 0; i < w; ++i) sums[i] |= scratch_[i];
  bits::set(sums, x);

  Word* pool = child + kPool * w;
  std::copy(parent + kPool * w, parent + kPool * w + w, pool);
  bits::clear_through(pool, w, x);

  if (prune_) {
    // forbid' = forbid | (forbid - x) | {t - x}
    Word* forbid = child + kForbid * w;
    std::copy(parent + kForbid * w, parent + kForbid * w + w, forbid);
    std::fill(scratch_.begin(), scratch_.end(), 0);
    g_.translate_or(parent + kForbid * w, scratch_.data(), g_.neg(x));
    for (int i = 0; i < w; ++i) forbid[i] |= scratch_[i];
    bits::set(forbid, g_.sub(target_, x));
    for (int i = 0; i < w; ++i) pool[i] &= ~forbid[i];
  }
  cursor_[d + 1] = 0;
}

AvoidingWalker::Step AvoidingWalker::next(std::uint64_t node_limit) {
  const std::uint64_t start = nodes_;
  while (depth_ >= 0) {
    if (depth_ == size_) {
      --depth_;
      if (!prune_ && bits::test(current_sums(), target_)) continue;
      return Step::found;
    }
    const Word* pool = level(depth_) + kPool * words_;
    int x = bits::next_set(pool, words_, cursor_[depth_]);
    if (depth_ == 0 && first_ >= 0) x = bits::next_set(pool, words_, std::max(cursor_[0], first_)) == first_ ? first_ : -1;
    if (x < 0 || bits::popcount_from(pool, words_, x) < size_ - depth_) {
      --depth_;
      continue;
    }
    if (node_limit && nodes_ - start >= node_limit) return Step::paused;
    cursor_[depth_] = x + 1;
    chosen_[depth_] = x;
    build_child(depth_, x);
    ++depth_;
    ++nodes_;
  }
  return Step::exhausted;
}

Frontier AvoidingWalker::frontier() const {
  if (depth_ < 0) return Frontier{{}, -1};
  return Frontier{std::vector<int>(chosen_.begin(), chosen_.begin() + depth_), cursor_[depth_]};
}

void AvoidingWalker::restore(const Frontier& f) {
  init_root();
  if (f.cursor < 0) {
    depth_ = -1;
    return;
  }
  if (static_cast<int>(f.prefix.size()) >= size_) throw Error("checkpoint frontier deeper than the set size");
  for (std::size_t d = 0; d < f.prefix.size(); ++d) {
    const int x = f.prefix[d];
    if (x < 0 || x >= g_.order() || !bits::test(level(static_cast<int>(d)) + kPool * words_, x)) {
      throw Error("checkpoint frontier is not a reachable search state");
    }
    chosen_[d] = x;
    cursor_[d] = x + 1;
    build_child(static_cast<int>(d), x);
  }
  depth_ = static_cast<int>(f.prefix.size());
  cursor_[depth_] = f.cursor;
}

// ---------------------------------------------------------------------------
// Branch and bound for the maximum

namespace {

class MaxSearch {
 public:
  MaxSearch(const Group& g, int target, const MaxAvoidOptions& opt, SharedBest& best, BudgetClock& clock)
      : g_(g), t_(target), prune_(opt.prune), best_(best), clock_(clock), w_(g.words()) {
    const int levels = g.order() + 1;
    store_.assign(static_cast<std::size_t>(levels) * 3 * w_, 0);
    scratch_.assign(w_, 0);
    Word* pool = level(0) + 2 * w_;
    for (int x = 1; x < g.order(); ++x) bits::set(pool, x);
    if (prune_) bits::reset(pool, t_);
  }

  void run() {
    rec(0);
    clock_.charge(pending_);
  }

 private:
  Word* level(int d) { return store_.data() + static_cast<std::size_t>(d) * 3 * w_; }

  void rec(int d) {
    Word* lv = level(d);
    if (d > 0 && (prune_ || !bits::test(lv, t_))) best_.offer(d);
    const Word* pool = lv + 2 * w_;
    for (int x = bits::next_set(pool, w_, 0); x >= 0; x = bits::next_set(pool, w_, x + 1)) {
      if (d + bits::popcount_from(pool, w_, x) <= best_.get()) return;
      if (++pending_ == 4096) {
        const bool ok = clock_.charge(pending_);
        pending_ = 0;
        if (!ok) stop_ = true;
      }
      if (stop_ || clock_.exhausted()) {
        stop_ = true;
        return;
      }
      build(d, x);
      rec(d + 1);
      if (stop_) return;
    }
  }

  void build(int d, int x) {
    const Word* p = level(d);
    Word* c = level(d + 1);
    std::copy(p, p + w_, c);
    std::fill(scratch_.begin(), scratch_.end(), 0);
    g_.translate_or(p, scratch_.data(), x);
    for (int i = 0; i < w_; ++i) c[i] |= scratch_[i];
    bits::set(c, x);
    Word* pool = c + 2 * w_;
    std::copy(p + 2 * w_, p + 3 * w_, pool);
    bits::clear_through(pool, w_, x);
    if (prune_) {
      Word* forbid = c + w_;
      std::copy(p + w_, p + 2 * w_, forbid);
      std::fill(scratch_.begin(), scratch_.end(), 0);
      g_.translate_or(p + w_, scratch_.data(), g_.neg(x));
      for (int i = 0; i < w_; ++i) forbid[i] |= scratch_[i];
      bits::set(forbid, g_.sub(t_, x));
      for (int i = 0; i < w_; ++i) pool[i] &= ~forbid[i];
    }
  }

  const Group& g_;
  int t_;
  bool prune_;
  SharedBest& best_;
  BudgetClock& clock_;
  int w_;
  std::vector<Word> store_, scratch_;
  std::uint64_t pending_ = 0;
  bool stop_ = false;
};

}  // namespace

void max_avoiding(const Group& g, int target, const MaxAvoidOptions& opt, SharedBest& best, BudgetClock& clock) {
  MaxSearch(g, target, opt, best, clock).run();
}

std::optional<std::vector<int>> first_avoiding(const Group& g, int target, int size, BudgetClock& clock) {
  AvoidingWalker w(g, target, size);
  while (true) {
    const std::uint64_t before = w.nodes();
    const auto step = w.next(4096);
    clock.charge(w.nodes() - before);
    if (step == AvoidingWalker::Step::found) return w.current();
    if (step == AvoidingWalker::Step::exhausted) return std::nullopt;
    if (clock.exhausted()) return std::nullopt;
  }
}

std::vector<int> search_targets(const Group& g, bool orbit_reduction) {
  std::vector<int> out;
  if (orbit_reduction && g.is_cyclic()) {
    // Unit orbits of Z_n are the classes of equal gcd(t, n); gcd is the least member.
    out.push_back(0);
    for (int d = 1; d < g.order(); ++d)
      if (g.order() % d == 0) out.push_back(d);
    return out;
  }
  out.resize(g.order());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<int> unit_multipliers(const Group& g) {
  if (!g.is_cyclic()) throw Error("unit multipliers are only used for single-factor specs");
  std::vector<int> out;
  for (int u = 1; u < g.order(); ++u)
    if (std::gcd(u, g.order()) == 1) out.push_back(u);
  if (g.order() == 2) out = {1};
  return out;
}

}  // namespace spanlab
