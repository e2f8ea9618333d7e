#pragma once

// Depth-first search over subsets A of G\{0} whose subset sums avoid a fixed
// target t. Shared by the critical-number search and extremal enumeration.
//
// A fails to span G iff some t is missing from Sigma(A). For a fixed t each
// search level keeps three bitsets:
//   sums   Sigma(prefix)
//   forbid t - Sigma(prefix); x is addable iff x != t and x not in forbid
//   pool   addable candidates above the last chosen element
// forbid only grows along a branch, so a candidate struck from the pool never
// becomes addable again deeper down. This is the spanning prune: any prefix
// whose sums reach t is never built.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "spanlab/group.hpp"

namespace spanlab {

struct SearchBudget {
  std::uint64_t max_nodes = 0;  // 0 = unlimited
  double max_seconds = 0;       // 0 = unlimited
};

/// Thread-safe node/time accounting against a SearchBudget.
class BudgetClock {
 public:
  explicit BudgetClock(SearchBudget b) : budget_(b), start_(std::chrono::steady_clock::now()) {}
  /// Adds nodes; returns false once the budget is exhausted.
  bool charge(std::uint64_t nodes);
  bool exhausted() const { return exhausted_.load(std::memory_order_relaxed); }
  std::uint64_t nodes() const { return nodes_.load(std::memory_order_relaxed); }
  double elapsed_seconds() const;

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> exhausted_{false};
};

/// Saved DFS position: the chosen prefix plus the next candidate to try at
/// the deepest level.
struct Frontier {
  std::vector<int> prefix;
  int cursor = 0;
  bool operator==(const Frontier&) const = default;
};

/// Enumerates, in lexicographic order, every A with |A| = size, 0 not in A
/// and target not in Sigma(A). With first_element >= 0 only sets whose least
/// element is first_element are produced.
class AvoidingWalker {
 public:
  AvoidingWalker(const Group& g, int target, int size, bool prune = true, int first_element = -1);

  enum class Step { found, exhausted, paused };
  /// Advances to the next set. Pauses (state intact) after node_limit new
  /// nodes when node_limit > 0.
  Step next(std::uint64_t node_limit = 0);

  const std::vector<int>& current() const { return chosen_; }
  const Word* current_sums() const { return level(size_) + kSums * words_; }
  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return depth_ < 0; }
  int target() const { return target_; }

  Frontier frontier() const;
  /// Rebuilds the level stack along f.prefix; throws on an inconsistent frontier.
  void restore(const Frontier& f);

 private:
  static constexpr int kSums = 0, kForbid = 1, kPool = 2;
  Word* level(int d) { return store_.data() + static_cast<std::size_t>(d) * 3 * words_; }
  const Word* level(int d) const { return store_.data() + static_cast<std::size_t>(d) * 3 * words_; }
  void init_root();
  void build_child(int d, int x);

  const Group& g_;
  int target_;
  int size_;
  bool prune_;
  int first_;
  int words_;
  std::vector<Word> store_;
  std::vector<Word> scratch_;
  std::vector<int> chosen_;
  std::vector<int> cursor_;
  int depth_ = 0;
  std::uint64_t nodes_ = 0;
};

struct MaxAvoidOptions {
  bool prune = true;  // false: plain enumeration, sums checked only at records
};

/// Largest set size seen so far across concurrent target searches.
class SharedBest {
 public:
  int get() const { return best_.load(std::memory_order_relaxed); }
  void offer(int size) {
    int cur = best_.load(std::memory_order_relaxed);
    while (size > cur && !best_.compare_exchange_weak(cur, size, std::memory_order_relaxed)) {
    }
  }

 private:
  std::atomic<int> best_{0};
};

/// Branch and bound for the largest A in G\{0} with target not in Sigma(A).
/// Only sizes strictly above best.get() are explored; improvements are
/// offered to best. Stops early when the clock runs out.
void max_avoiding(const Group& g, int target, const MaxAvoidOptions& opt, SharedBest& best, BudgetClock& clock);

/// Lexicographically least A with |A| = size avoiding target, if any.
std::optional<std::vector<int>> first_avoiding(const Group& g, int target, int size, BudgetClock& clock);

/// Search targets: one per unit-multiplication orbit for single-factor specs
/// when orbit_reduction is set, every element otherwise. Ascending.
std::vector<int> search_targets(const Group& g, bool orbit_reduction);

/// Units of Z_n for a single-factor spec, ascending.
std::vector<int> unit_multipliers(const Group& g);

/// Runs fn(i) for i in [0, n) on up to `threads` workers pulling indices
/// from a shared counter.
template <class F>
void parallel_for(int n, int threads, F&& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace spanlab
