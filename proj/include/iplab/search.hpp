#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace iplab {

/// Found / NotFound are definitive. Unknown means a node or time budget ran
/// out before the search could decide.
enum class SearchStatus { Found, NotFound, Unknown };

struct SearchOptions {
  unsigned threads = 1;
  /// Return the least solution in the search's documented order,
  /// independent of thread count and scheduling.
  bool deterministic = false;
  std::uint64_t max_nodes = 0;              // 0 = unlimited
  std::chrono::milliseconds time_limit{0};  // 0 = unlimited
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t backtracks = 0;
  double wall_seconds = 0.0;
  std::size_t max_depth = 0;

  SearchStats& operator+=(const SearchStats& o) {
    nodes += o.nodes;
    backtracks += o.backtracks;
    wall_seconds += o.wall_seconds;
    max_depth = std::max(max_depth, o.max_depth);
    return *this;
  }
};

/// Shared node/time allowance. charge() is called in batches by workers.
class Budget {
 public:
  Budget(std::uint64_t max_nodes, std::chrono::milliseconds time_limit)
      : max_nodes_(max_nodes),
        has_deadline_(time_limit.count() > 0),
        deadline_(std::chrono::steady_clock::now() + time_limit) {}

  explicit Budget(const SearchOptions& o) : Budget(o.max_nodes, o.time_limit) {}

  /// Returns false once the budget is exhausted.
  bool charge(std::uint64_t nodes) {
    if (exhausted_.load(std::memory_order_relaxed)) return false;
    std::uint64_t total = used_.fetch_add(nodes, std::memory_order_relaxed) + nodes;
    if ((max_nodes_ != 0 && total > max_nodes_) ||
        (has_deadline_ && std::chrono::steady_clock::now() > deadline_)) {
      exhausted_.store(true, std::memory_order_relaxed);
      return false;
    }
    return true;
  }

  bool exhausted() const { return exhausted_.load(std::memory_order_relaxed); }
  std::uint64_t used() const { return used_.load(std::memory_order_relaxed); }

 private:
  std::uint64_t max_nodes_;
  bool has_deadline_;
  std::chrono::steady_clock::time_point deadline_;
  std::atomic<std::uint64_t> used_{0};
  std::atomic<bool> exhausted_{false};
};

namespace detail {

enum class BranchResult { Found, Exhausted, Aborted };

inline constexpr std::size_t kNoBranch = std::numeric_limits<std::size_t>::max();

/// Polled by a running branch; true when it should give up.
class StopSignal {
 public:
  StopSignal(const Budget& budget, const std::atomic<std::size_t>& best,
             const std::atomic<bool>& failed, std::size_t index, bool deterministic)
      : budget_(budget), best_(best), failed_(failed), index_(index),
        deterministic_(deterministic) {}

  bool operator()() const {
    if (budget_.exhausted() || failed_.load(std::memory_order_relaxed)) return true;
    std::size_t b = best_.load(std::memory_order_relaxed);
    return deterministic_ ? b < index_ : b != kNoBranch;
  }

 private:
  const Budget& budget_;
  const std::atomic<std::size_t>& best_;
  const std::atomic<bool>& failed_;
  std::size_t index_;
  bool deterministic_;
};

struct BranchOutcome {
  std::optional<std::size_t> found;
  /// Some branch that could have held the answer was cut short by the budget.
  bool budget_hit = false;
};

/// Explores branches 0..count-1 (in search order) across worker threads.
/// fn(branch, worker, stop) -> BranchResult. In deterministic mode the
/// reported branch is the least one that found a solution; otherwise it is
/// whichever finished first. The first exception thrown by fn stops the
/// other workers and is rethrown here.
template <class Fn>
BranchOutcome explore_branches(std::size_t count, unsigned threads, bool deterministic,
                               Budget& budget, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{kNoBranch};
  std::atomic<std::size_t> first_found{kNoBranch};
  std::vector<char> aborted(count, 0);
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&](unsigned worker_index) {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load()) return;
      StopSignal stop(budget, best, failed, i, deterministic);
      if (stop()) {
        aborted[i] = 1;
        continue;
      }
      BranchResult r;
      try {
        r = fn(i, worker_index, stop);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
      if (r == BranchResult::Found) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        std::size_t none = kNoBranch;
        first_found.compare_exchange_strong(none, i);
      } else if (r == BranchResult::Aborted) {
        aborted[i] = 1;
      }
    }
  };

  unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (n_workers <= 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker, w);
  }
  if (error) std::rethrow_exception(error);

  BranchOutcome out;
  std::size_t winner = deterministic ? best.load() : first_found.load();
  if (winner != kNoBranch) out.found = winner;
  std::size_t relevant = winner == kNoBranch ? count : winner;
  if (budget.exhausted()) {
    for (std::size_t i = 0; i < relevant; ++i) {
      if (aborted[i]) {
        out.budget_hit = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace detail
}  // namespace iplab
