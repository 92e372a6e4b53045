#include "iplab/hindman.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace iplab {

namespace {

constexpr unsigned kMaxGround = 30;
constexpr std::uint64_t kChargeBatch = 256;

unsigned checked_color(const SubsetColoring& coloring, const IndexSet& s) {
  unsigned c = coloring.color(s);
  if (c < 1 || c > coloring.classes) {
    throw std::invalid_argument("coloring returned " + std::to_string(c) + " for " +
                                s.to_string() + ", expected 1.." +
                                std::to_string(coloring.classes));
  }
  return c;
}

class HindmanWorker {
 public:
  HindmanWorker(const SubsetColoring& coloring, unsigned m) : coloring_(coloring), m_(m) {}

  detail::BranchResult run(std::uint64_t first, Budget& budget, const detail::StopSignal& stop,
                           SearchStats& stats) {
    stats_ = &stats;
    budget_ = &budget;
    stop_ = &stop;
    pending_ = 0;
    chosen_.clear();
    unions_.clear();
    target_ = color(first);
    chosen_.push_back(first);
    unions_.push_back(first);
    ++stats.nodes;
    auto r = extend(1, top_bit(first) + 1);
    if (!budget.charge(pending_) && r == detail::BranchResult::Exhausted) {
      return detail::BranchResult::Aborted;
    }
    return r;
  }

  BlockFamily family() const {
    BlockFamily f;
    for (std::uint64_t b : chosen_) f.blocks.push_back(IndexSet::from_mask(b));
    return f;
  }

  unsigned target() const { return target_; }

 private:
  static unsigned top_bit(std::uint64_t x) { return 63 - std::countl_zero(x); }

  unsigned color(std::uint64_t mask) {
    auto [it, fresh] = memo_.try_emplace(mask, 0);
    if (fresh) it->second = checked_color(coloring_, IndexSet::from_mask(mask));
    return it->second;
  }

  detail::BranchResult extend(unsigned level, unsigned lo) {
    stats_->max_depth = std::max<std::size_t>(stats_->max_depth, level);
    if (level == m_) return detail::BranchResult::Found;
    if (lo > coloring_.n) return detail::BranchResult::Exhausted;
    const std::uint64_t allowed = ((std::uint64_t{2} << coloring_.n) - 1) & ~((std::uint64_t{1} << lo) - 1);
    const std::size_t base = unions_.size();
    for (std::uint64_t b = allowed & -allowed; b != 0; b = (b - allowed) & allowed) {
      ++stats_->nodes;
      if (++pending_ == kChargeBatch) {
        bool ok = budget_->charge(pending_);
        pending_ = 0;
        if (!ok || (*stop_)()) return detail::BranchResult::Aborted;
      }
      if (color(b) != target_) continue;
      bool ok = true;
      for (std::size_t i = 0; i < base; ++i) {
        if (color(unions_[i] | b) != target_) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      unions_.push_back(b);
      for (std::size_t i = 0; i < base; ++i) unions_.push_back(unions_[i] | b);
      chosen_.push_back(b);
      auto r = extend(level + 1, top_bit(b) + 1);
      if (r != detail::BranchResult::Exhausted) return r;
      chosen_.pop_back();
      unions_.resize(base);
      ++stats_->backtracks;
    }
    return detail::BranchResult::Exhausted;
  }

  const SubsetColoring& coloring_;
  unsigned m_;
  unsigned target_ = 0;
  std::vector<std::uint64_t> chosen_;
  std::vector<std::uint64_t> unions_;
  std::unordered_map<std::uint64_t, unsigned> memo_;
  SearchStats* stats_ = nullptr;
  Budget* budget_ = nullptr;
  const detail::StopSignal* stop_ = nullptr;
  std::uint64_t pending_ = 0;
};

}  // namespace

bool BlockFamily::is_increasing() const {
  if (blocks.empty()) return false;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (!blocks[i - 1].precedes(blocks[i])) return false;
  }
  return true;
}

std::vector<IndexSet> fu_closure(const BlockFamily& family) {
  const std::size_t m = family.blocks.size();
  if (m >= 32) throw std::invalid_argument("fu_closure: too many blocks");
  std::vector<IndexSet> out;
  out.reserve((std::size_t{1} << m) - 1);
  for (std::uint64_t sel = 1; sel < (std::uint64_t{1} << m); ++sel) {
    std::vector<unsigned> e;
    for (std::uint64_t x = sel; x; x &= x - 1) {
      const auto& b = family.blocks[std::countr_zero(x)].elements();
      e.insert(e.end(), b.begin(), b.end());
    }
    out.emplace_back(std::move(e));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_monochromatic(const BlockFamily& family, const SubsetColoring& coloring) {
  auto sets = fu_closure(family);
  if (sets.empty()) return true;
  const unsigned c = checked_color(coloring, sets.front());
  for (const auto& s : sets) {
    if (checked_color(coloring, s) != c) return false;
  }
  return true;
}

HindmanResult monochromatic_fu_search(const SubsetColoring& coloring, unsigned m,
                                      const SearchOptions& options) {
  if (m == 0) throw std::invalid_argument("number of blocks m must be positive");
  if (coloring.n == 0 || coloring.n > kMaxGround) {
    throw std::invalid_argument("ground set size n must be in 1.." + std::to_string(kMaxGround));
  }
  if (coloring.classes == 0) throw std::invalid_argument("coloring needs at least one class");
  if (!coloring.color) throw std::invalid_argument("coloring has no color function");

  const auto t0 = std::chrono::steady_clock::now();
  const unsigned n_workers = std::max(1u, options.threads);
  std::vector<HindmanWorker> workers;
  workers.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) workers.emplace_back(coloring, m);
  std::vector<SearchStats> worker_stats(n_workers);

  // Branch i fixes A_1 to the i-th subset of {1..n}; bit j of the mask is element j.
  const std::size_t branches = (std::size_t{1} << coloring.n) - 1;
  std::vector<std::optional<std::pair<BlockFamily, unsigned>>> found(branches);
  Budget budget(options);
  auto outcome = detail::explore_branches(
      branches, n_workers, options.deterministic, budget,
      [&](std::size_t i, unsigned w, const detail::StopSignal& stop) {
        auto r = workers[w].run(static_cast<std::uint64_t>(i + 1) << 1, budget, stop,
                                worker_stats[w]);
        if (r == detail::BranchResult::Found) {
          found[i].emplace(workers[w].family(), workers[w].target());
        }
        return r;
      });

  HindmanResult result;
  for (const auto& s : worker_stats) result.stats += s;
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (outcome.found) {
    auto& [family, color] = *found[*outcome.found];
    if (!family.is_increasing() || family.blocks.size() != m ||
        !is_monochromatic(family, coloring)) {
      throw std::logic_error("monochromatic_fu_search produced a family that fails verification");
    }
    result.status = SearchStatus::Found;
    result.family = std::move(family);
    result.color = color;
  } else {
    result.status = outcome.budget_hit ? SearchStatus::Unknown : SearchStatus::NotFound;
  }
  return result;
}

}  // namespace iplab
