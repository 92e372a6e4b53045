#include "iplab/witness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <string>

namespace iplab {

namespace {

constexpr std::size_t kMaxGenerators = 24;
constexpr std::uint64_t kChargeBatch = 1024;

template <class T>
std::vector<SubsetSum> closure_impl(std::span<const T> generators) {
  if (generators.size() > kMaxGenerators) {
    throw std::invalid_argument("fs_closure supports at most " + std::to_string(kMaxGenerators) +
                                " generators");
  }
  std::vector<mpz_class> sums(std::size_t{1} << generators.size());
  for (std::uint64_t mask = 1; mask < sums.size(); ++mask) {
    sums[mask] = sums[mask & (mask - 1)] + mpz_class(generators[std::countr_zero(mask)]);
  }
  std::sort(sums.begin() + 1, sums.end());
  std::vector<SubsetSum> out;
  for (std::size_t i = 1; i < sums.size(); ++i) {
    if (!out.empty() && out.back().value == sums[i]) {
      ++out.back().multiplicity;
    } else {
      out.push_back({sums[i], 1});
    }
  }
  return out;
}

mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

class DirectWorker {
 public:
  DirectWorker(const std::vector<char>& in_s, const std::vector<std::uint64_t>& s_list,
               std::uint64_t bound, unsigned m)
      : in_s_(in_s), s_list_(s_list), bound_(bound), m_(m) {}

  detail::BranchResult run(std::size_t first, Budget& budget, const detail::StopSignal& stop,
                           SearchStats& stats) {
    stats_ = &stats;
    budget_ = &budget;
    stop_ = &stop;
    pending_ = 0;
    chosen_.assign(1, s_list_[first]);
    sums_.assign(1, s_list_[first]);
    ++stats.nodes;
    auto r = extend(first + 1, s_list_[first]);
    if (!budget.charge(pending_) && r == detail::BranchResult::Exhausted) {
      return detail::BranchResult::Aborted;
    }
    return r;
  }

  const std::vector<std::uint64_t>& chosen() const { return chosen_; }

 private:
  detail::BranchResult extend(std::size_t from, std::uint64_t total) {
    stats_->max_depth = std::max(stats_->max_depth, chosen_.size());
    if (chosen_.size() == m_) return detail::BranchResult::Found;
    const std::size_t base = sums_.size();
    for (std::size_t i = from; i < s_list_.size(); ++i) {
      const std::uint64_t a = s_list_[i];
      // The largest new sum is total + a.
      if (a > bound_ - total) break;
      ++stats_->nodes;
      if (++pending_ == kChargeBatch) {
        bool ok = budget_->charge(pending_);
        pending_ = 0;
        if (!ok || (*stop_)()) return detail::BranchResult::Aborted;
      }
      bool ok = true;
      for (std::size_t j = 0; j < base && ok; ++j) ok = in_s_[sums_[j] + a] != 0;
      if (!ok) continue;
      sums_.push_back(a);
      for (std::size_t j = 0; j < base; ++j) sums_.push_back(sums_[j] + a);
      chosen_.push_back(a);
      auto r = extend(i + 1, total + a);
      if (r != detail::BranchResult::Exhausted) return r;
      chosen_.pop_back();
      sums_.resize(base);
      ++stats_->backtracks;
    }
    return detail::BranchResult::Exhausted;
  }

  const std::vector<char>& in_s_;
  const std::vector<std::uint64_t>& s_list_;
  std::uint64_t bound_;
  unsigned m_;
  std::vector<std::uint64_t> chosen_;
  std::vector<std::uint64_t> sums_;
  SearchStats* stats_ = nullptr;
  Budget* budget_ = nullptr;
  const detail::StopSignal* stop_ = nullptr;
  std::uint64_t pending_ = 0;
};

}  // namespace

std::vector<SubsetSum> fs_closure(std::span<const mpz_class> generators) {
  return closure_impl(generators);
}

std::vector<SubsetSum> fs_closure(std::span<const std::uint64_t> generators) {
  std::vector<mpz_class> g;
  g.reserve(generators.size());
  for (std::uint64_t v : generators) g.push_back(to_mpz(v));
  return closure_impl<mpz_class>(g);
}

WitnessResult ip_witness_from_proof(const MultiplicativeFunction& f, unsigned m,
                                    unsigned n_prefix, const SearchOptions& options,
                                    unsigned cap) {
  if (f.mode() != FunctionMode::FiniteSupport) {
    throw UnsupportedMode("the proof pipeline evaluates f at huge subset sums and needs a "
                          "finite-support function");
  }
  if (m < 2) throw std::invalid_argument("the proof pipeline needs m >= 2 blocks");

  WitnessResult result;
  const BlockSequence seq = generate_block_sequence(n_prefix, cap);
  if (n_prefix < m) {
    // {1..n_prefix} cannot hold m disjoint blocks.
    result.status = SearchStatus::NotFound;
    return result;
  }

  SubsetColoring coloring;
  coloring.n = n_prefix;
  coloring.classes = f.modulus();
  coloring.color = [&](const IndexSet& a) { return f.evaluate(seq.subset_sum(a)).value + 1; };

  HindmanResult h = monochromatic_fu_search(coloring, m, options);
  result.stats = h.stats;
  if (h.status != SearchStatus::Found) {
    result.status = h.status;
    return result;
  }

  IPWitness w;
  w.f = f;
  w.provenance = Provenance::ProofPipeline;
  w.blocks = h.family->blocks;
  for (const auto& block : w.blocks) w.b_values.push_back(seq.subset_sum(block));
  w.base = w.b_values.front();

  const ResidueClass coset = f.evaluate(w.base);
  for (const auto& b : w.b_values) {
    if (!mpz_divisible_p(b.get_mpz_t(), w.base.get_mpz_t())) {
      throw std::logic_error("b_1 does not divide some b_i; block divisibility is broken");
    }
    if (f.evaluate(b) != coset) {
      throw std::logic_error("b-values of a monochromatic family lie in different classes");
    }
  }
  for (std::size_t i = 1; i < w.b_values.size(); ++i) {
    mpz_class a;
    mpz_divexact(a.get_mpz_t(), w.b_values[i].get_mpz_t(), w.base.get_mpz_t());
    w.generators.push_back(std::move(a));
  }
  if (!verify_witness(w)) {
    throw std::logic_error("proof pipeline produced a witness that fails verification");
  }
  result.status = SearchStatus::Found;
  result.witness = std::move(w);
  return result;
}

WitnessResult ip_witness_direct(const MultiplicativeFunction& f, unsigned m,
                                std::uint64_t bound, const SearchOptions& options) {
  if (m == 0) throw std::invalid_argument("number of generators m must be positive");
  if (bound == 0) throw std::invalid_argument("search bound N must be positive");
  if (!f.can_evaluate(bound + 1)) {
    throw std::out_of_range("direct search needs f up to N + 1 = " + std::to_string(bound + 1));
  }
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<char> in_s(bound + 1, 0);
  std::vector<std::uint64_t> s_list;
  bool prev = f.in_kernel(std::uint64_t{1});
  for (std::uint64_t a = 1; a <= bound; ++a) {
    bool next = f.in_kernel(a + 1);
    if (prev && next) {
      in_s[a] = 1;
      s_list.push_back(a);
    }
    prev = next;
  }

  const unsigned n_workers = std::max(1u, options.threads);
  std::vector<DirectWorker> workers;
  workers.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) workers.emplace_back(in_s, s_list, bound, m);
  std::vector<SearchStats> worker_stats(n_workers);
  std::vector<std::vector<std::uint64_t>> found(s_list.size());

  Budget budget(options);
  auto outcome = detail::explore_branches(
      s_list.size(), n_workers, options.deterministic, budget,
      [&](std::size_t i, unsigned w, const detail::StopSignal& stop) {
        auto r = workers[w].run(i, budget, stop, worker_stats[w]);
        if (r == detail::BranchResult::Found) found[i] = workers[w].chosen();
        return r;
      });

  WitnessResult result;
  for (const auto& s : worker_stats) result.stats += s;
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!outcome.found) {
    result.status = outcome.budget_hit ? SearchStatus::Unknown : SearchStatus::NotFound;
    return result;
  }
  IPWitness w;
  w.f = f;
  w.provenance = Provenance::DirectSearch;
  for (std::uint64_t a : found[*outcome.found]) w.generators.push_back(to_mpz(a));
  if (!verify_witness(w)) {
    throw std::logic_error("direct search produced a witness that fails verification");
  }
  result.status = SearchStatus::Found;
  result.witness = std::move(w);
  return result;
}

bool verify_witness(const IPWitness& w) {
  for (std::size_t i = 0; i < w.generators.size(); ++i) {
    if (sgn(w.generators[i]) <= 0) return false;
    if (i > 0 && !(w.generators[i - 1] < w.generators[i])) return false;
  }
  for (const auto& s : fs_closure(std::span<const mpz_class>(w.generators))) {
    if (!w.f.in_kernel(s.value)) return false;
    if (!w.f.in_kernel(mpz_class(s.value + 1))) return false;
  }
  return true;
}

}  // namespace iplab
