#include "iplab/hildebrand.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>
#include <vector>

namespace iplab {

namespace {

constexpr std::uint64_t kChargeBatch = 1024;
constexpr std::uint64_t kMaxHorizon = std::numeric_limits<std::uint32_t>::max() - 1;

/// Static structure of one (k, r, bound) instance: which numbers get their
/// value fixed, and which windows become decidable, when each prime is set.
class AvoidanceProblem {
 public:
  AvoidanceProblem(unsigned k, unsigned r, std::uint64_t bound, bool symmetry)
      : k_(k), r_(r), bound_(bound), horizon_(static_cast<std::uint32_t>(bound + r - 1)) {
    FactorizationSieve sieve(std::max<std::uint32_t>(horizon_, 2));
    for (std::uint32_t p : sieve.primes()) {
      if (p > horizon_) break;
      primes_.push_back(p);
    }
    // prime_index[p] for primes; gpf_index[n] = index of n's largest prime factor.
    std::vector<std::uint32_t> prime_index(horizon_ + 1, 0);
    for (std::uint32_t i = 0; i < primes_.size(); ++i) prime_index[primes_[i]] = i;
    std::vector<std::uint32_t> gpf(horizon_ + 1, 0);
    numbers_.resize(primes_.size());
    for (std::uint32_t n = 2; n <= horizon_; ++n) {
      std::uint32_t p = sieve.smallest_factor(n);
      gpf[n] = std::max(p, gpf[n / p]);
      numbers_[prime_index[gpf[n]]].push_back(n);
    }
    windows_.resize(primes_.size());
    for (std::uint64_t a = 1; a <= bound_; ++a) {
      std::uint32_t top = 0;
      for (unsigned j = 0; j < r_; ++j) top = std::max(top, gpf[a + j]);
      // top == 0 only for the window {1}, which exists only when r == 1.
      if (top == 0) {
        trivially_unsat_ = true;
        continue;
      }
      windows_[prime_index[top]].push_back(static_cast<std::uint32_t>(a));
    }

    for (unsigned c = 0; c < k_; ++c) {
      if (!symmetry || c == 0 || k_ % c == 0) first_choices_.push_back(c);
    }
    for (unsigned c = 0; c < k_; ++c) all_choices_.push_back(c);
  }

  unsigned k() const { return k_; }
  unsigned r() const { return r_; }
  std::uint64_t bound() const { return bound_; }
  std::uint32_t horizon() const { return horizon_; }
  std::size_t depth() const { return primes_.size(); }
  std::uint32_t prime(std::size_t i) const { return primes_[i]; }
  bool trivially_unsat() const { return trivially_unsat_; }

  /// Classes allowed at a depth, in the order they are tried.
  const std::vector<unsigned>& choices(std::size_t depth) const {
    return depth == 0 ? first_choices_ : all_choices_;
  }

  const std::vector<std::uint32_t>& numbers(std::size_t i) const { return numbers_[i]; }
  const std::vector<std::uint32_t>& windows(std::size_t i) const { return windows_[i]; }

 private:
  unsigned k_;
  unsigned r_;
  std::uint64_t bound_;
  std::uint32_t horizon_;
  bool trivially_unsat_ = false;
  std::vector<std::uint32_t> primes_;
  std::vector<std::vector<std::uint32_t>> numbers_;
  std::vector<std::vector<std::uint32_t>> windows_;
  std::vector<unsigned> first_choices_;
  std::vector<unsigned> all_choices_;
};

/// Mutable DFS state owned by one worker thread.
class AvoidanceWorker {
 public:
  explicit AvoidanceWorker(const AvoidanceProblem& problem)
      : p_(problem),
        choice_(problem.depth() + 1, 0),
        value_(problem.horizon() + 1, 0) {}

  /// Sets the prime at depth i to choice index ci; false on a kernel run.
  bool assign(std::size_t i, std::size_t ci) {
    choice_[i] = ci;
    const unsigned c = p_.choices(i)[ci];
    const std::uint32_t q = p_.prime(i);
    const unsigned k = p_.k();
    for (std::uint32_t n : p_.numbers(i)) {
      unsigned v = value_[n / q] + c;
      value_[n] = v >= k ? v - k : v;
    }
    const unsigned r = p_.r();
    for (std::uint32_t a : p_.windows(i)) {
      unsigned j = 0;
      while (j < r && value_[a + j] == 0) ++j;
      if (j == r) return false;
    }
    return true;
  }

  /// Assigns a prefix given as mixed-radix branch number. False on conflict.
  bool assign_prefix(std::size_t branch, std::size_t prefix_depth, SearchStats& stats) {
    std::vector<std::size_t> digits(prefix_depth);
    for (std::size_t i = prefix_depth; i-- > 0;) {
      std::size_t radix = p_.choices(i).size();
      digits[i] = branch % radix;
      branch /= radix;
    }
    for (std::size_t i = 0; i < prefix_depth; ++i) {
      ++stats.nodes;
      if (!assign(i, digits[i])) return false;
    }
    return true;
  }

  detail::BranchResult dfs(std::size_t start, Budget& budget, const detail::StopSignal& stop,
                           SearchStats& stats) {
    const std::size_t n = p_.depth();
    stats.max_depth = std::max(stats.max_depth, start);
    if (start == n) return detail::BranchResult::Found;
    std::uint64_t pending = 0;
    auto flush = [&] {
      bool ok = budget.charge(pending);
      pending = 0;
      return ok;
    };

    std::size_t d = start;
    choice_[d] = 0;
    for (;;) {
      if (choice_[d] >= p_.choices(d).size()) {
        if (d == start) {
          return flush() ? detail::BranchResult::Exhausted : detail::BranchResult::Aborted;
        }
        --d;
        ++choice_[d];
        ++stats.backtracks;
        continue;
      }
      ++stats.nodes;
      if (++pending == kChargeBatch) {
        if (!flush() || stop()) return detail::BranchResult::Aborted;
      }
      if (assign(d, choice_[d])) {
        ++d;
        stats.max_depth = std::max(stats.max_depth, d);
        if (d == n) {
          flush();
          return detail::BranchResult::Found;
        }
        choice_[d] = 0;
      } else {
        ++choice_[d];
      }
    }
  }

  AvoidanceCertificate certificate() const {
    AvoidanceCertificate cert;
    cert.k = p_.k();
    cert.r = p_.r();
    cert.bound = p_.bound();
    for (std::size_t i = 0; i < p_.depth(); ++i) {
      cert.assignment.emplace(p_.prime(i), p_.choices(i)[choice_[i]]);
    }
    return cert;
  }

 private:
  const AvoidanceProblem& p_;
  std::vector<std::size_t> choice_;
  std::vector<unsigned> value_;
};

void check_parameters(unsigned k, unsigned r, std::uint64_t bound) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (r == 0) throw std::invalid_argument("run length r must be at least 1");
  if (bound == 0) throw std::invalid_argument("bound B must be at least 1");
  if (bound > kMaxHorizon - r) {
    throw std::invalid_argument("bound B + r - 1 exceeds " + std::to_string(kMaxHorizon));
  }
}

/// Number of leading primes to enumerate as independent branches.
std::size_t split_depth(const AvoidanceProblem& p, unsigned threads) {
  if (threads <= 1) return 0;
  const std::size_t target = 8 * static_cast<std::size_t>(threads);
  std::size_t count = 1;
  std::size_t d = 0;
  while (d < p.depth() && count < target) {
    count *= p.choices(d).size();
    ++d;
  }
  return d;
}

}  // namespace

AvoidanceResult avoidance_search(unsigned k, unsigned r, std::uint64_t bound,
                                 const AvoidanceOptions& options) {
  check_parameters(k, r, bound);
  const auto t0 = std::chrono::steady_clock::now();
  AvoidanceProblem problem(k, r, bound, options.symmetry);
  AvoidanceResult result;
  if (problem.trivially_unsat()) {
    result.status = SearchStatus::NotFound;
    return result;
  }

  const std::size_t prefix = split_depth(problem, options.threads);
  std::size_t branches = 1;
  for (std::size_t i = 0; i < prefix; ++i) branches *= problem.choices(i).size();

  const unsigned n_workers = std::max(1u, options.threads);
  std::vector<AvoidanceWorker> workers;
  workers.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w) workers.emplace_back(problem);
  std::vector<SearchStats> worker_stats(n_workers);
  std::vector<std::optional<AvoidanceCertificate>> found(branches);

  Budget budget(options);
  auto outcome = detail::explore_branches(
      branches, n_workers, options.deterministic, budget,
      [&](std::size_t b, unsigned w, const detail::StopSignal& stop) {
        auto& worker = workers[w];
        auto& stats = worker_stats[w];
        if (!worker.assign_prefix(b, prefix, stats)) return detail::BranchResult::Exhausted;
        auto res = worker.dfs(prefix, budget, stop, stats);
        if (res == detail::BranchResult::Found) found[b] = worker.certificate();
        return res;
      });

  for (const auto& s : worker_stats) result.stats += s;
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (outcome.found) {
    result.status = SearchStatus::Found;
    result.certificate = std::move(found[*outcome.found]);
    if (!verify_certificate(*result.certificate)) {
      throw std::logic_error("avoidance_search produced a certificate that fails verification");
    }
  } else if (outcome.budget_hit) {
    result.status = SearchStatus::Unknown;
  } else {
    result.status = SearchStatus::NotFound;
  }
  return result;
}

ConstantResult hildebrand_constant(unsigned k, unsigned r, std::uint64_t max_bound,
                                   const AvoidanceOptions& options) {
  check_parameters(k, r, max_bound);
  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + options.time_limit;
  ConstantResult out;

  for (std::uint64_t b = 1; b <= max_bound; ++b) {
    AvoidanceOptions step = options;
    if (options.max_nodes != 0) {
      if (out.stats.nodes >= options.max_nodes) {
        out.budget_exhausted = true;
        break;
      }
      step.max_nodes = options.max_nodes - out.stats.nodes;
    }
    if (options.time_limit.count() > 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        out.budget_exhausted = true;
        break;
      }
      step.time_limit = left;
    }

    AvoidanceResult res = avoidance_search(k, r, b, step);
    out.stats += res.stats;
    if (res.status == SearchStatus::Unknown) {
      out.budget_exhausted = true;
      break;
    }
    out.last_bound = b;
    if (res.status == SearchStatus::NotFound) {
      out.constant = b;
      break;
    }
    out.extremal = std::move(res.certificate);
  }
  out.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

bool verify_certificate(const AvoidanceCertificate& cert) {
  if (cert.k == 0) throw InvalidCertificate("certificate k must be at least 1");
  if (cert.r == 0) throw InvalidCertificate("certificate r must be at least 1");
  if (cert.bound == 0) throw InvalidCertificate("certificate B must be at least 1");
  if (cert.bound > kMaxHorizon - cert.r) throw InvalidCertificate("certificate B is too large");
  const auto horizon = static_cast<std::uint32_t>(cert.horizon());

  PrimeAssignment used;
  for (const auto& [p, c] : cert.assignment) {
    if (!is_prime_trial(p)) {
      throw InvalidCertificate("assignment key " + std::to_string(p) + " is not prime");
    }
    if (c >= cert.k) {
      throw InvalidCertificate("class " + std::to_string(c) + " of prime " + std::to_string(p) +
                               " is not below k");
    }
    if (p <= horizon) used.emplace(p, c);
  }
  if (cert.default_class && *cert.default_class >= cert.k) {
    throw InvalidCertificate("default class is not below k");
  }
  if (!cert.default_class) {
    FactorizationSieve sieve(std::max<std::uint32_t>(horizon, 2));
    for (std::uint32_t p : sieve.primes()) {
      if (p > horizon) break;
      if (!used.contains(p)) {
        throw InvalidCertificate("prime " + std::to_string(p) + " <= B + r - 1 has no class");
      }
    }
  }

  auto f = MultiplicativeFunction::sieve_bounded(cert.k, std::move(used), horizon,
                                                 cert.default_class);
  return find_runs(f, cert.r, cert.bound).empty();
}

PrimeAssignment relabel(const PrimeAssignment& assignment, unsigned unit, unsigned k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  PrimeAssignment out;
  for (const auto& [p, c] : assignment) {
    out.emplace(p, static_cast<unsigned>(static_cast<std::uint64_t>(unit) * c % k));
  }
  return out;
}

}  // namespace iplab
