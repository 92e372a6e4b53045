#include "iplab/multfunc.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace iplab {

namespace {

void check_modulus(unsigned k) {
  if (k == 0) throw std::invalid_argument("modulus k must be positive");
}

void check_class(unsigned k, unsigned c, const std::string& what) {
  if (c >= k) {
    throw std::invalid_argument(what + ": class " + std::to_string(c) +
                                " is not below k = " + std::to_string(k));
  }
}

}  // namespace

MultiplicativeFunction MultiplicativeFunction::finite_support(unsigned k,
                                                              PrimeAssignment assignment) {
  check_modulus(k);
  for (const auto& [p, c] : assignment) {
    if (!is_prime_trial(p)) {
      throw std::invalid_argument("assignment key " + std::to_string(p) + " is not prime");
    }
    check_class(k, c, "assignment of " + std::to_string(p));
  }
  MultiplicativeFunction f;
  f.k_ = k;
  f.mode_ = FunctionMode::FiniteSupport;
  f.assignment_ = std::move(assignment);
  return f;
}

MultiplicativeFunction MultiplicativeFunction::sieve_bounded(unsigned k,
                                                             PrimeAssignment assignment,
                                                             std::uint32_t limit,
                                                             std::optional<unsigned> default_class) {
  check_modulus(k);
  if (limit < 1) throw std::invalid_argument("sieve-bounded limit must be positive");
  auto sieve = std::make_shared<const FactorizationSieve>(std::max<std::uint32_t>(limit, 2));
  if (default_class) check_class(k, *default_class, "default class");
  for (const auto& [p, c] : assignment) {
    if (p > limit) {
      throw std::invalid_argument("assignment key " + std::to_string(p) +
                                  " exceeds limit " + std::to_string(limit));
    }
    if (!sieve->is_prime(p)) {
      throw std::invalid_argument("assignment key " + std::to_string(p) + " is not prime");
    }
    check_class(k, c, "assignment of " + std::to_string(p));
  }

  auto values = std::make_shared<std::vector<std::uint32_t>>(static_cast<std::size_t>(limit) + 1, 0);
  auto& v = *values;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    std::uint32_t p = sieve->smallest_factor(n);
    unsigned cp;
    if (auto it = assignment.find(p); it != assignment.end()) {
      cp = it->second;
    } else if (default_class) {
      cp = *default_class;
    } else {
      throw std::invalid_argument("prime " + std::to_string(p) +
                                  " has no class and no default was declared");
    }
    v[n] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(v[n / p]) + cp) % k);
  }

  MultiplicativeFunction f;
  f.k_ = k;
  f.mode_ = FunctionMode::SieveBounded;
  f.assignment_ = std::move(assignment);
  f.default_class_ = default_class;
  f.values_ = std::move(values);
  return f;
}

std::optional<std::uint32_t> MultiplicativeFunction::limit() const {
  if (mode_ == FunctionMode::SieveBounded) {
    return static_cast<std::uint32_t>(values_->size() - 1);
  }
  return std::nullopt;
}

unsigned MultiplicativeFunction::class_of_prime(std::uint64_t p) const {
  if (auto it = assignment_.find(p); it != assignment_.end()) return it->second;
  if (mode_ == FunctionMode::FiniteSupport) return 0;
  if (p >= values_->size()) {
    throw std::out_of_range("prime " + std::to_string(p) + " exceeds the function's limit");
  }
  return *default_class_;
}

bool MultiplicativeFunction::can_evaluate(std::uint64_t n) const {
  if (n == 0) return false;
  return mode_ == FunctionMode::FiniteSupport || n < values_->size();
}

ResidueClass MultiplicativeFunction::evaluate(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("evaluate: argument must be positive");
  if (mode_ == FunctionMode::SieveBounded) {
    if (n >= values_->size()) {
      throw std::out_of_range("evaluate: " + std::to_string(n) + " exceeds limit " +
                              std::to_string(values_->size() - 1));
    }
    return {(*values_)[n]};
  }
  std::uint64_t sum = 0;
  for (const auto& [p, c] : assignment_) {
    if (c == 0) continue;
    sum = (sum + static_cast<std::uint64_t>(valuation(n, p)) * c) % k_;
  }
  return {static_cast<unsigned>(sum)};
}

ResidueClass MultiplicativeFunction::evaluate(const mpz_class& n) const {
  if (sgn(n) <= 0) throw std::invalid_argument("evaluate: argument must be positive");
  if (mode_ == FunctionMode::SieveBounded) {
    if (!n.fits_ulong_p() || n.get_ui() >= values_->size()) {
      throw std::out_of_range("evaluate: argument exceeds limit " +
                              std::to_string(values_->size() - 1));
    }
    return {(*values_)[n.get_ui()]};
  }
  std::uint64_t sum = 0;
  for (const auto& [p, c] : assignment_) {
    if (c == 0) continue;
    sum = (sum + static_cast<std::uint64_t>(valuation(n, p)) * c) % k_;
  }
  return {static_cast<unsigned>(sum)};
}

std::vector<Run> find_runs(const MultiplicativeFunction& f, unsigned r, std::uint64_t bound) {
  if (r == 0) throw std::invalid_argument("find_runs: run length must be positive");
  if (bound == 0) throw std::invalid_argument("find_runs: bound must be positive");
  if (bound > std::numeric_limits<std::uint64_t>::max() - r ||
      !f.can_evaluate(bound + r - 1)) {
    throw std::out_of_range("find_runs: bound + r - 1 = " + std::to_string(bound + r - 1) +
                            " is outside the function's evaluable range");
  }
  std::vector<Run> runs;
  // streak = number of consecutive kernel values ending at n.
  unsigned streak = 0;
  for (std::uint64_t n = 1; n <= bound + r - 1; ++n) {
    streak = f.in_kernel(n) ? streak + 1 : 0;
    if (streak >= r) runs.push_back({n - r + 1, r});
  }
  return runs;
}

}  // namespace iplab
