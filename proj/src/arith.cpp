#include "iplab/arith.hpp"

#include <stdexcept>
#include <string>

namespace iplab {

FactorizationSieve::FactorizationSieve(std::uint32_t limit) : limit_(limit) {
  if (limit < 2) {
    throw std::invalid_argument("sieve limit must be at least 2, got " +
                                std::to_string(limit));
  }
  spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes_) {
      if (p > spf_[i] || p * i > limit) break;
      spf_[p * i] = p;
    }
  }
}

std::uint32_t FactorizationSieve::smallest_factor(std::uint64_t n) const {
  if (n < 2 || n > limit_) {
    throw std::out_of_range("smallest_factor: " + std::to_string(n) +
                            " outside [2, " + std::to_string(limit_) + "]");
  }
  return spf_[n];
}

bool FactorizationSieve::is_prime(std::uint64_t n) const {
  if (n > limit_) {
    throw std::out_of_range("is_prime: " + std::to_string(n) +
                            " exceeds sieve limit " + std::to_string(limit_));
  }
  return n >= 2 && spf_[n] == n;
}

Factorization FactorizationSieve::factorize(std::uint64_t n) const {
  if (n == 0 || n > limit_) {
    throw std::out_of_range("factorize: " + std::to_string(n) +
                            " outside [1, " + std::to_string(limit_) + "]");
  }
  Factorization out;
  while (n > 1) {
    std::uint32_t p = spf_[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

FactorizationSieve build_sieve(std::uint32_t limit) { return FactorizationSieve(limit); }

unsigned valuation(const mpz_class& n, std::uint64_t p) {
  if (sgn(n) <= 0) throw std::invalid_argument("valuation: n must be positive");
  if (p < 2) throw std::invalid_argument("valuation: p must be prime");
  mpz_class rest;
  mpz_class prime;
  mpz_set_ui(prime.get_mpz_t(), static_cast<unsigned long>(p));
  return static_cast<unsigned>(
      mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation: n must be positive");
  if (p < 2) throw std::invalid_argument("valuation: p must be prime");
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace iplab
