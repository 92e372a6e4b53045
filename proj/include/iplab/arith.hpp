#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace iplab {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  bool operator==(const PrimePower&) const = default;
};

using Factorization = std::vector<PrimePower>;

/// Smallest-prime-factor table for 0..limit, built with a linear sieve.
/// Immutable after construction; safe to share between threads.
class FactorizationSieve {
 public:
  /// Throws std::invalid_argument when limit < 2.
  explicit FactorizationSieve(std::uint32_t limit);

  std::uint32_t limit() const { return limit_; }

  /// spf(n) for 2 <= n <= limit. Throws std::out_of_range otherwise.
  std::uint32_t smallest_factor(std::uint64_t n) const;

  bool is_prime(std::uint64_t n) const;

  /// Primes p <= limit in increasing order.
  std::span<const std::uint32_t> primes() const { return primes_; }

  /// Prime factorization of 1 <= n <= limit, primes strictly increasing.
  /// factorize(1) is empty. Throws std::out_of_range when n > limit.
  Factorization factorize(std::uint64_t n) const;

 private:
  std::uint32_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

FactorizationSieve build_sieve(std::uint32_t limit);

/// Largest e with p^e | n. Requires n >= 1 and p prime.
unsigned valuation(const mpz_class& n, std::uint64_t p);
unsigned valuation(std::uint64_t n, std::uint64_t p);

/// Deterministic trial-division primality test, for values outside any sieve.
bool is_prime_trial(std::uint64_t n);

}  // namespace iplab
