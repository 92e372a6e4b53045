#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "iplab/arith.hpp"

namespace iplab {

/// Element of Z/kZ standing for the k-th root of unity exp(2*pi*i*value/k).
/// Class 0 is the value 1, i.e. membership in the kernel subgroup.
struct ResidueClass {
  unsigned value = 0;

  auto operator<=>(const ResidueClass&) const = default;
};

enum class FunctionMode { FiniteSupport, SieveBounded };

/// prime -> class. Keys must be prime, values < k.
using PrimeAssignment = std::map<std::uint64_t, unsigned>;

/// Completely multiplicative function into the k-th roots of unity, stored
/// additively by its values on primes.
///
/// Finite-support functions send every unlisted prime to class 0 and can be
/// evaluated at arbitrarily large integers through valuations at the listed
/// primes. Sieve-bounded functions cover every prime up to a limit (unlisted
/// primes take the declared default class) and precompute f on 1..limit.
class MultiplicativeFunction {
 public:
  /// The trivial function (k = 1, empty support).
  MultiplicativeFunction() = default;

  static MultiplicativeFunction finite_support(unsigned k, PrimeAssignment assignment);
  static MultiplicativeFunction sieve_bounded(unsigned k, PrimeAssignment assignment,
                                              std::uint32_t limit,
                                              std::optional<unsigned> default_class = {});

  unsigned modulus() const { return k_; }
  FunctionMode mode() const { return mode_; }
  std::optional<std::uint32_t> limit() const;
  std::optional<unsigned> default_class() const { return default_class_; }
  /// Explicitly listed primes only.
  const PrimeAssignment& assignment() const { return assignment_; }

  unsigned class_of_prime(std::uint64_t p) const;

  bool can_evaluate(std::uint64_t n) const;

  /// f(n) as a class. f(1) = 0. Throws std::out_of_range beyond the limit of a
  /// sieve-bounded function and std::invalid_argument for n = 0.
  ResidueClass evaluate(std::uint64_t n) const;
  ResidueClass evaluate(const mpz_class& n) const;

  bool in_kernel(std::uint64_t n) const { return evaluate(n).value == 0; }
  bool in_kernel(const mpz_class& n) const { return evaluate(n).value == 0; }

 private:
  unsigned k_ = 1;
  FunctionMode mode_ = FunctionMode::FiniteSupport;
  PrimeAssignment assignment_;
  std::optional<unsigned> default_class_;
  std::shared_ptr<const std::vector<std::uint32_t>> values_;
};

struct Run {
  std::uint64_t start;
  unsigned length;

  bool operator==(const Run&) const = default;
};

/// Every a <= bound with f(a) = ... = f(a + r - 1) = 0, increasing.
/// Throws std::out_of_range when bound + r - 1 is not evaluable.
std::vector<Run> find_runs(const MultiplicativeFunction& f, unsigned r, std::uint64_t bound);

}  // namespace iplab
