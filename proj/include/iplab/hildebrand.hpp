#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "iplab/multfunc.hpp"
#include "iplab/search.hpp"

namespace iplab {

class InvalidCertificate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A prime assignment under which no a <= bound starts a kernel run of
/// length r. Covers every prime <= bound + r - 1, explicitly or through
/// default_class.
struct AvoidanceCertificate {
  unsigned k = 1;
  unsigned r = 2;
  std::uint64_t bound = 1;
  PrimeAssignment assignment;
  std::optional<unsigned> default_class;

  /// Largest argument the certificate's constraints touch.
  std::uint64_t horizon() const { return bound + r - 1; }

  bool operator==(const AvoidanceCertificate&) const = default;
};

struct AvoidanceOptions : SearchOptions {
  /// Restrict f(2) to one representative per orbit of the unit group
  /// (Z/kZ)^x acting by multiplication.
  bool symmetry = false;
};

/// Found means an avoiding assignment exists (SAT); NotFound means every
/// assignment has a run at some a <= bound (UNSAT).
struct AvoidanceResult {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<AvoidanceCertificate> certificate;
  SearchStats stats;
};

/// Backtracking decision procedure over assignments of the primes
/// <= bound + r - 1, assigned in increasing order, classes tried 0..k-1.
/// After each assignment every window whose entries are now fully factored
/// over assigned primes is checked. With options.deterministic the
/// certificate is the lexicographically least avoiding assignment.
/// Returned certificates have passed verify_certificate.
AvoidanceResult avoidance_search(unsigned k, unsigned r, std::uint64_t bound,
                                 const AvoidanceOptions& options = {});

struct ConstantResult {
  /// Least bound B <= max_bound at which avoidance is impossible.
  std::optional<std::uint64_t> constant;
  /// Certificate for the largest bound found avoidable (constant - 1 when
  /// the constant was determined). Absent when even bound 1 is unavoidable.
  std::optional<AvoidanceCertificate> extremal;
  /// Largest bound the search decided.
  std::uint64_t last_bound = 0;
  bool budget_exhausted = false;
  SearchStats stats;

  SearchStatus status() const {
    return constant ? SearchStatus::Found : SearchStatus::Unknown;
  }
};

/// Iterative deepening over B = 1, 2, ..., max_bound. The budget in options
/// covers the whole sweep.
ConstantResult hildebrand_constant(unsigned k, unsigned r, std::uint64_t max_bound,
                                   const AvoidanceOptions& options = {});

/// Full scan of a = 1..bound. Throws InvalidCertificate when the assignment
/// is malformed or leaves a prime <= horizon() without a class.
bool verify_certificate(const AvoidanceCertificate& cert);

/// Class c -> unit * c (mod k). Kernel membership is unchanged when unit is
/// invertible mod k.
PrimeAssignment relabel(const PrimeAssignment& assignment, unsigned unit, unsigned k);

}  // namespace iplab
