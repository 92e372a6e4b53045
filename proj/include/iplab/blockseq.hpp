#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace iplab {

/// Finite nonempty set of nonnegative indices, kept sorted.
///
/// Sets are ordered by increasing maximum, ties broken by comparing the
/// remaining elements from the top down (colex order; for sets inside
/// {0..63} this is the numeric order of their bitmasks).
class IndexSet {
 public:
  /// Throws std::invalid_argument when empty. Duplicates are merged.
  explicit IndexSet(std::vector<unsigned> elements);
  IndexSet(std::initializer_list<unsigned> elements)
      : IndexSet(std::vector<unsigned>(elements)) {}

  /// Elements are the set bit positions of mask (nonzero).
  static IndexSet from_mask(std::uint64_t mask);
  /// Bit i set for element i. Requires max() < 64.
  std::uint64_t mask() const;

  const std::vector<unsigned>& elements() const { return elements_; }
  unsigned min() const { return elements_.front(); }
  unsigned max() const { return elements_.back(); }
  std::size_t size() const { return elements_.size(); }

  /// max(*this) < min(other).
  bool precedes(const IndexSet& other) const { return max() < other.min(); }

  IndexSet united(const IndexSet& other) const;

  bool operator==(const IndexSet&) const = default;
  std::strong_ordering operator<=>(const IndexSet& other) const;

  std::string to_string() const;

 private:
  std::vector<unsigned> elements_;
};

/// Prefix s_0, ..., s_n of a sequence of positive integers.
class BlockSequence {
 public:
  explicit BlockSequence(std::vector<mpz_class> terms);

  const std::vector<mpz_class>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  const mpz_class& operator[](std::size_t i) const { return terms_.at(i); }

  /// s_A = sum of s_i over i in A. Throws std::out_of_range past the prefix.
  mpz_class subset_sum(const IndexSet& a) const;

  /// s_0 = 1 and s_1 < s_2 < ... .
  bool has_canonical_shape() const;

 private:
  std::vector<mpz_class> terms_;
};

class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr unsigned kDefaultBlockCap = 8;

/// s_0 = 1, s_{j+1} = product of s_A over nonempty A within {0..j}, for
/// j < n. Throws CapExceeded (with a digit-count estimate) when n > cap.
BlockSequence generate_block_sequence(unsigned n, unsigned cap = kDefaultBlockCap);

/// Rough decimal length of s_n of the generated sequence.
double estimated_digits(unsigned n);

struct DivisibilityReport {
  bool holds = true;
  /// First failing pair (A, B), A preceding B, in enumeration order.
  std::optional<std::pair<IndexSet, IndexSet>> counterexample;
  std::uint64_t pairs_checked = 0;
};

/// Exhaustive check of s_A | s_B over all nonempty A, B within the prefix
/// with max A < min B. A runs over index sets in IndexSet order, then B.
DivisibilityReport verify_block_divisibility(const BlockSequence& seq);

/// All nonempty subsets of {lo..hi} in IndexSet order. Requires hi - lo < 63.
std::vector<IndexSet> enumerate_index_sets(unsigned lo, unsigned hi);

}  // namespace iplab
