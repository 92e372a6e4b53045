#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "iplab/blockseq.hpp"
#include "iplab/hindman.hpp"
#include "iplab/multfunc.hpp"
#include "iplab/search.hpp"

namespace iplab {

enum class Provenance { ProofPipeline, DirectSearch };

/// Generators whose nonempty subset sums s all satisfy f(s) = f(s + 1) = 0,
/// i.e. a finite piece of an IP-set inside A* and A* - 1.
struct IPWitness {
  MultiplicativeFunction f;
  /// b_1 for pipeline witnesses, 1 for direct search.
  mpz_class base = 1;
  /// a_2 < ... < a_m for pipeline witnesses; a_1 < ... < a_m for direct search.
  std::vector<mpz_class> generators;
  Provenance provenance = Provenance::DirectSearch;
  /// Pipeline only: the monochromatic blocks A_i and b_i = s_{A_i}.
  std::vector<IndexSet> blocks;
  std::vector<mpz_class> b_values;
};

class UnsupportedMode : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SubsetSum {
  mpz_class value;
  /// Number of index sets with this sum.
  std::uint64_t multiplicity = 1;

  bool operator==(const SubsetSum&) const = default;
};

/// Distinct nonempty subset sums in increasing order, each with the number
/// of index sets producing it (multiplicities add up to 2^m - 1).
std::vector<SubsetSum> fs_closure(std::span<const mpz_class> generators);
std::vector<SubsetSum> fs_closure(std::span<const std::uint64_t> generators);

struct WitnessResult {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<IPWitness> witness;
  SearchStats stats;
};

/// Colors each A within {1..n_prefix} by f(s_A) on the generated block
/// sequence, finds m blocks with monochromatic finite unions, and returns
/// a_i = b_i / b_1 for i >= 2. Checks b_1 | b_i and that every b_i lies in
/// the same class before verifying the witness directly.
/// Throws UnsupportedMode unless f is finite-support.
WitnessResult ip_witness_from_proof(const MultiplicativeFunction& f, unsigned m,
                                    unsigned n_prefix, const SearchOptions& options = {},
                                    unsigned cap = kDefaultBlockCap);

/// Depth-first search for a_1 < ... < a_m in S = {a <= bound : f(a) = f(a+1) = 0}
/// with every subset sum in S. Under options.deterministic the result is the
/// lexicographically least tuple. Throws std::out_of_range when bound + 1 is
/// not evaluable.
WitnessResult ip_witness_direct(const MultiplicativeFunction& f, unsigned m,
                                std::uint64_t bound, const SearchOptions& options = {});

/// Checks every distinct subset sum s has f(s) = f(s+1) = 0 and that the
/// generators are strictly increasing.
bool verify_witness(const IPWitness& w);

}  // namespace iplab
