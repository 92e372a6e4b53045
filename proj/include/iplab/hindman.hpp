#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "iplab/blockseq.hpp"
#include "iplab/search.hpp"

namespace iplab {

/// Coloring of the nonempty subsets of {1..n} with colors 1..classes. The
/// color function must be pure; it may be called concurrently.
struct SubsetColoring {
  unsigned n = 0;
  unsigned classes = 1;
  std::function<unsigned(const IndexSet&)> color;
};

/// A_1, ..., A_m with max A_i < min A_{i+1}.
struct BlockFamily {
  std::vector<IndexSet> blocks;

  /// Nonempty chain of pairwise preceding blocks.
  bool is_increasing() const;

  bool operator==(const BlockFamily&) const = default;
};

/// All unions over nonempty I of A_i (i in I), duplicates removed, in
/// IndexSet order. For preceding blocks this is the order of I read as a
/// binary number, and there are 2^m - 1 of them.
std::vector<IndexSet> fu_closure(const BlockFamily& family);

/// True when every set in fu_closure(family) has the same color.
bool is_monochromatic(const BlockFamily& family, const SubsetColoring& coloring);

struct HindmanResult {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<BlockFamily> family;
  /// Common color of the returned family.
  unsigned color = 0;
  SearchStats stats;
};

/// Depth-first search for m blocks inside {1..n} whose finite unions are
/// monochromatic. Blocks are tried in IndexSet order and a branch is cut as
/// soon as any union of chosen blocks leaves the color of A_1, so under
/// options.deterministic the result is the least family in block-by-block
/// IndexSet order. NotFound means no family exists within {1..n}.
/// Requires 1 <= n <= 30.
HindmanResult monochromatic_fu_search(const SubsetColoring& coloring, unsigned m,
                                      const SearchOptions& options = {});

}  // namespace iplab
