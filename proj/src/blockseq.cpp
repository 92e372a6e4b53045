#include "iplab/blockseq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace iplab {

namespace {

/// Product of v[lo..hi) by balanced splitting, so large factors meet late.
mpz_class product(const std::vector<mpz_class>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  if (hi - lo == 2) return v[lo] * v[lo + 1];
  std::size_t mid = lo + (hi - lo) / 2;
  return product(v, lo, mid) * product(v, mid, hi);
}

/// sums[mask] = sum of terms[i] over bits i of mask, for all masks < 2^count.
std::vector<mpz_class> all_subset_sums(const std::vector<mpz_class>& terms, std::size_t count) {
  std::vector<mpz_class> sums(std::size_t{1} << count);
  for (std::uint64_t mask = 1; mask < sums.size(); ++mask) {
    sums[mask] = sums[mask & (mask - 1)] + terms[std::countr_zero(mask)];
  }
  return sums;
}

constexpr std::size_t kMaxVerifiedTerms = 24;

}  // namespace

IndexSet::IndexSet(std::vector<unsigned> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("index sets must be nonempty");
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

IndexSet IndexSet::from_mask(std::uint64_t mask) {
  std::vector<unsigned> e;
  while (mask != 0) {
    e.push_back(static_cast<unsigned>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return IndexSet(std::move(e));
}

std::uint64_t IndexSet::mask() const {
  if (max() >= 64) throw std::out_of_range("index set does not fit a 64-bit mask");
  std::uint64_t m = 0;
  for (unsigned i : elements_) m |= std::uint64_t{1} << i;
  return m;
}

IndexSet IndexSet::united(const IndexSet& other) const {
  std::vector<unsigned> e = elements_;
  e.insert(e.end(), other.elements_.begin(), other.elements_.end());
  return IndexSet(std::move(e));
}

std::strong_ordering IndexSet::operator<=>(const IndexSet& other) const {
  auto a = elements_.rbegin();
  auto b = other.elements_.rbegin();
  for (; a != elements_.rend() && b != other.elements_.rend(); ++a, ++b) {
    if (*a != *b) return *a <=> *b;
  }
  // The set that runs out first lacks an element the other has.
  const bool a_done = a == elements_.rend();
  const bool b_done = b == other.elements_.rend();
  if (a_done && b_done) return std::strong_ordering::equal;
  return a_done ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < elements_.size(); ++i) os << (i ? "," : "") << elements_[i];
  os << '}';
  return os.str();
}

BlockSequence::BlockSequence(std::vector<mpz_class> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (sgn(t) <= 0) throw std::invalid_argument("sequence terms must be positive");
  }
}

mpz_class BlockSequence::subset_sum(const IndexSet& a) const {
  if (a.max() >= terms_.size()) {
    throw std::out_of_range("index " + std::to_string(a.max()) + " outside prefix of length " +
                            std::to_string(terms_.size()));
  }
  mpz_class s = 0;
  for (unsigned i : a.elements()) s += terms_[i];
  return s;
}

bool BlockSequence::has_canonical_shape() const {
  if (terms_.empty() || terms_[0] != 1) return false;
  for (std::size_t i = 2; i < terms_.size(); ++i) {
    if (!(terms_[i - 1] < terms_[i])) return false;
  }
  return true;
}

double estimated_digits(unsigned n) {
  // log10 of s_0..s_n. Exact subset sums in floating point while 2^j is
  // small, then the dominant-term approximation log s_A ~ log s_{max A}.
  std::vector<double> lg{0.0};
  for (unsigned j = 0; j < n; ++j) {
    double next = 0.0;
    if (j < 20) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (j + 1)); ++mask) {
        double top = lg[63 - std::countl_zero(mask)];
        double acc = 0.0;
        for (std::uint64_t m = mask; m; m &= m - 1) acc += std::pow(10.0, lg[std::countr_zero(m)] - top);
        next += top + std::log10(acc);
      }
    } else {
      for (unsigned m = 0; m <= j; ++m) next += std::ldexp(lg[m], static_cast<int>(m));
    }
    lg.push_back(next);
  }
  return std::floor(lg[n]) + 1.0;
}

BlockSequence generate_block_sequence(unsigned n, unsigned cap) {
  if (n > cap) {
    std::ostringstream msg;
    msg << "refusing to generate s_0..s_" << n << " (cap " << cap << "): s_" << n
        << " has roughly " << std::scientific << estimated_digits(n) << " decimal digits";
    throw CapExceeded(msg.str());
  }
  std::vector<mpz_class> terms{mpz_class(1)};
  for (unsigned j = 0; j < n; ++j) {
    std::vector<mpz_class> sums = all_subset_sums(terms, j + 1);
    terms.push_back(product(sums, 1, sums.size()));
  }
  return BlockSequence(std::move(terms));
}

DivisibilityReport verify_block_divisibility(const BlockSequence& seq) {
  DivisibilityReport report;
  const std::size_t len = seq.size();
  if (len < 2) return report;
  if (len > kMaxVerifiedTerms) {
    throw std::invalid_argument("exhaustive verification supports at most " +
                                std::to_string(kMaxVerifiedTerms) + " terms");
  }
  const std::vector<mpz_class> sums = all_subset_sums(seq.terms(), len);
  const std::uint64_t full = (std::uint64_t{1} << len) - 1;
  // Numeric mask order is IndexSet order.
  for (std::uint64_t a = 1; a <= full; ++a) {
    const unsigned top = 63 - std::countl_zero(a);
    const std::uint64_t above = full & ~((std::uint64_t{2} << top) - 1);
    // Subsets of `above` in increasing numeric order.
    for (std::uint64_t b = above & -above; b != 0; b = (b - above) & above) {
      ++report.pairs_checked;
      if (!mpz_divisible_p(sums[b].get_mpz_t(), sums[a].get_mpz_t())) {
        report.holds = false;
        report.counterexample.emplace(IndexSet::from_mask(a), IndexSet::from_mask(b));
        return report;
      }
    }
  }
  return report;
}

std::vector<IndexSet> enumerate_index_sets(unsigned lo, unsigned hi) {
  if (hi < lo || hi - lo >= 63) throw std::invalid_argument("enumerate_index_sets: bad range");
  const unsigned width = hi - lo + 1;
  std::vector<IndexSet> out;
  out.reserve((std::size_t{1} << width) - 1);
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << width); ++m) {
    std::vector<unsigned> e;
    for (std::uint64_t x = m; x; x &= x - 1) e.push_back(lo + std::countr_zero(x));
    out.emplace_back(std::move(e));
  }
  return out;
}

}  // namespace iplab
