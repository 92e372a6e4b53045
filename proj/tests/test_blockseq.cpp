#include <doctest.h>

#include <random>

#include "iplab/blockseq.hpp"
#include "oracles.hpp"

using namespace iplab;

namespace {

std::vector<mpz_class> z(std::initializer_list<long> xs) {
  std::vector<mpz_class> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_SUITE("blockseq") {

TEST_CASE("IndexSet basics") {
  IndexSet a{3, 1, 3};
  CHECK(a.elements() == std::vector<unsigned>{1, 3});
  CHECK(a.min() == 1);
  CHECK(a.max() == 3);
  CHECK(a.mask() == 0b1010);
  CHECK(IndexSet::from_mask(0b1010) == a);
  CHECK(a.to_string() == "{1,3}");
  CHECK(a.united(IndexSet{0, 5}) == IndexSet{0, 1, 3, 5});
  CHECK(IndexSet{1, 2}.precedes(IndexSet{3}));
  CHECK_FALSE(IndexSet{1, 3}.precedes(IndexSet{2, 4}));
  CHECK_THROWS_AS(IndexSet(std::vector<unsigned>{}), std::invalid_argument);
  CHECK_THROWS_AS(IndexSet::from_mask(0), std::invalid_argument);
}

TEST_CASE("IndexSet order is by maximum, then top-down") {
  CHECK(IndexSet{1} < IndexSet{2});
  CHECK(IndexSet{1, 2} > IndexSet{2});
  CHECK(IndexSet{0, 3} < IndexSet{1, 3});
  CHECK(IndexSet{0, 1, 2} < IndexSet{3});
  auto sets = enumerate_index_sets(0, 6);
  REQUIRE(sets.size() == 127);
  for (std::size_t i = 0; i < sets.size(); ++i) CHECK(sets[i].mask() == i + 1);
  auto shifted = enumerate_index_sets(2, 4);
  REQUIRE(shifted.size() == 7);
  CHECK(shifted.front() == IndexSet{2});
  CHECK(shifted.back() == IndexSet{2, 3, 4});
  CHECK(std::is_sorted(shifted.begin(), shifted.end()));
}

TEST_CASE("generated prefixes") {
  CHECK(generate_block_sequence(0).terms() == z({1}));
  CHECK(generate_block_sequence(1).terms() == z({1, 1}));
  CHECK(generate_block_sequence(2).terms() == z({1, 1, 2}));
  CHECK(generate_block_sequence(3).terms() == z({1, 1, 2, 144}));
  auto s = generate_block_sequence(4);
  CHECK(s[4] == mpz_class("29720977239060172800"));
  CHECK(s.has_canonical_shape());
}

TEST_CASE("generator agrees with the literal recursion") {
  auto expected = oracle::block_sequence(6);
  auto s = generate_block_sequence(6);
  REQUIRE(s.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) CHECK(s[i] == expected[i]);
  CHECK(s[5].get_str().size() == 332);
  CHECK(s[6].get_str().size() == 10925);
}

TEST_CASE("cap refusal carries a size estimate") {
  CHECK_THROWS_AS(generate_block_sequence(9), CapExceeded);
  try {
    generate_block_sequence(12, 4);
    FAIL("expected refusal");
  } catch (const CapExceeded& e) {
    CHECK(std::string(e.what()).find("digits") != std::string::npos);
  }
  CHECK(estimated_digits(6) > 10000);
  CHECK(estimated_digits(6) < 12000);
  CHECK(estimated_digits(7) > estimated_digits(6));
}

TEST_CASE("subset sums") {
  auto s = generate_block_sequence(3);
  CHECK(s.subset_sum({0}) == 1);
  CHECK(s.subset_sum({0, 1, 2}) == 4);
  CHECK(s.subset_sum({2, 3}) == 146);
  CHECK_THROWS_AS(s.subset_sum({4}), std::out_of_range);
  CHECK_THROWS_AS(BlockSequence(z({1, 0})), std::invalid_argument);
}

TEST_CASE("canonical shape") {
  CHECK(BlockSequence(z({1, 1, 2, 144})).has_canonical_shape());
  CHECK_FALSE(BlockSequence(z({2, 3})).has_canonical_shape());
  CHECK_FALSE(BlockSequence(z({1, 5, 3})).has_canonical_shape());
}

TEST_CASE("divisibility reports") {
  auto r5 = verify_block_divisibility(generate_block_sequence(5));
  CHECK(r5.holds);
  CHECK_FALSE(r5.counterexample);
  auto r = verify_block_divisibility(BlockSequence(z({1, 2, 3})));
  CHECK_FALSE(r.holds);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->first == IndexSet{1});
  CHECK(r.counterexample->second == IndexSet{2});
  auto one = verify_block_divisibility(BlockSequence(z({1})));
  CHECK(one.holds);
  CHECK(one.pairs_checked == 0);
}

TEST_CASE("divisibility over {0..6} checks every preceding pair") {
  auto r = verify_block_divisibility(generate_block_sequence(6));
  CHECK(r.holds);
  // Pairs A < B with max A < min B: sum over split points.
  std::uint64_t pairs = 0;
  for (unsigned t = 0; t < 7; ++t) {
    for (unsigned u = t + 1; u < 7; ++u) pairs += (1ull << t) * (1ull << (6 - u));
  }
  CHECK(r.pairs_checked == pairs);
}

TEST_CASE("property: s_A divides s_m for m > max A") {
  auto s = generate_block_sequence(6);
  for (unsigned m = 1; m <= 6; ++m) {
    for (const auto& a : enumerate_index_sets(0, m - 1)) {
      REQUIRE(mpz_divisible_p(s[m].get_mpz_t(), s.subset_sum(a).get_mpz_t()));
    }
  }
}

TEST_CASE("property: random sequences agree with a naive divisibility check") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<mpz_class> terms;
    unsigned n = 1 + rng() % 6;
    for (unsigned i = 0; i < n; ++i) terms.emplace_back(1 + rng() % 12);
    BlockSequence seq(terms);
    bool naive = true;
    for (const auto& a : enumerate_index_sets(0, n - 1)) {
      for (const auto& b : enumerate_index_sets(0, n - 1)) {
        if (a.precedes(b) && !mpz_divisible_p(seq.subset_sum(b).get_mpz_t(),
                                              seq.subset_sum(a).get_mpz_t())) {
          naive = false;
        }
      }
    }
    auto r = verify_block_divisibility(seq);
    REQUIRE(r.holds == naive);
    if (!naive) {
      REQUIRE(r.counterexample);
      CHECK(r.counterexample->first.precedes(r.counterexample->second));
    }
  }
}

}
