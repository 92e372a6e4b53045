#include <doctest.h>

#include <random>

#include "iplab/multfunc.hpp"
#include "oracles.hpp"

using namespace iplab;

namespace {

PrimeAssignment mod3_character(std::uint64_t limit, unsigned class_of_3) {
  PrimeAssignment a;
  for (std::uint64_t p : oracle::primes_upto(limit)) {
    a[p] = p == 3 ? class_of_3 : (p % 3 == 1 ? 0 : 1);
  }
  return a;
}

}  // namespace

TEST_SUITE("multfunc") {

TEST_CASE("trivial modulus sends everything to class 0") {
  auto f = MultiplicativeFunction::sieve_bounded(1, {}, 1000, 0);
  auto g = MultiplicativeFunction::finite_support(1, {});
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    REQUIRE(f.evaluate(n).value == 0);
    REQUIRE(g.evaluate(n).value == 0);
  }
}

TEST_CASE("evaluate 12 with f(2) = f(3) = 1, k = 2") {
  auto f = MultiplicativeFunction::sieve_bounded(2, {{2, 1}, {3, 1}}, 12, 0);
  CHECK(f.evaluate(std::uint64_t{12}).value == 1);
  auto g = MultiplicativeFunction::finite_support(2, {{2, 1}, {3, 1}});
  CHECK(g.evaluate(std::uint64_t{12}).value == 1);
  CHECK(g.evaluate(mpz_class(12)).value == 1);
  CHECK(f.evaluate(std::uint64_t{1}).value == 0);
}

TEST_CASE("squares are in the kernel for k = 2") {
  for (unsigned bits = 0; bits < 16; ++bits) {
    PrimeAssignment a{{2, bits & 1}, {3, bits >> 1 & 1}, {5, bits >> 2 & 1}, {7, bits >> 3 & 1}};
    auto f = MultiplicativeFunction::sieve_bounded(2, a, 10);
    REQUIRE(f.evaluate(std::uint64_t{9}).value == 0);
    REQUIRE(f.evaluate(std::uint64_t{4}).value == 0);
  }
}

TEST_CASE("runs for k = 1") {
  auto f = MultiplicativeFunction::sieve_bounded(1, {}, 10, 0);
  CHECK(find_runs(f, 2, 3) == std::vector<Run>{{1, 2}, {2, 2}, {3, 2}});
}

TEST_CASE("Liouville-like prefix: first pair starts at 9") {
  PrimeAssignment a;
  for (std::uint64_t p : oracle::primes_upto(11)) a[p] = 1;
  auto f = MultiplicativeFunction::sieve_bounded(2, a, 11);
  auto runs = find_runs(f, 2, 10);
  REQUIRE_FALSE(runs.empty());
  CHECK(runs.front().start == 9);
  // Oracle: lambda(a) = lambda(a+1) = 1 by trial division.
  std::vector<Run> expected;
  for (std::uint64_t x = 1; x <= 10; ++x) {
    if (oracle::liouville(x) == 1 && oracle::liouville(x + 1) == 1) expected.push_back({x, 2});
  }
  CHECK(runs == expected);
}

TEST_CASE("mod-3 character has no kernel triple") {
  for (unsigned c3 : {0u, 1u}) {
    auto f = MultiplicativeFunction::sieve_bounded(2, mod3_character(10002, c3), 10002);
    CHECK(find_runs(f, 3, 10000).empty());
    // Cross-check: every window of three has an element that is 2 mod 3,
    // and those evaluate to class 1 by trial division.
    auto a = mod3_character(10002, c3);
    for (std::uint64_t x = 1; x <= 10000; ++x) {
      std::uint64_t y = x % 3 == 2 ? x : (x + 1) % 3 == 2 ? x + 1 : x + 2;
      REQUIRE(oracle::eval(a, 2, y) == 1);
    }
  }
}

TEST_CASE("range and argument errors") {
  auto f = MultiplicativeFunction::sieve_bounded(2, {}, 50, 1);
  CHECK_THROWS_AS(f.evaluate(std::uint64_t{51}), std::out_of_range);
  CHECK_THROWS_AS(f.evaluate(mpz_class("100000000000000000000")), std::out_of_range);
  CHECK_THROWS_AS(f.evaluate(std::uint64_t{0}), std::invalid_argument);
  CHECK_THROWS_AS(find_runs(f, 2, 50), std::out_of_range);
  CHECK_NOTHROW(find_runs(f, 2, 49));
  CHECK_THROWS_AS(MultiplicativeFunction::sieve_bounded(2, {{4, 1}}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicativeFunction::sieve_bounded(2, {{3, 2}}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicativeFunction::sieve_bounded(2, {{2, 1}}, 10), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicativeFunction::sieve_bounded(2, {{13, 1}}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicativeFunction::finite_support(3, {{9, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(MultiplicativeFunction::finite_support(0, {}), std::invalid_argument);
}

TEST_CASE("property: complete multiplicativity") {
  std::mt19937_64 rng(20240611);
  const std::uint32_t limit = 200000;
  for (int trial = 0; trial < 20; ++trial) {
    unsigned k = 1 + rng() % 7;
    PrimeAssignment a;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) a[p] = static_cast<unsigned>(rng() % k);
    auto f = MultiplicativeFunction::sieve_bounded(k, a, limit, static_cast<unsigned>(rng() % k));
    for (int i = 0; i < 500; ++i) {
      std::uint64_t m = 1 + rng() % 447;
      std::uint64_t n = 1 + rng() % 447;
      REQUIRE(f.evaluate(m * n).value == (f.evaluate(m).value + f.evaluate(n).value) % k);
    }
  }
}

TEST_CASE("property: finite-support agrees with sieve-bounded") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    unsigned k = 2 + rng() % 6;
    PrimeAssignment a;
    for (std::uint64_t p : oracle::primes_upto(60)) {
      if (rng() % 2) a[p] = static_cast<unsigned>(rng() % k);
    }
    auto fs = MultiplicativeFunction::finite_support(k, a);
    auto sb = MultiplicativeFunction::sieve_bounded(k, a, 5000, 0);
    for (std::uint64_t n = 1; n <= 5000; ++n) {
      REQUIRE(fs.evaluate(n) == sb.evaluate(n));
      REQUIRE(sb.evaluate(n).value == oracle::eval(a, k, n));
    }
  }
}

TEST_CASE("property: find_runs is exact") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    unsigned k = 1 + rng() % 4;
    unsigned r = 1 + rng() % 3;
    PrimeAssignment a;
    for (std::uint64_t p : oracle::primes_upto(400)) a[p] = static_cast<unsigned>(rng() % k);
    auto f = MultiplicativeFunction::sieve_bounded(k, a, 400);
    auto runs = find_runs(f, r, 400 - r + 1);
    std::vector<Run> expected;
    for (std::uint64_t x = 1; x + r - 1 <= 400; ++x) {
      bool all = true;
      for (unsigned j = 0; j < r; ++j) all = all && oracle::eval(a, k, x + j) == 0;
      if (all) expected.push_back({x, r});
    }
    REQUIRE(runs == expected);
  }
}

TEST_CASE("finite-support evaluation at huge arguments uses valuations") {
  auto f = MultiplicativeFunction::finite_support(3, {{2, 1}, {5, 2}});
  mpz_class n;
  mpz_ui_pow_ui(n.get_mpz_t(), 2, 1001);  // 1001 * 1 = 2 mod 3
  n *= 25;                                 // + 2 * 2 = 6 = 0 mod 3
  n *= 7919;                               // unlisted prime
  CHECK(f.evaluate(n).value == 0);
  CHECK(f.evaluate(mpz_class(n * 2)).value == 1);
}

}
