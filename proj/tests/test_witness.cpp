#include <doctest.h>

#include <random>

#include "iplab/witness.hpp"
#include "oracles.hpp"

using namespace iplab;

namespace {

SearchOptions det(unsigned threads = 1) {
  SearchOptions o;
  o.deterministic = true;
  o.threads = threads;
  return o;
}

MultiplicativeFunction liouville_prefix(std::uint32_t limit) {
  return MultiplicativeFunction::sieve_bounded(2, {}, limit, 1);
}

std::vector<mpz_class> z(std::initializer_list<long> xs) {
  std::vector<mpz_class> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

std::vector<mpz_class> values(const std::vector<SubsetSum>& sums) {
  std::vector<mpz_class> out;
  for (const auto& s : sums) out.push_back(s.value);
  return out;
}

// f(n) for a finite-support f by repeated division, independent of valuation().
unsigned eval_big(const PrimeAssignment& a, unsigned k, mpz_class n) {
  unsigned long s = 0;
  for (auto [p, c] : a) {
    while (n % p == 0) {
      n /= p;
      s += c;
    }
  }
  return static_cast<unsigned>(s % k);
}

}  // namespace

TEST_SUITE("witness") {

TEST_CASE("fs_closure examples") {
  CHECK(values(fs_closure(std::vector<std::uint64_t>{1})) == z({1}));
  CHECK(values(fs_closure(std::vector<std::uint64_t>{9, 15})) == z({9, 15, 24}));
  CHECK(values(fs_closure(std::vector<std::uint64_t>{1, 2, 4})) == z({1, 2, 3, 4, 5, 6, 7}));
  auto dup = fs_closure(std::vector<std::uint64_t>{1, 2, 3});
  CHECK(values(dup) == z({1, 2, 3, 4, 5, 6}));
  std::uint64_t total = 0;
  for (const auto& s : dup) total += s.multiplicity;
  CHECK(total == 7);
  CHECK(dup[2] == SubsetSum{3, 2});
  auto big = z({2, 144});
  CHECK(values(fs_closure(big)) == z({2, 144, 146}));
  CHECK(fs_closure(std::vector<std::uint64_t>{}).empty());
}

TEST_CASE("pipeline, k = 1, m = 3") {
  MultiplicativeFunction f;
  auto r = ip_witness_from_proof(f, 3, 3, det());
  REQUIRE(r.status == SearchStatus::Found);
  const auto& w = *r.witness;
  CHECK(w.provenance == Provenance::ProofPipeline);
  CHECK(w.blocks == std::vector<IndexSet>{{1}, {2}, {3}});
  CHECK(w.b_values == z({1, 2, 144}));
  CHECK(w.base == 1);
  CHECK(w.generators == z({2, 144}));
  CHECK(verify_witness(w));
}

TEST_CASE("pipeline, k = 2, support {2}") {
  auto f = MultiplicativeFunction::finite_support(2, {{2, 1}});
  auto r = ip_witness_from_proof(f, 2, 6, det());
  REQUIRE(r.status == SearchStatus::Found);
  const auto& w = *r.witness;
  CHECK(verify_witness(w));
  REQUIRE(w.b_values.size() == 2);
  // Independent checks: divisibility, one coset, and the sums themselves.
  for (const auto& b : w.b_values) {
    CHECK(b % w.b_values[0] == 0);
    CHECK(eval_big({{2, 1}}, 2, b) == eval_big({{2, 1}}, 2, w.b_values[0]));
  }
  for (const auto& s : fs_closure(w.generators)) {
    CHECK(eval_big({{2, 1}}, 2, s.value) == 0);
    CHECK(eval_big({{2, 1}}, 2, s.value + 1) == 0);
  }
  CHECK(w.blocks == std::vector<IndexSet>{{1}, {3}});
  CHECK(w.generators == z({144}));
}

TEST_CASE("pipeline refuses or fails cleanly") {
  auto f = MultiplicativeFunction::finite_support(2, {{2, 1}, {3, 1}});
  auto r = ip_witness_from_proof(f, 2, 1);
  CHECK(r.status == SearchStatus::NotFound);
  CHECK_FALSE(r.witness);
  auto sieve = MultiplicativeFunction::sieve_bounded(2, {}, 100, 1);
  CHECK_THROWS_AS(ip_witness_from_proof(sieve, 2, 3), UnsupportedMode);
  CHECK_THROWS_AS(ip_witness_from_proof(f, 2, 9), CapExceeded);
  CHECK_THROWS_AS(ip_witness_from_proof(f, 1, 3), std::invalid_argument);
}

TEST_CASE("direct search examples") {
  auto f = MultiplicativeFunction::sieve_bounded(1, {}, 4, 0);
  auto r = ip_witness_direct(f, 2, 3, det());
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(r.witness->generators == z({1, 2}));

  auto lam = liouville_prefix(31);
  auto r2 = ip_witness_direct(lam, 2, 30, det());
  REQUIRE(r2.status == SearchStatus::Found);
  CHECK(r2.witness->generators == z({9, 15}));
  CHECK(r2.witness->provenance == Provenance::DirectSearch);
  CHECK(verify_witness(*r2.witness));

  auto r1 = ip_witness_direct(liouville_prefix(11), 1, 10, det());
  REQUIRE(r1.status == SearchStatus::Found);
  CHECK(r1.witness->generators == z({9}));
}

TEST_CASE("direct search agrees with a Liouville scan") {
  // Least pair (a, b) with a, b, a+b all starting lambda-pairs.
  std::vector<std::uint64_t> s;
  for (std::uint64_t a = 1; a <= 30; ++a) {
    if (oracle::liouville(a) == 1 && oracle::liouville(a + 1) == 1) s.push_back(a);
  }
  auto in_s = [&](std::uint64_t x) { return std::find(s.begin(), s.end(), x) != s.end(); };
  std::optional<std::pair<std::uint64_t, std::uint64_t>> least;
  for (std::size_t i = 0; i < s.size() && !least; ++i) {
    for (std::size_t j = i + 1; j < s.size() && !least; ++j) {
      if (in_s(s[i] + s[j])) least.emplace(s[i], s[j]);
    }
  }
  REQUIRE(least);
  CHECK(least->first == 9);
  CHECK(least->second == 15);
}

TEST_CASE("direct search range and not-found") {
  auto lam = liouville_prefix(30);
  CHECK_THROWS_AS(ip_witness_direct(lam, 2, 30), std::out_of_range);
  auto r = ip_witness_direct(liouville_prefix(9), 1, 8);
  CHECK(r.status == SearchStatus::NotFound);
  CHECK_THROWS_AS(ip_witness_direct(lam, 0, 10), std::invalid_argument);
}

TEST_CASE("verify_witness examples") {
  IPWitness w;
  w.f = liouville_prefix(31);
  w.generators = z({9, 15});
  CHECK(verify_witness(w));
  w.generators = z({9, 14});
  CHECK_FALSE(verify_witness(w));
  w.generators = z({15, 9});
  CHECK_FALSE(verify_witness(w));
  w.generators = z({9, 25});
  CHECK_THROWS_AS(verify_witness(w), std::out_of_range);

  IPWitness trivial;
  trivial.generators = z({3, 17, 1000000});
  CHECK(verify_witness(trivial));
}

TEST_CASE("desk-scale: every k = 2 assignment of primes <= 10 has a pair below 10") {
  for (unsigned bits = 0; bits < 16; ++bits) {
    PrimeAssignment a{{2, bits & 1}, {3, bits >> 1 & 1}, {5, bits >> 2 & 1}, {7, bits >> 3 & 1}};
    auto f = MultiplicativeFunction::sieve_bounded(2, a, 10);
    auto r = ip_witness_direct(f, 1, 9, det());
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(verify_witness(*r.witness));
    CHECK_FALSE(find_runs(f, 2, 9).empty());
  }
}

TEST_CASE("property: pipeline witnesses always verify") {
  std::mt19937 rng(31);
  int found = 0;
  for (int trial = 0; trial < 12; ++trial) {
    unsigned k = 2 + rng() % 3;
    PrimeAssignment a;
    for (std::uint64_t p : {2, 3, 5, 7}) {
      if (rng() % 2) a[p] = static_cast<unsigned>(rng() % k);
    }
    auto f = MultiplicativeFunction::finite_support(k, a);
    auto r = ip_witness_from_proof(f, 2, 5, det());
    if (r.status != SearchStatus::Found) continue;
    ++found;
    const auto& w = *r.witness;
    REQUIRE(verify_witness(w));
    for (const auto& s : fs_closure(w.generators)) {
      REQUIRE(eval_big(a, k, s.value) == 0);
      REQUIRE(eval_big(a, k, s.value + 1) == 0);
    }
  }
  CHECK(found > 0);
}

TEST_CASE("property: direct witnesses verify and are independent of threads") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    PrimeAssignment a;
    for (std::uint64_t p : oracle::primes_upto(400)) a[p] = static_cast<unsigned>(rng() % 2);
    auto f = MultiplicativeFunction::sieve_bounded(2, a, 400);
    auto one = ip_witness_direct(f, 3, 120, det(1));
    auto many = ip_witness_direct(f, 3, 120, det(8));
    REQUIRE(one.status == many.status);
    if (one.status == SearchStatus::Found) {
      CHECK(verify_witness(*one.witness));
      CHECK(one.witness->generators == many.witness->generators);
    }
  }
}

}
