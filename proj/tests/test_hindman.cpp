#include <doctest.h>

#include <random>

#include "iplab/hindman.hpp"
#include "oracles.hpp"

using namespace iplab;

namespace {

SearchOptions det(unsigned threads = 1) {
  SearchOptions o;
  o.deterministic = true;
  o.threads = threads;
  return o;
}

SubsetColoring table_coloring(unsigned n, unsigned classes, std::vector<unsigned> table) {
  return {n, classes, [t = std::move(table)](const IndexSet& s) { return t.at(s.mask()); }};
}

std::vector<unsigned> random_table(unsigned n, unsigned classes, std::mt19937& rng) {
  std::vector<unsigned> t(std::size_t{2} << n);
  for (auto& c : t) c = 1 + rng() % classes;
  return t;
}

}  // namespace

TEST_SUITE("hindman") {

TEST_CASE("fu_closure examples") {
  CHECK(fu_closure({{{1}, {2}}}) == std::vector<IndexSet>{{1}, {2}, {1, 2}});
  CHECK(fu_closure({{{1, 2}}}) == std::vector<IndexSet>{{1, 2}});
  auto c = fu_closure({{{1}, {3}, {5}}});
  REQUIRE(c.size() == 7);
  CHECK(c.back() == IndexSet{1, 3, 5});
  // Overlapping blocks: duplicates are merged.
  CHECK(fu_closure({{{1, 2}, {2}}}).size() == 2);
  CHECK(fu_closure({}).empty());
}

TEST_CASE("is_increasing") {
  CHECK(BlockFamily{{{1}, {2, 3}, {5}}}.is_increasing());
  CHECK_FALSE(BlockFamily{{{1, 3}, {2}}}.is_increasing());
  CHECK_FALSE(BlockFamily{}.is_increasing());
}

TEST_CASE("one color yields singletons") {
  SubsetColoring c{4, 1, [](const IndexSet&) { return 1u; }};
  auto r = monochromatic_fu_search(c, 3, det());
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(r.family->blocks == std::vector<IndexSet>{{1}, {2}, {3}});
  CHECK(r.color == 1);
}

TEST_CASE("size parity") {
  SubsetColoring c{6, 2, [](const IndexSet& s) { return 1 + static_cast<unsigned>(s.size() % 2); }};
  auto r = monochromatic_fu_search(c, 2, det());
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(is_monochromatic(*r.family, c));
  CHECK(r.family->is_increasing());
  // Odd A_1 has an even union with any odd A_2, so the least family is even.
  CHECK(r.family->blocks == std::vector<IndexSet>{{1, 2}, {3, 4}});
  CHECK(r.color == 1);
}

TEST_CASE("parity of the maximum has no 2-family in {1,2}") {
  SubsetColoring c{2, 2, [](const IndexSet& s) { return 1 + s.max() % 2; }};
  CHECK(monochromatic_fu_search(c, 2, det()).status == SearchStatus::NotFound);
  CHECK_FALSE(oracle::brute_hindman_pair(2, [](std::uint64_t mask) {
    return (63 - __builtin_clzll(mask)) % 2;
  }));
  // Larger grounds succeed, e.g. {1}, {3}.
  SubsetColoring big{4, 2, c.color};
  auto r = monochromatic_fu_search(big, 2, det());
  REQUIRE(r.status == SearchStatus::Found);
  CHECK(r.family->blocks == std::vector<IndexSet>{{1}, {3}});
}

TEST_CASE("m larger than the ground set") {
  SubsetColoring c{3, 1, [](const IndexSet&) { return 1u; }};
  CHECK(monochromatic_fu_search(c, 4).status == SearchStatus::NotFound);
  CHECK(monochromatic_fu_search(c, 3).status == SearchStatus::Found);
}

TEST_CASE("argument errors") {
  SubsetColoring c{3, 1, [](const IndexSet&) { return 1u; }};
  CHECK_THROWS_AS(monochromatic_fu_search(c, 0), std::invalid_argument);
  CHECK_THROWS_AS(monochromatic_fu_search({0, 1, c.color}, 2), std::invalid_argument);
  CHECK_THROWS_AS(monochromatic_fu_search({31, 1, c.color}, 2), std::invalid_argument);
  CHECK_THROWS_AS(monochromatic_fu_search({3, 1, {}}, 2), std::invalid_argument);
  SubsetColoring bad{3, 2, [](const IndexSet&) { return 3u; }};
  CHECK_THROWS_AS(monochromatic_fu_search(bad, 2), std::invalid_argument);
  SearchOptions four;
  four.threads = 4;
  CHECK_THROWS_AS(monochromatic_fu_search(bad, 2, four), std::invalid_argument);
}

TEST_CASE("budget exhaustion is unknown") {
  std::mt19937 rng(1);
  auto c = table_coloring(16, 5, random_table(16, 5, rng));
  SearchOptions o;
  o.max_nodes = 100;
  auto r = monochromatic_fu_search(c, 6, o);
  CHECK(r.status == SearchStatus::Unknown);
}

TEST_CASE("property: sound and complete on random 3-colorings, n = 10, m = 2") {
  std::mt19937 rng(2024);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto table = random_table(10, 3, rng);
    auto c = table_coloring(10, 3, table);
    auto r = monochromatic_fu_search(c, 2, det());
    bool exists = oracle::brute_hindman_pair(10, [&](std::uint64_t m) { return table[m]; });
    REQUIRE((r.status == SearchStatus::Found) == exists);
    if (exists) {
      ++found;
      CHECK(r.family->is_increasing());
      CHECK(is_monochromatic(*r.family, c));
    }
  }
  CHECK(found > 0);
}

TEST_CASE("property: sparse colorings exercise NotFound") {
  std::mt19937 rng(77);
  int not_found = 0;
  for (int trial = 0; trial < 300; ++trial) {
    unsigned n = 2 + rng() % 3;
    auto table = random_table(n, 4, rng);
    auto c = table_coloring(n, 4, table);
    auto r = monochromatic_fu_search(c, 2);
    bool exists = oracle::brute_hindman_pair(n, [&](std::uint64_t m) { return table[m]; });
    REQUIRE((r.status == SearchStatus::Found) == exists);
    not_found += !exists;
  }
  CHECK(not_found > 0);
}

TEST_CASE("property: deterministic result is independent of threads") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto table = random_table(12, 2, rng);
    auto c = table_coloring(12, 2, table);
    auto one = monochromatic_fu_search(c, 3, det(1));
    for (unsigned t : {2u, 8u}) {
      auto many = monochromatic_fu_search(c, 3, det(t));
      REQUIRE(many.status == one.status);
      CHECK(many.family == one.family);
    }
  }
}

}
