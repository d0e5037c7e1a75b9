#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "epdyn/algebra.hpp"
#include "epdyn/epset.hpp"
#include "epdyn/errors.hpp"
#include "oracles.hpp"

using namespace epdyn;

namespace {

Bits bits(const std::string& w) {
  Bits b;
  for (char c : w) b.push_back(c == '1');
  return b;
}

EpSet S(const std::string& lit) { return parse_epset(lit); }

std::uint64_t horizon(const std::string& a, const std::string& b) {
  const auto ra = oracle::split(a), rb = oracle::split(b);
  return std::max(ra.pre.size(), rb.pre.size()) + 3 * std::lcm(ra.per.size(), rb.per.size());
}

}  // namespace

TEST_CASE("normalize examples") {
  CHECK(EpSet::normalize(bits("0110"), bits("1010")).literal() == "01(10)");
  CHECK(EpSet::normalize(bits(""), bits("1")).literal() == "(1)");
  CHECK(EpSet::normalize(bits("1"), bits("11")).literal() == "(1)");
  CHECK_THROWS_AS(EpSet::normalize(bits("1"), bits("")), input_error);
}

TEST_CASE("normalize matches raw expansion and is idempotent") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    const std::string lit = oracle::random_literal(rng, 6, 8);
    const EpSet x = S(lit);
    const auto raw = oracle::split(lit);
    for (std::uint64_t n = 0; n <= raw.pre.size() + 3 * raw.per.size(); ++n) REQUIRE(x.contains(n) == raw.bit(n));
    CHECK(S(x.literal()) == x);
    CHECK(x.literal().size() <= lit.size());
  }
}

TEST_CASE("literal parsing rejects malformed input") {
  for (const char* bad : {"()", "01", "(12)", "0(1", "(10", "a(1)", "(1)1", ""})
    CHECK_THROWS_AS(S(bad), parse_error);
  CHECK(S("0110(1010)").literal() == "01(10)");
}

TEST_CASE("membership") {
  CHECK(member(S("(10)"), 0));
  CHECK_FALSE(member(S("(10)"), 3));
  CHECK_FALSE(member(S("1(0)"), 5));
  CHECK(member(S("1(0)"), 0));
}

TEST_CASE("boolean operations") {
  CHECK(complement(S("(10)")).literal() == "(01)");
  CHECK(intersect(S("(10)"), S("(01)")).literal() == "(0)");
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    const std::string a = oracle::random_literal(rng, 5, 6), b = oracle::random_literal(rng, 5, 6);
    const EpSet x = S(a), y = S(b);
    CHECK(unite(x, complement(x)) == EpSet::naturals());
    CHECK(unite(x, y) == unite(y, x));
    CHECK(intersect(x, y) == intersect(y, x));
    CHECK(complement(unite(x, y)) == intersect(complement(x), complement(y)));
    CHECK(unite(x, intersect(x, y)) == x);
    const auto ra = oracle::split(a), rb = oracle::split(b);
    const EpSet u = unite(x, y), i = intersect(x, y), c = complement(x);
    for (std::uint64_t n = 0; n <= horizon(a, b); ++n) {
      REQUIRE(u.contains(n) == (ra.bit(n) || rb.bit(n)));
      REQUIRE(i.contains(n) == (ra.bit(n) && rb.bit(n)));
      REQUIRE(c.contains(n) == !ra.bit(n));
    }
    CHECK(u.preperiod_length() <= std::max(ra.pre.size(), rb.pre.size()));
    CHECK(std::lcm(ra.per.size(), rb.per.size()) % u.period_length() == 0);
    CHECK(is_subset(i, x));
    CHECK(is_subset(x, u));
  }
}

TEST_CASE("downward translation") {
  CHECK(translate_down(S("(10)"), 1) == S("(01)"));
  CHECK(translate_down(S("111(0)"), 2) == S("1(0)"));
  CHECK(translate_down(S("0110(01)"), 0) == S("0110(01)"));
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const std::string lit = oracle::random_literal(rng, 6, 6);
    const EpSet x = S(lit);
    const auto raw = oracle::split(lit);
    const std::uint64_t a = rng() % 12, b = rng() % 12;
    CHECK(translate_down(x, a + b) == translate_down(translate_down(x, a), b));
    const EpSet d = translate_down(x, a);
    for (std::uint64_t k = 0; k < 30; ++k) REQUIRE(d.contains(k) == raw.bit(k + a));
  }
}

TEST_CASE("syndeticity") {
  CHECK(is_syndetic(S("(10)")).bound == 1);
  CHECK(is_syndetic(S("(100)")).bound == 2);
  CHECK(is_syndetic(S("(1)")).bound == 0);
  const auto finite = is_syndetic(S("1(0)"));
  CHECK_FALSE(finite.bound);
  CHECK(finite.misses_from == 1);
  CHECK(is_syndetic(S("0000(1)")).bound == 4);

  std::mt19937_64 rng(14);
  for (int t = 0; t < 500; ++t) {
    const std::string lit = oracle::random_literal(rng, 6, 8);
    CHECK_MESSAGE(is_syndetic(S(lit)).bound == oracle::max_gap(lit), lit);
  }
}

TEST_CASE("infinite sets") {
  CHECK(is_infinite(S("(01)")));
  CHECK_FALSE(is_infinite(S("111(0)")));
}

TEST_CASE("algebra examples") {
  const EpSet nat[] = {EpSet::naturals()};
  CHECK(generate_algebra(nat, false).size() == 2);
  const EpSet evens[] = {S("(10)")};
  const Algebra a = generate_algebra(evens, true);
  CHECK(a.size() == 4);
  CHECK(a.contains(S("(0)")));
  CHECK(a.contains(S("(1)")));
  CHECK(a.contains(S("(01)")));
  const EpSet threes[] = {S("(100)")};
  CHECK(generate_algebra(threes, true).size() == 8);
  CHECK(generate_algebra(threes, false).size() == 4);
  CHECK_THROWS_AS(generate_algebra(threes, true, 4), resource_error);
  CHECK_THROWS_AS(generate_algebra(std::span<const EpSet>{}, true), input_error);
}

TEST_CASE("algebra equals brute-force closure and is closed") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 60; ++t) {
    std::vector<std::string> lits{oracle::random_literal(rng, 3, 4)};
    if (t % 2) lits.push_back(oracle::random_literal(rng, 2, 3));
    std::vector<EpSet> gens;
    for (const auto& l : lits) gens.push_back(S(l));
    const bool downward = t % 3 != 0;
    Algebra a;
    try {
      a = generate_algebra(gens, downward, 1024);
    } catch (const resource_error&) {
      continue;
    }
    const auto expected = oracle::closure(lits, downward);
    REQUIRE(a.size() == expected.size());
    const std::uint64_t width = expected.begin()->size();
    for (const EpSet& m : a.members()) {
      std::vector<bool> w(width);
      for (std::uint64_t n = 0; n < width; ++n) w[n] = m.contains(n);
      CHECK(expected.count(w) == 1);
    }
    CHECK(std::is_sorted(a.members().begin(), a.members().end(), LiteralLess{}));
    if (a.size() <= 64) {
      for (const EpSet& x : a.members()) {
        CHECK(a.contains(complement(x)));
        if (downward) CHECK(a.contains(translate_down(x, 1)));
        for (const EpSet& y : a.members()) {
          CHECK(a.contains(unite(x, y)));
          CHECK(a.contains(intersect(x, y)));
        }
      }
    }
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.index_of_mask(a.mask(i)) == i);
  }
}
