#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "epdyn/dynamics.hpp"
#include "epdyn/errors.hpp"
#include "oracles.hpp"

using namespace epdyn;

namespace {

SymbolicPoint P(const std::string& lit) { return parse_point(lit); }
EpSet S(const std::string& lit) { return parse_epset(lit); }

}  // namespace

TEST_CASE("point literals") {
  CHECK(P("1(10);(0011)").literal() == "1(10);(0011)");
  CHECK(P("0110(1010)").literal() == "01(10)");
  CHECK_THROWS_AS(P(""), parse_error);
  CHECK_THROWS_AS(P("(1);"), parse_error);
  CHECK(P("(0);1(0)").preperiod_bound() == 1);
  CHECK(P("(01);(001)").period_lcm() == 6);
}

TEST_CASE("encoding flips membership") {
  const EpSet evens[] = {S("(10)")};
  CHECK(encode_point(evens).literal() == "(01)");
  const EpSet nat[] = {EpSet::naturals()};
  CHECK(encode_point(nat).literal() == "(0)");
  const EpSet none[] = {EpSet::empty()};
  CHECK(encode_point(none).literal() == "(1)");
  const EpSet two[] = {S("(10)"), S("1(0)")};
  const SymbolicPoint x = encode_point(two);
  CHECK(decode_coordinate(x, 0) == S("(10)"));
  CHECK(decode_coordinate(x, 1) == S("1(0)"));
}

TEST_CASE("shift") {
  CHECK(shift(P("1(0)"), 1) == P("(0)"));
  CHECK(shift(P("(01)"), 2) == P("(01)"));
  CHECK(shift(P("01(011);1(0)"), 0) == P("01(011);1(0)"));
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const std::string lit = oracle::random_point(rng, 3, 6, 6);
    const SymbolicPoint x = P(lit);
    const std::uint64_t a = rng() % 21, b = rng() % 21;
    CHECK(shift(x, a + b) == shift(shift(x, a), b));
    const auto raw = oracle::split_point(lit);
    const SymbolicPoint s = shift(x, a);
    for (std::size_t i = 0; i < raw.size(); ++i)
      for (std::uint64_t k = 0; k < 20; ++k) REQUIRE(s.at(i, k) == raw[i].bit(k + a));
  }
}

TEST_CASE("distance exponent") {
  CHECK(distance_exponent(P("(01)"), P("0(0)")) == 1);
  CHECK_FALSE(distance_exponent(P("1(01)"), P("1(01)")));
  CHECK(distance_exponent(P("(0);(1)"), P("(0);(0)")) == 1);
  std::mt19937_64 rng(22);
  for (int t = 0; t < 300; ++t) {
    const std::size_t c = 1 + rng() % 3;
    std::string lx, ly, lz;
    for (std::size_t i = 0; i < c; ++i) {
      const char* sep = i ? ";" : "";
      lx += sep + oracle::random_literal(rng, 3, 3);
      ly += sep + oracle::random_literal(rng, 3, 3);
      lz += sep + oracle::random_literal(rng, 3, 3);
    }
    const SymbolicPoint x = P(lx), y = P(ly), z = P(lz);
    const Exponent xy = distance_exponent(x, y), yx = distance_exponent(y, x);
    CHECK(xy == yx);
    const auto inf = [](const Exponent& e) { return e.value_or(UINT64_MAX); };
    CHECK(inf(distance_exponent(x, z)) >= std::min(inf(xy), inf(distance_exponent(y, z))));
    CHECK(xy == oracle::exponent(oracle::split_point(lx), 0, oracle::split_point(ly), 0, 64));
  }
}

TEST_CASE("uniform recurrence examples") {
  const auto periodic = is_uniformly_recurrent(P("(01)"));
  CHECK(periodic.uniformly_recurrent);
  REQUIRE_FALSE(periodic.gaps.empty());
  for (const auto& g : periodic.gaps) CHECK(g.max_return_gap == 2);

  const auto finite = is_uniformly_recurrent(P("1(0)"));
  CHECK_FALSE(finite.uniformly_recurrent);
  CHECK(finite.refuting_resolution == 0);
  CHECK(finite.witness_word == std::vector<std::string>{"1"});
  CHECK(finite.return_times == std::vector<std::uint64_t>{0});

  CHECK(is_uniformly_recurrent(P("(01);(0011)")).uniformly_recurrent);
}

TEST_CASE("uniform recurrence agrees with windowed scan") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 300; ++t) {
    std::string lit = oracle::random_point(rng, 3, t % 2 ? 0 : 4, 5);
    const SymbolicPoint x = P(lit);
    const auto cert = is_uniformly_recurrent(x);
    CHECK_MESSAGE(cert.uniformly_recurrent == oracle::uniformly_recurrent(lit), lit);
    if (cert.uniformly_recurrent) {
      for (const auto& g : cert.gaps) CHECK(g.max_return_gap == oracle::return_gap(lit, g.resolution));
      const std::uint64_t beyond = cert.gaps.back().resolution + 3;
      CHECK(oracle::return_gap(lit, beyond) == cert.gaps.back().max_return_gap);
    } else {
      // The refuting window really occurs only at the listed times.
      const std::uint64_t k = *cert.refuting_resolution;
      const auto raw = oracle::split_point(lit);
      const std::uint64_t H = 4 * x.period_lcm() + x.preperiod_bound() + 8;
      std::vector<std::uint64_t> seen;
      for (std::uint64_t n = 0; n <= H; ++n) {
        const auto e = oracle::exponent(raw, n, raw, 0, H + k + 8);
        if (!e || *e > k) seen.push_back(n);
      }
      CHECK(seen == cert.return_times);
    }
  }
}

TEST_CASE("proximality") {
  const auto apart = are_proximal(P("(01)"), P("(10)"));
  CHECK_FALSE(apart.proximal);
  CHECK(apart.separation_exponent == 0);
  const auto close = are_proximal(P("1(0)"), P("(0)"));
  CHECK(close.proximal);
  CHECK(close.asymptotic_from == 1);
  CHECK(are_proximal(P("(0110)"), shift(P("(0110)"), 4)).proximal);
  CHECK_THROWS_AS(are_proximal(P("(0)"), P("(0);(1)")), input_error);

  std::mt19937_64 rng(24);
  for (int t = 0; t < 300; ++t) {
    const std::size_t c = 1 + rng() % 2;
    std::string lx, ly;
    for (std::size_t i = 0; i < c; ++i) {
      const char* sep = i ? ";" : "";
      const std::string tail = "(" + oracle::random_word(rng, 1, 4) + ")";
      lx += sep + oracle::random_word(rng, 0, 4) + tail;
      // Half the time share the periodic tail so that both verdicts occur.
      ly += sep + oracle::random_word(rng, 0, 4) + (rng() % 2 ? tail : "(" + oracle::random_word(rng, 1, 4) + ")");
    }
    const auto cert = are_proximal(P(lx), P(ly));
    CHECK_MESSAGE(cert.proximal == oracle::proximal(lx, ly), lx, " vs ", ly);
    if (!cert.proximal) {
      const SymbolicPoint x = P(lx), y = P(ly);
      for (std::uint64_t n = cert.asymptotic_from; n < cert.asymptotic_from + 3 * 12; ++n) {
        const Exponent e = distance_exponent(shift(x, n), shift(y, n));
        REQUIRE(e);
        CHECK(*e <= *cert.separation_exponent);
      }
    }
  }
}

TEST_CASE("AE solutions") {
  CHECK(ae_solve(P("11(0)")) == P("(0)"));
  CHECK(ae_solve(P("(0110)")) == P("(0110)"));
  CHECK(ae_solve(P("1(10)")) == P("(01)"));
  std::mt19937_64 rng(25);
  for (int t = 0; t < 200; ++t) {
    const SymbolicPoint x = P(oracle::random_point(rng, 3, 8, 8));
    CHECK_FALSE(aet_pair_failure(x, ae_solve(x)));
  }
}

TEST_CASE("eAET extension") {
  CHECK(eaet_extend(P("11(0)"), P("(0)"), P("1(0)")) == P("(0)"));
  CHECK(eaet_extend(P("(01)"), P("(01)"), P("(011)")) == P("(011)"));
  CHECK(eaet_extend(P("(01)"), P("(01)"), P("110(011)")) == P("(011)"));
  CHECK_THROWS_AS(eaet_extend(P("(01)"), P("(10)"), P("(0)")), precondition_error);
  CHECK_THROWS_AS(eaet_extend(P("1(0)"), P("1(0)"), P("(0)")), precondition_error);
}

TEST_CASE("block codes") {
  const BlockCode n = parse_block_code("1,1,1:10");
  CHECK(n.literal() == BlockCode::negation(1).literal());
  const SymbolicPoint in[] = {P("(01)")};
  CHECK(apply_block_code(n, in) == P("(10)"));
  CHECK(apply_block_code(BlockCode::identity(1), in) == P("(01)"));
  const SymbolicPoint pair[] = {P("(01)"), P("(0011)")};
  CHECK(apply_block_code(parse_block_code("2,1,1:0001"), pair) == P("(0001)"));
  // Window 2: x(n) XOR x(n+1).
  const SymbolicPoint one[] = {P("1(0011)")};
  CHECK(apply_block_code(parse_block_code("1,1,2:0110"), one) == P("(10)"));
  CHECK(parse_block_code("2,1,1:0001").literal() == "2,1,1:0001");
  CHECK_THROWS_AS(parse_block_code("1,1,1:1"), parse_error);
  CHECK_THROWS_AS(BlockCode(1, 1, 1, {Bits{true}}), input_error);
  CHECK_THROWS_AS(parse_block_code("1,1:10"), parse_error);
  CHECK_THROWS_AS(parse_block_code("7,1,3:0"), resource_error);
  CHECK_THROWS_AS(apply_block_code(n, pair), input_error);
}

TEST_CASE("eAET' iteration") {
  const BlockCode id[] = {BlockCode::identity(1)};
  const auto r = eaet_prime(P("1(0)"), id);
  CHECK(r.solutions == std::vector<SymbolicPoint>{P("(0)"), P("(0)")});
  CHECK(eaet_prime(P("1(0)"), std::span<const BlockCode>{}).solutions == std::vector<SymbolicPoint>{P("(0)")});
  const BlockCode neg[] = {BlockCode::negation(1)};
  CHECK(eaet_prime(P("(011)"), neg).solutions == std::vector<SymbolicPoint>{P("(011)"), P("(100)")});
  const BlockCode bad[] = {parse_block_code("2,1,1:0001")};
  CHECK_THROWS_AS(eaet_prime(P("(0)"), bad), input_error);

  std::mt19937_64 rng(26);
  for (int t = 0; t < 40; ++t) {
    const SymbolicPoint t0 = P(oracle::random_literal(rng, 4, 4));
    std::vector<BlockCode> codes{BlockCode::negation(1), parse_block_code("2,1,1:0110")};
    const auto out = eaet_prime(t0, codes);
    SymbolicPoint ts = out.targets[0], ys = out.solutions[0];
    for (std::size_t i = 1; i < out.targets.size(); ++i) {
      ts = stack(ts, out.targets[i]);
      ys = stack(ys, out.solutions[i]);
    }
    CHECK_FALSE(aet_pair_failure(ts, ys));
  }
}

TEST_CASE("cylinders") {
  const Cylinder u = parse_cylinder("1,1@(01)");
  CHECK(u.contains(P("(0)")));
  CHECK_FALSE(u.contains(P("(10)")));
  CHECK(parse_cylinder("1,3@(01)").subset_of(u));
  CHECK_FALSE(u.subset_of(parse_cylinder("1,3@(01)")));
  CHECK(parse_cylinder("1,3@(01)").shift_image_within(2, u));
  CHECK_FALSE(parse_cylinder("1,3@(01)").shift_image_within(1, u));
  CHECK(parse_cylinder("2,3@(0);(1)").within_ball(P("(0);(1)"), 2));
  CHECK_FALSE(parse_cylinder("2,2@(0);(1)").within_ball(P("(0);(1)"), 2));
  CHECK_THROWS_AS(parse_cylinder("2,1@(0)"), parse_error);
  CHECK_THROWS_AS(Cylinder(P("(0)"), 2, 1), input_error);
  CHECK_THROWS_AS(parse_cylinder("2,1(0)"), parse_error);
}

TEST_CASE("orbit closures and covering bounds") {
  CHECK(orbit_closure(P("(01)")) == std::vector<SymbolicPoint>{P("(01)"), P("(10)")});
  CHECK(orbit_closure(P("(0)")) == std::vector<SymbolicPoint>{P("(0)")});
  CHECK(orbit_closure(P("1(0)")) == std::vector<SymbolicPoint>{P("1(0)"), P("(0)")});
  CHECK(covering_bound(P("(01)"), parse_cylinder("1,1@(01)")) == 1);
  CHECK(covering_bound(P("(0)"), parse_cylinder("1,5@(0)")) == 0);
  CHECK(covering_bound(P("(0011)"), parse_cylinder("1,1@(0011)")) == 2);
  CHECK_THROWS_AS(covering_bound(P("1(0)"), parse_cylinder("1,1@(0)")), precondition_error);
  CHECK_THROWS_AS(covering_bound(P("(0)"), parse_cylinder("1,1@(1)")), precondition_error);
}
