#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "epdyn/errors.hpp"
#include "epdyn/ipcore.hpp"
#include "oracles.hpp"

using namespace epdyn;
using U = std::vector<std::uint64_t>;

namespace {

SymbolicPoint P(const std::string& lit) { return parse_point(lit); }
EpSet S(const std::string& lit) { return parse_epset(lit); }

// Every sum of <= 4 terms over the first `count` indices lands within
// 2^-(min index) of y.
void check_fs_containment(const IpConstructionCertificate& cert, std::size_t count) {
  const auto terms = cert.generator.terms(count);
  for (const auto& s : oracle::finite_sums(terms, 4)) {
    const Exponent e = distance_exponent(shift(cert.source, s.value), cert.target);
    CHECK((!e || *e >= s.indices.front()));
  }
}

}  // namespace

TEST_CASE("generator literals and terms") {
  CHECK(parse_generator("1,2+(3,1)").terms(6) == U{1, 2, 5, 6, 9, 10});
  CHECK(parse_generator("2+(2)").terms(4) == U{2, 4, 6, 8});
  CHECK(parse_generator("1,2+(3,1)").literal() == "1,2+(3,1)");
  for (const char* bad : {"2", "+(2)", "2+()", "0+(1)", "3,2+(1)", "1+(0)", "1+(2", "a+(1)", "1,,2+(1)"})
    CHECK_THROWS_AS(parse_generator(bad), parse_error);

  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    U head{1 + rng() % 5};
    for (std::size_t i = 1, n = 1 + rng() % 3; i < n; ++i) head.push_back(head.back() + 1 + rng() % 5);
    U diffs;
    for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) diffs.push_back(1 + rng() % 6);
    const IpGenerator g(head, diffs);
    CHECK(g.terms(40) == oracle::generator_terms(head, diffs, 40));
    const std::uint64_t p = 1 + rng() % 12;
    const std::uint64_t r = g.residue_period(p);
    for (std::size_t i = g.residue_phase_start(); i < g.residue_phase_start() + 3 * r; ++i)
      REQUIRE(g.term(i) % p == g.term(i + r) % p);
  }
}

TEST_CASE("finite sums") {
  CHECK(fs_enumerate(parse_generator("1,2,4+(7)"), 0, 3, 10) == U{1, 2, 3, 4, 5, 6, 7});
  CHECK(fs_enumerate(parse_generator("2,4+(7)"), 0, 2, 10) == U{2, 4, 6});
  CHECK(fs_enumerate(parse_generator("5+(1)"), 0, 1, 4).empty());

  std::mt19937_64 rng(32);
  for (int t = 0; t < 300; ++t) {
    U head{1 + rng() % 6};
    for (std::size_t i = 1, n = 1 + rng() % 3; i < n; ++i) head.push_back(head.back() + 1 + rng() % 6);
    U diffs;
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) diffs.push_back(1 + rng() % 8);
    const std::size_t terms = 1 + rng() % 4, from = rng() % 3;
    const std::uint64_t bound = 1 + rng() % 200;
    const auto all = oracle::generator_terms(head, diffs, 210);
    U below;
    for (std::size_t i = 0; i < all.size() && all[i] <= bound; ++i) below.push_back(all[i]);
    const auto expected = from < below.size() ? oracle::fs_values(below, from, terms, bound) : U{};
    CHECK(fs_enumerate(IpGenerator(head, diffs), from, terms, bound) == expected);
  }
}

TEST_CASE("IP sequence construction") {
  const auto fixed = ip_sequence_construct(P("(10)"), P("(10)"), 4);
  CHECK(fixed.generator.literal() == "2,4,6,8+(2)");
  CHECK_FALSE(certificate_failure(fixed));

  const auto asym = ip_sequence_construct(P("1(0)"), P("(0)"), 4);
  CHECK(asym.generator.term(0) >= 1);
  for (const auto& s : oracle::finite_sums(asym.generator.terms(8), 4))
    CHECK_FALSE(distance_exponent(shift(asym.source, s.value), asym.target));

  const auto shifted = ip_sequence_construct(P("1(10)"), P("(01)"), 10);
  for (std::uint64_t n : shifted.generator.terms(12)) CHECK(n % 2 == 0);
  check_fs_containment(shifted, 10);

  CHECK_THROWS_AS(ip_sequence_construct(P("(10)"), P("(01)"), 3), precondition_error);
  CHECK_THROWS_AS(ip_sequence_construct(P("(10)"), P("1(10)"), 3), precondition_error);

  std::mt19937_64 rng(33);
  for (int t = 0; t < 60; ++t) {
    const SymbolicPoint x = P(oracle::random_point(rng, 3, 5, 4));
    const auto cert = ip_sequence_construct(x, ae_solve(x), 12);
    CHECK_FALSE(certificate_failure(cert));
    check_fs_containment(cert, 12);
  }
}

TEST_CASE("certificate checker rejects broken chains") {
  auto cert = ip_sequence_construct(P("1(10)"), P("(01)"), 3);
  auto shallow = cert;
  shallow.neighborhoods[2] = Cylinder(shallow.target, 1, 1);
  CHECK(certificate_failure(shallow));
  auto misplaced = cert;
  misplaced.generator = IpGenerator({1, 3, 5}, {2});
  CHECK(certificate_failure(misplaced));
  auto short_chain = cert;
  short_chain.neighborhoods.pop_back();
  CHECK(certificate_failure(short_chain));
}

TEST_CASE("IP-limit checks") {
  const auto even = ip_limit_check(P("(10)"), parse_generator("2+(2)"), 8, 3, 4);
  CHECK(even.pass);
  CHECK(even.limit == P("(10)"));

  const auto odd = ip_limit_check(P("(10)"), parse_generator("1+(2)"), 2, 2, 3);
  CHECK_FALSE(odd.pass);
  REQUIRE(odd.counterexample);
  CHECK(odd.counterexample->reference_sum == 1);
  CHECK(odd.counterexample->sum == 4);
  CHECK(odd.counterexample->indices == std::vector<std::size_t>{0, 1});
  CHECK(shift(P("(10)"), 1).at(0, 0) != shift(P("(10)"), 4).at(0, 0));

  CHECK(ip_limit_check(P("(0)"), parse_generator("1,3+(5,2)"), 10, 3, 3).pass);
  CHECK_THROWS_AS(ip_limit_check(P("(0)"), parse_generator("1+(1)"), 1, 0, 3), input_error);
}

TEST_CASE("colorings") {
  const Coloring parity = parse_coloring("(10)|(01)");
  CHECK(parity.color(4) == 0);
  CHECK(parity.color(7) == 1);
  CHECK(parity.literal() == "(10)|(01)");
  CHECK(Coloring::two_class(S("(100)")).literal() == "(100)|(011)");
  CHECK_THROWS_AS(parse_coloring("(10)|(1)"), input_error);
  CHECK_THROWS_AS(parse_coloring("(10)"), input_error);
  CHECK_THROWS_AS(parse_coloring("(10)|"), parse_error);
  std::vector<EpSet> nine;
  for (std::uint64_t r = 0; r < 9; ++r) nine.push_back(EpSet::residue_class(r, 9));
  CHECK_THROWS_AS(Coloring{nine}, input_error);
}

TEST_CASE("Hindman search") {
  const Coloring parity = parse_coloring("(10)|(01)");
  CHECK(hindman_search(parity, 3, 20).witness == U{2, 4, 8});
  CHECK(hindman_search(parse_coloring("(1)"), 4, 20).witness == U{1, 2, 4, 8});
  const auto none = hindman_search(parse_coloring("(100)|(011)"), 2, 3);
  CHECK(none.exhausted());
  CHECK(none.bound == 3);
  CHECK_THROWS_AS(hindman_search(parity, 1, 20), input_error);
  CHECK_THROWS_AS(hindman_search(parity, 2, kMaxSearchBound + 1), resource_error);

  std::mt19937_64 rng(34);
  for (int t = 0; t < 80; ++t) {
    const EpSet zero = S(oracle::random_literal(rng, 3, 4));
    const Coloring c = Coloring::two_class(zero);
    const std::size_t k = 2 + t % 2;
    const std::uint64_t bound = 20 + rng() % 21;
    const auto expected = oracle::hindman_scan([&](std::uint64_t n) { return zero.contains(n); }, k, bound);
    const auto got = hindman_search(c, k, bound, 1 + t % 4);
    CHECK(got.witness == expected);
    if (got.witness) {
      const Coloring one[] = {c};
      CHECK_FALSE(iht_violation(one, *got.witness));
    }
  }
}

TEST_CASE("IHT search") {
  const Coloring parity = parse_coloring("(10)|(01)");
  const Coloring single[] = {parity};
  CHECK(iht_search(single, 3, 40).witness == hindman_search(parity, 3, 40).witness);

  const Coloring two[] = {parity, parse_coloring("(1000)|(0111)")};
  const auto r = iht_search(two, 2, 64);
  REQUIRE(r.witness);
  CHECK(*r.witness == U{2, 4, 8});
  CHECK_FALSE(iht_violation(two, *r.witness));
  CHECK(iht_search(two, 2, 64, 4).witness == r.witness);
  CHECK(iht_search(two, 2, 7).exhausted());

  const U bad{2, 4, 6};
  const auto v = iht_violation(two, bad);
  REQUIRE(v);
  CHECK(v->first == 1);
}

TEST_CASE("finite-sum subsets") {
  CHECK(fs_subset_search(S("(10)"), 4, 64).witness == U{2, 4, 8, 16});
  CHECK(fs_subset_search(S("(01)"), 4, 64).exhausted());
  CHECK(fs_subset_search(S("(1)"), 3, 64, 3).witness == U{1, 2, 4});
}

TEST_CASE("AET to IHT pipeline") {
  const EpSet parity[] = {S("(10)")};
  const auto r = aet_to_iht_pipeline(parity, 4);
  CHECK(r.all_homogeneous());
  for (std::uint64_t n : r.terms) CHECK(n % 2 == 0);

  const EpSet all[] = {EpSet::naturals()};
  CHECK(aet_to_iht_pipeline(all, 4).all_homogeneous());

  const EpSet twice[] = {S("(10)"), S("(10)")};
  const auto both = aet_to_iht_pipeline(twice, 5);
  CHECK(both.all_homogeneous());
  CHECK(both.certificate.generator.terms(8) == r.certificate.generator.terms(8));

  std::mt19937_64 rng(35);
  for (int t = 0; t < 20; ++t) {
    std::vector<EpSet> cs;
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) cs.push_back(S(oracle::random_literal(rng, 3, 6)));
    const auto out = aet_to_iht_pipeline(cs, 10);
    CHECK(out.all_homogeneous());
    std::vector<Coloring> colorings;
    for (const auto& c : cs) colorings.push_back(Coloring::two_class(c));
    CHECK_FALSE(iht_violation(colorings, out.terms));
  }
}
