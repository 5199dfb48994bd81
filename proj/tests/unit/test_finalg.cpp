#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ualg/algebra_io.hpp"
#include "ualg/error.hpp"
#include "ualg/finite_algebra.hpp"
#include "ualg/parse.hpp"

using namespace ualg;

namespace {

std::vector<std::vector<Element>> partition(const Congruence& c) { return c.classes(); }

}  // namespace

TEST_SUITE("finalg") {
  TEST_CASE("evaluate") {
    auto z6 = fixtures::ring(6);
    auto t = parse_term("add(mul(x,y),one)", z6->signature());
    CHECK(evaluate(*z6, *t, {{"x", 2}, {"y", 3}}) == 1);
    CHECK(evaluate(*z6, *parse_term("one", z6->signature()), {}) == 1);

    auto z2 = fixtures::ring(2);
    auto d = parse_term("add(mul(a,c),mul(b,d))", z2->signature());
    CHECK(evaluate(*z2, *d, {{"a", 1}, {"b", 0}, {"c", 1}, {"d", 0}}) == 1);
    CHECK_THROWS_AS(evaluate(*z2, *d, {{"a", 1}}), Error);
    CHECK_THROWS_AS(evaluate(*z2, *parse_term("(one|zero)", z2->signature()), {}), Error);
  }

  TEST_CASE("algebra constructor validates tables") {
    auto sig = fixtures::ring_signature();
    CHECK_THROWS_AS(FiniteAlgebra("bad", sig, 2, {{0, 1, 1, 0}, {0, 0, 0, 1}, {0}}), Error);
    CHECK_THROWS_AS(FiniteAlgebra("bad", sig, 2, {{0, 1, 1, 2}, {0, 0, 0, 1}, {0}, {1}}), Error);
    CHECK_THROWS_AS(FiniteAlgebra("bad", sig, 2, {{0, 1, 1}, {0, 0, 0, 1}, {0}, {1}}), Error);
  }

  TEST_CASE("product") {
    auto z2 = fixtures::ring(2);
    auto z3 = fixtures::ring(3);
    auto p = product(z2, z3);
    CHECK(p.algebra->size() == 6);
    CHECK(p.p1.is_homomorphism());
    CHECK(p.p2.is_homomorphism());
    CHECK(p.p1.is_surjective());
    CHECK(oracle::isomorphic(*p.algebra, *fixtures::ring(6)));
    CHECK(find_isomorphism(p.algebra, fixtures::ring(6)).has_value());
    CHECK(product(z2, z2).algebra->size() == 4);
    CHECK_FALSE(find_isomorphism(product(z2, z2).algebra, fixtures::ring(4)).has_value());

    auto one = fixtures::ring(1);
    auto a1 = product(z3, one);
    CHECK(a1.p1.is_homomorphism());
    CHECK(a1.p1.is_surjective());
    CHECK(kernel(a1.p1) == Congruence::identity(a1.algebra));
  }

  TEST_CASE("generated subalgebra") {
    auto z4 = fixtures::ring(4);
    CHECK(generated_subalgebra(*z4, {}) == std::vector<Element>{0, 1, 2, 3});
    const Element all[] = {0, 1, 2, 3};
    CHECK(generated_subalgebra(*z4, all).size() == 4);

    auto zz = product(fixtures::ring(2), fixtures::ring(2)).algebra;
    const Element seed[] = {pair_index(0, 0, 2)};
    CHECK(generated_subalgebra(*zz, seed) == std::vector<Element>{pair_index(0, 0, 2), pair_index(1, 1, 2)});
  }

  TEST_CASE("congruence closure examples") {
    auto z4 = fixtures::ring(4);
    const std::pair<Element, Element> p02[] = {{0, 2}};
    auto c = congruence_closure(z4, p02);
    CHECK(format_partition(c) == "{{0,2},{1,3}}");
    CHECK(partition(c) == oracle::classes_of(oracle::naive_congruence(*z4, {{0, 2}})));

    CHECK(congruence_closure(z4, {}) == Congruence::identity(z4));

    auto z6 = fixtures::ring(6);
    const std::pair<Element, Element> p03[] = {{0, 3}};
    auto c6 = congruence_closure(z6, p03);
    CHECK(format_partition(c6) == "{{0,3},{1,4},{2,5}}");
    CHECK(c6.num_classes() == 3);
    CHECK(c6.is_compatible());
  }

  TEST_CASE("congruence closure agrees with the naive oracle on random algebras") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 1 + rng() % 5;
      auto a = oracle::random_algebra(rng, n);
      std::vector<std::pair<Element, Element>> seed;
      const std::size_t k = rng() % 4;
      for (std::size_t i = 0; i < k; ++i) seed.emplace_back(rng() % n, rng() % n);
      auto c = congruence_closure(a, seed);
      CHECK(partition(c) == oracle::classes_of(oracle::naive_congruence(*a, seed)));
      CHECK(c.is_compatible());
    }
  }

  TEST_CASE("quotient") {
    auto z4 = fixtures::ring(4);
    const std::pair<Element, Element> p02[] = {{0, 2}};
    auto q = quotient(congruence_closure(z4, p02));
    CHECK(q.algebra->size() == 2);
    CHECK(q.projection.is_homomorphism());
    CHECK(oracle::isomorphic(*q.algebra, *fixtures::ring(2)));
    CHECK(oracle::isomorphic(*quotient(Congruence::identity(z4)).algebra, *z4));
    CHECK(quotient(Congruence::total(z4)).algebra->size() == 1);
    // {0,1} vs the rest is not compatible with +.
    CHECK_THROWS_AS(quotient(Congruence(z4, {0, 0, 1, 1})), Error);
  }

  TEST_CASE("kernel") {
    auto z2 = fixtures::ring(2);
    auto p = product(z2, z2);
    CHECK(format_partition(kernel(p.p1)) == "{{(0,0),(0,1)},{(1,0),(1,1)}}");
    CHECK(kernel(identity_hom(z2)) == Congruence::identity(z2));

    auto z4 = fixtures::ring(4);
    Homomorphism mod2{z4, z2, {0, 1, 0, 1}};
    REQUIRE(mod2.is_homomorphism());
    CHECK(format_partition(kernel(mod2)) == "{{0,2},{1,3}}");
  }

  TEST_CASE("congruence enumeration") {
    // Z_4 has congruences 0, (2), total; Z_6 has four.
    CHECK(enumerate_congruences(fixtures::ring(4)).size() == 3);
    CHECK(enumerate_congruences(fixtures::ring(6)).size() == 4);
    CHECK(enumerate_congruences(fixtures::ring(1)).size() == 1);
    // Every partition of a 3-element set is a congruence of the pure set.
    Signature none;
    auto set3 = std::make_shared<const FiniteAlgebra>("set3", none, 3, std::vector<std::vector<Element>>{});
    CHECK(enumerate_congruences(set3).size() == 5);
    for (const auto& c : enumerate_congruences(product(fixtures::ring(2), fixtures::ring(3)).algebra)) {
      CHECK(c.is_compatible());
    }
  }

  TEST_CASE("algebra file round trip") {
    auto z3 = load_algebra(fixtures::corpus("rings/z3.alg"));
    CHECK(z3->size() == 3);
    CHECK(z3->signature() == fixtures::ring_signature());
    auto again = parse_algebra(format_algebra(*z3));
    CHECK(again.signature() == z3->signature());
    for (std::size_t op = 0; op < z3->signature().size(); ++op) CHECK(again.table(op) == z3->table(op));
  }

  TEST_CASE("algebra file errors") {
    CHECK_THROWS_AS(parse_algebra("carrier 2\nop f/1\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_algebra("algebra a\ncarrier 2\nop f/2\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_algebra("algebra a\ncarrier 2\nop f/1\n0 5\n"), ParseError);
    CHECK_THROWS_AS(load_algebra(fixtures::corpus("missing.alg")), ParseError);
    auto named = parse_algebra("algebra a\ncarrier 2\nnames lo hi\nop f/1\nhi lo\nop c/0 = hi\n");
    CHECK(named.table(0) == std::vector<Element>{1, 0});
    CHECK(named.constant(1) == 1);
  }
}
