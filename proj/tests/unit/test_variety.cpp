#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ualg/error.hpp"
#include "ualg/free_algebra.hpp"
#include "ualg/parse.hpp"

using namespace ualg;

namespace {

// Every map of the generators into A extends to a homomorphism F -> A.
// The extension is forced because F is generated by its generators.
void check_universal_property(const FreeAlgebra& f, const AlgebraPtr& target) {
  const auto& fa = f.algebra();
  const auto gens = f.generators();
  CHECK(generated_subalgebra(*fa, gens).size() == fa->size());
  std::vector<Element> image(gens.size(), 0);
  while (true) {
    std::map<std::string, Element> assignment;
    for (std::size_t i = 0; i < gens.size(); ++i) assignment[f.generator_terms()[i]->name()] = image[i];
    std::vector<Element> map(fa->size());
    for (Element e = 0; e < fa->size(); ++e) map[e] = evaluate(*target, *f.term_for(e), assignment);
    Homomorphism h{fa, target, map};
    CHECK(h.is_homomorphism());
    for (std::size_t i = 0; i < gens.size(); ++i) CHECK(h(gens[i]) == image[i]);
    std::size_t pos = image.size();
    while (pos > 0 && ++image[pos - 1] == target->size()) image[--pos] = 0;
    if (pos == 0) break;
  }
}

}  // namespace

TEST_SUITE("variety") {
  TEST_CASE("identities of the variety") {
    auto v = fixtures::variety_of({fixtures::ring(2)});
    const auto& sig = v.signature();
    CHECK(v.equal(parse_term("mul(x,x)", sig), parse_term("x", sig)));
    CHECK(v.equal(parse_term("add(x,x)", sig), parse_term("zero", sig)));
    CHECK_FALSE(v.equal(parse_term("add(x,y)", sig), parse_term("x", sig)));
    auto f = v.counterexample(parse_term("add(x,y)", sig), parse_term("x", sig));
    REQUIRE(f);
    CHECK(f->algebra == "z2");
    CHECK(f->assignment.size() == 2);

    auto v3 = fixtures::variety_of({fixtures::ring(3)});
    CHECK_FALSE(v3.equal(parse_term("mul(x,x)", sig), parse_term("x", sig)));
  }

  TEST_CASE("several generators") {
    auto v = fixtures::variety_of({fixtures::ring(2), fixtures::ring(3)});
    const auto& sig = v.signature();
    CHECK_FALSE(v.equal(parse_term("mul(x,x)", sig), parse_term("x", sig)));
    CHECK(v.equal(parse_term("mul(x,add(y,one))", sig), parse_term("add(mul(x,y),x)", sig)));
    CHECK(v.ground_pool().size() == 6);
    CHECK_THROWS_AS(Variety({fixtures::ring(2), fixtures::group(2)}), SignatureMismatch);
  }

  TEST_CASE("paired constants are free generators keyed by value") {
    auto v = fixtures::variety_of({fixtures::ring(2)});
    const auto& sig = v.signature();
    auto p = parse_term("(one|zero)", sig);
    auto q = parse_term("(zero|one)", sig);
    auto p2 = parse_term("(add(zero,one)|zero)", sig);
    CHECK_FALSE(v.equal(p, q));
    CHECK(v.equal(p, p2));
    CHECK_FALSE(v.equal(p, parse_term("one", sig)));
    CHECK(v.equal(parse_term("mul((one|zero),(one|zero))", sig), p));
  }

  TEST_CASE("free algebra sizes over the Boolean ring") {
    auto v = fixtures::variety_of({fixtures::ring(2)});
    for (std::size_t n = 0; n <= 2; ++n) {
      auto f = free_algebra(v, n);
      CHECK(f.algebra()->size() == oracle::boolean_ring_free_size(n));
    }
    CHECK(free_algebra(v, 0).algebra()->size() == 2);
    CHECK(free_algebra(v, 1).algebra()->size() == 4);
    CHECK(free_algebra(v, 2).algebra()->size() == 16);
  }

  TEST_CASE("free algebra universal property") {
    auto z2 = fixtures::ring(2);
    auto v = fixtures::variety_of({z2});
    for (std::size_t n = 0; n <= 2; ++n) check_universal_property(free_algebra(v, n), z2);

    auto chain = fixtures::chain_lattice(3);
    auto lv = fixtures::variety_of({chain});
    for (std::size_t n = 0; n <= 2; ++n) check_universal_property(free_algebra(lv, n), chain);
  }

  TEST_CASE("free algebra witnesses denote their elements") {
    auto v = fixtures::variety_of({fixtures::ring(3)});
    auto f = free_algebra(v, 1);
    // Functions Z_3 -> Z_3 given by polynomials: all 27.
    CHECK(f.algebra()->size() == 27);
    for (Element e = 0; e < f.algebra()->size(); ++e) CHECK(f.element_of(*f.term_for(e)) == e);
    CHECK_FALSE(f.element_of(*Term::var("z")).has_value());
  }

  TEST_CASE("free algebra budget and empty cases") {
    auto v = fixtures::variety_of({fixtures::ring(3)});
    Budget tight;
    tight.max_elements = 100;
    CHECK_THROWS_AS(free_algebra(v, 2, tight), BudgetExceeded);

    Signature sig;
    sig.add("meet", 2);
    auto sl = std::make_shared<const FiniteAlgebra>("sl2", sig, 2, std::vector<std::vector<Element>>{{0, 0, 0, 1}});
    auto sv = fixtures::variety_of({sl});
    CHECK(sv.ground_pool().empty());
    CHECK_THROWS_AS(free_algebra(sv, 0), Error);
    CHECK(free_algebra(sv, 2).algebra()->size() == 3);
  }

  TEST_CASE("default variable names") {
    CHECK(default_variables(2)[1]->name() == "y");
    CHECK(default_variables(3)[2]->name() == "x3");
  }
}
