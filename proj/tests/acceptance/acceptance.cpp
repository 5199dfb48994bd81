// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "ualg/algebra_io.hpp"
#include "ualg/decompose.hpp"
#include "ualg/free_algebra.hpp"
#include "ualg/witness.hpp"

using namespace ualg;

namespace {

// Collects the first failure; later checks are skipped once one fails.
struct Outcome {
  bool ok = true;
  std::string why;

  void require(bool cond, const std::string& what) {
    if (ok && !cond) {
      ok = false;
      why = what;
    }
  }
};

int quiet_run(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::string c(const std::string& rel) { return fixtures::corpus(rel).string(); }

Outcome replay() {
  Outcome o;
  std::string text;
  o.require(quiet_run({"check-diag", c("rings/z6.alg"), c("rings/pack.diag")}, &text) == cli::kPass,
            "check-diag on Z6: " + text);
  o.require(quiet_run({"verify-cert", c("rings/z6.alg"), c("rings/crings.cert")}, &text) == cli::kPass,
            "verify-cert on Z6: " + text);
  return o;
}

Outcome exhaustive_decompose() {
  Outcome o;
  std::vector<AlgebraPtr> rings{load_algebra(c("rings/z2.alg")), load_algebra(c("rings/z3.alg"))};
  std::size_t count = 0;
  for (const auto& x : rings)
    for (const auto& y : rings) {
      auto prod = product(x, y);
      for (const auto& theta : enumerate_congruences(prod.algebra)) {
        auto quo = quotient(theta);
        const auto& q = quo.projection;
        auto r = decompose(x, y, q);
        const auto label = x->name() + " x " + y->name() + " / " + format_partition(theta);
        o.require(r.ok(), "no decomposition for " + label);
        if (!r.ok()) return o;
        const auto& d = *r.decomposition;
        // Independent recomputation of the kernel of q_X x q_Y.
        auto ex = oracle::naive_factor_x(x->size(), y->size(), q.map);
        auto ey = oracle::naive_factor_y(x->size(), y->size(), q.map);
        for (Element a = 0; a < x->size(); ++a)
          for (Element b = 0; b < x->size(); ++b) o.require(ex[a][b] == d.e_x.related(a, b), "E_X differs for " + label);
        for (Element a = 0; a < y->size(); ++a)
          for (Element b = 0; b < y->size(); ++b) o.require(ey[a][b] == d.e_y.related(a, b), "E_Y differs for " + label);
        const auto n = prod.algebra->size();
        for (Element u = 0; u < n; ++u)
          for (Element v = 0; v < n; ++v) {
            const bool by_factors = ex[u / y->size()][v / y->size()] && ey[u % y->size()][v % y->size()];
            o.require((q(u) == q(v)) == by_factors, "kernels differ for " + label);
          }
        o.require(d.iso.is_homomorphism() && d.iso.is_surjective(), "iso is not onto for " + label);
        ++count;
      }
    }
  o.require(count == 16, "expected 16 congruences, saw " + std::to_string(count));
  return o;
}

Outcome negative_control() {
  Outcome o;
  auto g2 = load_algebra(c("groups/z2.alg"));
  DiagSearchOptions opts;
  opts.max_depth = 3;
  opts.max_k = 2;
  auto s = search_diag(Variety({g2}), opts);
  o.require(s.status == DiagSearchStatus::kNotFound, "search_diag found a pack for groups");
  auto hom = parse_hom(read_file(c("groups/sum.hom")));
  auto prod = product(g2, g2);
  auto r = decompose(g2, g2, Homomorphism{prod.algebra, g2, hom.map});
  o.require(!r.ok() && r.counterexample.has_value(), "decompose accepted a + b");
  if (r.counterexample) {
    // Check the pair really separates the two kernels.
    const auto& ce = *r.counterexample;
    const bool by_q = hom.map[pair_index(ce.a, ce.b, 2)] == hom.map[pair_index(ce.c, ce.d, 2)];
    o.require(by_q == ce.merged_by_q && by_q == false, "counterexample does not separate the kernels");
  }
  return o;
}

Outcome closure_oracle(std::size_t& instances) {
  Outcome o;
  std::mt19937 rng(20261016);
  for (instances = 0; instances < 250; ++instances) {
    std::uniform_int_distribution<std::size_t> size_dist(1, 5);
    auto a = oracle::random_algebra(rng, size_dist(rng));
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(a->size() - 1));
    std::uniform_int_distribution<int> count(0, 3);
    std::vector<std::pair<Element, Element>> seed;
    for (int i = count(rng); i > 0; --i) seed.emplace_back(pick(rng), pick(rng));
    auto fast = congruence_closure(a, seed);
    auto slow = oracle::naive_congruence(*a, seed);
    for (Element x = 0; x < a->size(); ++x)
      for (Element y = 0; y < a->size(); ++y) o.require(fast.related(x, y) == slow[x][y], "closure differs from oracle");
    if (!o.ok) break;
  }
  return o;
}

Outcome free_sizes() {
  Outcome o;
  auto z2 = load_algebra(c("rings/z2.alg"));
  Variety v({z2});
  const std::size_t expected[] = {2, 4, 16};
  for (std::size_t n = 0; n <= 2; ++n) {
    auto f = free_algebra(v, n);
    const auto& fa = f.algebra();
    o.require(fa->size() == expected[n], "F(" + std::to_string(n) + ") has " + std::to_string(fa->size()));
    // Every map of the generators into Z2 extends to a homomorphism.
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      std::map<std::string, Element> assignment;
      for (std::size_t i = 0; i < n; ++i)
        assignment[f.generator_terms()[i]->name()] = static_cast<Element>((bits >> i) & 1);
      std::vector<Element> map(fa->size());
      for (Element e = 0; e < fa->size(); ++e) map[e] = evaluate(*z2, *f.term_for(e), assignment);
      Homomorphism h{fa, z2, map};
      o.require(h.is_homomorphism(), "extension is not a homomorphism");
      for (std::size_t i = 0; i < n; ++i)
        o.require(h(f.generators()[i]) == assignment[f.generator_terms()[i]->name()], "extension moves a generator");
    }
    o.require(generated_subalgebra(*fa, f.generators()).size() == fa->size(), "F is not generated by its generators");
  }
  return o;
}

Outcome search_round_trip() {
  Outcome o;
  auto path = std::filesystem::temp_directory_path() / "ualg_acceptance_z2.cert";
  std::string text;
  o.require(quiet_run({"search-cert", c("rings/z2.alg"), c("rings/pack.diag"), "--depth", "6", "--out",
                       path.string()},
                      &text) == cli::kPass,
            "search-cert: " + text);
  if (!o.ok) return o;
  o.require(quiet_run({"verify-cert", c("rings/z2.alg"), path.string()}, &text) == cli::kPass, "verify-cert: " + text);

  auto z2 = load_algebra(c("rings/z2.alg"));
  Variety v({z2});
  auto cert = parse_certificate(read_file(path), z2->signature());
  std::filesystem::remove(path);
  std::vector<std::pair<const Chain*, std::pair<TermPtr, TermPtr>>> chains{
      {&cert.idempotence, idempotence_obligation(cert.pack)}};
  for (const auto& h : cert.hom) chains.push_back({&h.steps, hom_obligation(cert.pack, z2->signature().op(*z2->signature().find(h.op)))});
  for (const auto& [chain, ends] : chains) {
    auto left = ends.first;
    for (std::size_t i = 0; i < chain->size(); ++i) {
      const auto& step = (*chain)[i];
      std::map<std::string, TermPtr> env;
      for (std::size_t j = 0; j < step.slots(); ++j) env[slot_name(j)] = step.alpha[j];
      auto right = i + 1 == chain->size() ? ends.second : substitute_vars(step.u, env);
      auto verdict = verify_step(step, left, right, v, cert.pack);
      o.require(verdict.ok, "step " + std::to_string(i) + ": " + verdict.reason);
      left = right;
    }
    if (chain->empty()) o.require(v.equal(ends.first, ends.second), "empty chain between distinct terms");
  }
  return o;
}

// F(x, (1|0), (0|1)) over Z2 modulo the R-instances. The generators
// (0|0) and (1|1) are left out: each occurs only in the instance equating
// it with delta(0,0) or delta(1,1), which are terms in the other two pairs,
// so dropping them yields an isomorphic quotient with 2^8 elements instead
// of 2^32.
Outcome quotient_cross_check(std::size_t& q_size) {
  Outcome o;
  auto z2 = load_algebra(c("rings/z2.alg"));
  const auto& sig = z2->signature();
  Variety v({z2});
  auto pack = parse_pack(read_file(c("rings/pack.diag")), sig);
  auto p = Term::pair(Term::op("one"), Term::op("zero"));
  auto q = Term::pair(Term::op("zero"), Term::op("one"));
  auto x = Term::var("x");
  auto f = free_algebra(v, {x, p, q});
  o.require(f.algebra()->size() == 256, "free algebra has " + std::to_string(f.algebra()->size()) + " elements");

  std::vector<TermPtr> pool;
  for (const auto& g : v.ground_pool()) pool.push_back(g.witness);
  std::vector<std::pair<Element, Element>> seeds;
  std::size_t skipped = 0;
  for (const auto& inst : rewrite_relation(pack, sig, pool)) {
    auto a = f.element_of(*inst.alpha);
    auto b = f.element_of(*inst.beta);
    if (a && b) {
      seeds.emplace_back(*a, *b);
    } else {
      ++skipped;
    }
  }
  // Exactly the (0|0) and (1|1) instances, both orientations.
  o.require(skipped == 4, "unexpected instances outside the generators: " + std::to_string(skipped));
  auto theta = congruence_closure(f.algebra(), seeds);
  auto quo = quotient(theta);
  const auto& Q = *quo.algebra;
  q_size = Q.size();
  auto cls = [&](const TermPtr& t) { return quo.projection(*f.element_of(*t)); };

  o.require(cls(delta_expand(x, x, pack)) == cls(x), "[delta(x,x)] != [x]");
  const Element pq = cls(p), qq = cls(q);
  auto delta_q = [&](Element a, Element b) {
    return evaluate(Q, *pack.t, {{"x", a}, {"y", b}, {"c1", pq}, {"c2", qq}});
  };
  for (Element a = 0; a < Q.size(); ++a) o.require(delta_q(a, a) == a, "delta_Q is not idempotent");
  for (const char* name : {"add", "mul"}) {
    const auto op = *sig.find(name);
    for (Element a1 = 0; a1 < Q.size(); ++a1)
      for (Element a2 = 0; a2 < Q.size(); ++a2)
        for (Element b1 = 0; b1 < Q.size(); ++b1)
          for (Element b2 = 0; b2 < Q.size(); ++b2) {
            const Element lhs = delta_q(Q.apply(op, std::vector<Element>{a1, a2}), Q.apply(op, std::vector<Element>{b1, b2}));
            const Element rhs = Q.apply(op, std::vector<Element>{delta_q(a1, b1), delta_q(a2, b2)});
            o.require(lhs == rhs, std::string("delta_Q does not preserve ") + name);
          }
  }
  for (const char* name : {"zero", "one"}) {
    const auto op = *sig.find(name);
    o.require(delta_q(Q.constant(op), Q.constant(op)) == Q.constant(op), std::string("delta_Q moves ") + name);
  }
  return o;
}

bool report(int n, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.why = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.ok && limit_s > 0 && secs >= limit_s) {
    o.ok = false;
    o.why = "over the time limit";
  }
  std::ostringstream line;
  line.precision(2);
  line << std::fixed << (o.ok ? "PASS" : "FAIL") << " " << n << " " << title << " (" << secs << " s";
  if (limit_s > 0) line << ", limit " << limit_s << " s";
  line << ")";
  if (!o.ok) line << ": " << o.why;
  std::cout << line.str() << std::endl;
  return o.ok;
}

}  // namespace

int main() {
  bool all = true;
  std::size_t instances = 0, q_size = 0;
  all &= report(1, "ring pack and certificate replay on Z6", 5, replay);
  all &= report(2, "every congruence of X x Y decomposes, X, Y in {Z2, Z3}", 30, exhaustive_decompose);
  all &= report(3, "groups: no pack at depth 3, k 2; a + b has a kernel counterexample", 10, negative_control);
  all &= report(4, "congruence closure agrees with the naive oracle", 0, [&] { return closure_oracle(instances); });
  std::cout << "  random instances: " << instances << "\n";
  all &= report(5, "Boolean ring free algebras have 2, 4, 16 elements and extend maps", 0, free_sizes);
  all &= report(6, "search-cert output passes verify-cert and verify_step", 0, search_round_trip);
  all &= report(7, "quotient by the R-instances makes delta idempotent and a homomorphism", 60,
                [&] { return quotient_cross_check(q_size); });
  std::cout << "  quotient size: " << q_size << "\n";
  return all ? 0 : 1;
}
