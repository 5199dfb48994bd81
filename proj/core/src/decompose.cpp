#include "ualg/decompose.hpp"

#include <algorithm>
#include <sstream>

namespace ualg {

std::size_t Relation::count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

namespace {

void require_product_domain(const AlgebraPtr& x, const AlgebraPtr& y, const Homomorphism& q) {
  if (!q.domain || !q.codomain) throw Error("q needs a domain and a codomain");
  const auto expected = product(x, y).algebra;
  const auto& dom = *q.domain;
  bool same = dom.size() == expected->size() && dom.signature() == expected->signature();
  for (std::size_t op = 0; same && op < dom.signature().size(); ++op) same = dom.table(op) == expected->table(op);
  if (!same) throw Error("domain of q is not the product " + x->name() + " x " + y->name());
  if (q.map.size() != dom.size()) throw Error("map of q has the wrong length");
  if (!q.is_homomorphism()) throw Error("q is not a homomorphism");
  if (!q.is_surjective()) throw Error("q is not surjective");
}

std::string join(std::span<const Element> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

}  // namespace

FactorRelations compute_factor_congruences(const AlgebraPtr& x, const AlgebraPtr& y, const Homomorphism& q) {
  require_product_domain(x, y, q);
  const auto nx = x->size();
  const auto ny = y->size();
  // Group the elements of X and Y by the q-images they reach.
  const auto m = q.codomain->size();
  std::vector<std::vector<bool>> x_hits(m, std::vector<bool>(nx)), y_hits(m, std::vector<bool>(ny));
  for (Element a = 0; a < nx; ++a) {
    for (Element b = 0; b < ny; ++b) {
      const auto z = q.map[pair_index(a, b, ny)];
      x_hits[z][a] = true;
      y_hits[z][b] = true;
    }
  }
  FactorRelations out{Relation(nx), Relation(ny)};
  for (std::size_t z = 0; z < m; ++z) {
    for (Element a = 0; a < nx; ++a) {
      if (!x_hits[z][a]) continue;
      for (Element c = 0; c < nx; ++c) {
        if (x_hits[z][c]) out.on_x.insert(a, c);
      }
    }
    for (Element b = 0; b < ny; ++b) {
      if (!y_hits[z][b]) continue;
      for (Element d = 0; d < ny; ++d) {
        if (y_hits[z][d]) out.on_y.insert(b, d);
      }
    }
  }
  return out;
}

Congruence verify_congruence(const Relation& rel, const AlgebraPtr& a, const DiagPack* pack) {
  const auto n = a->size();
  if (rel.size() != n) throw Error("relation size does not match the algebra");
  const std::string hint =
      pack ? " (the pack t = " + pack->t->to_string() + " should force this; it is invalid or the variety is not "
                                                        "coextensive)"
           : "";
  using Kind = NotACongruence::Kind;
  for (Element p = 0; p < n; ++p) {
    if (!rel.contains(p, p)) {
      throw NotACongruence(Kind::kReflexivity, {p}, "", "relation is not reflexive at " + std::to_string(p));
    }
    for (Element r = 0; r < n; ++r) {
      if (rel.contains(p, r) && !rel.contains(r, p)) {
        throw NotACongruence(Kind::kSymmetry, {p, r}, "",
                             "relation is not symmetric at (" + std::to_string(p) + "," + std::to_string(r) + ")");
      }
    }
  }
  for (Element p = 0; p < n; ++p) {
    for (Element r = 0; r < n; ++r) {
      if (!rel.contains(p, r)) continue;
      for (Element s = 0; s < n; ++s) {
        if (rel.contains(r, s) && !rel.contains(p, s)) {
          throw NotACongruence(Kind::kTransitivity, {p, r, s}, "",
                               "transitivity fails at (" + std::to_string(p) + "," + std::to_string(r) + "," +
                                   std::to_string(s) + ")" + hint);
        }
      }
    }
  }
  std::vector<Element> labels(n);
  for (Element p = 0; p < n; ++p) {
    Element r = 0;
    while (!rel.contains(p, r)) ++r;
    labels[p] = r;
  }
  Congruence theta(a, labels);
  const auto& sig = a->signature();
  std::vector<Element> reps;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto arity = sig.op(op).arity;
    for_each_tuple(n, arity, [&](std::span<const Element> args) {
      reps.assign(args.begin(), args.end());
      for (auto& v : reps) v = theta.representative(v);
      if (theta.related(a->apply(op, args), a->apply(op, reps))) return;
      std::vector<Element> witness(args.begin(), args.end());
      witness.insert(witness.end(), reps.begin(), reps.end());
      throw NotACongruence(Kind::kCompatibility, witness, sig.op(op).name,
                           "'" + sig.op(op).name + "' is not compatible: (" + join(args) + ") vs (" + join(reps) +
                               ")" + hint);
    });
  }
  return theta;
}

std::string KernelCounterexample::describe() const {
  std::ostringstream out;
  out << "((" << a << "," << b << "),(" << c << "," << d << ")) ";
  out << (merged_by_q ? "merged by q but not by q_X x q_Y" : "merged by q_X x q_Y but not by q");
  return out.str();
}

DecomposeResult decompose(const AlgebraPtr& x, const AlgebraPtr& y, const Homomorphism& q, const DiagPack* pack) {
  auto rels = compute_factor_congruences(x, y, q);
  auto e_x = verify_congruence(rels.on_x, x, pack);
  auto e_y = verify_congruence(rels.on_y, y, pack);
  const auto nx = x->size();
  const auto ny = y->size();

  DecomposeResult result;
  std::size_t compared = 0;
  for (Element a = 0; a < nx; ++a) {
    for (Element b = 0; b < ny; ++b) {
      for (Element c = 0; c < nx; ++c) {
        for (Element d = 0; d < ny; ++d) {
          if (pair_index(c, d, ny) <= pair_index(a, b, ny)) continue;
          ++compared;
          const bool by_q = q.map[pair_index(a, b, ny)] == q.map[pair_index(c, d, ny)];
          const bool by_factors = e_x.related(a, c) && e_y.related(b, d);
          if (by_q != by_factors) {
            result.counterexample = KernelCounterexample{a, b, c, d, by_q};
            return result;
          }
        }
      }
    }
  }

  auto qx = quotient(e_x);
  auto qy = quotient(e_y);
  auto target = product(qx.algebra, qy.algebra).algebra;
  std::vector<Element> iso_map(q.codomain->size());
  for (Element a = 0; a < nx; ++a) {
    for (Element b = 0; b < ny; ++b) {
      iso_map[q.map[pair_index(a, b, ny)]] = pair_index(qx.projection(a), qy.projection(b), qy.algebra->size());
    }
  }
  Homomorphism iso{q.codomain, target, std::move(iso_map)};
  if (q.codomain->size() != target->size() || !iso.is_surjective() || !iso.is_homomorphism()) {
    throw Error("kernels agree but the induced map is not an isomorphism");
  }
  result.decomposition = Decomposition{qx.projection, qy.projection, std::move(e_x), std::move(e_y), std::move(iso),
                                       compared};
  return result;
}

HomSpec parse_hom(std::string_view text, const std::string& source) {
  HomSpec spec;
  bool have_map = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(source + ":" + std::to_string(line_no) + ": " + msg); };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::string head;
    if (!(words >> head)) continue;
    if (head == "hom") {
      if (!(words >> spec.name)) fail("expected 'hom <name>'");
    } else if (head == "codomain") {
      std::string path;
      if (!(words >> path)) fail("expected 'codomain <path>'");
      spec.codomain_path = path;
    } else if (head == "map") {
      have_map = true;
      std::string tok;
      while (words >> tok) {
        try {
          std::size_t used = 0;
          auto v = std::stoul(tok, &used);
          if (used != tok.size()) fail("bad image '" + tok + "'");
          spec.map.push_back(static_cast<Element>(v));
        } catch (const std::logic_error&) {
          fail("bad image '" + tok + "'");
        }
      }
    } else {
      fail("unexpected line");
    }
  }
  if (spec.name.empty()) throw ParseError(source + ": missing 'hom <name>'");
  if (!have_map || spec.map.empty()) throw ParseError(source + ": missing 'map'");
  return spec;
}

AlgebraPtr induced_codomain(const AlgebraPtr& domain, const std::vector<Element>& map, const std::string& name) {
  if (map.size() != domain->size() || map.empty()) throw Error("map length does not match the domain");
  const std::size_t m = *std::max_element(map.begin(), map.end()) + 1;
  std::vector<bool> hit(m, false);
  for (auto v : map) hit[v] = true;
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw Error("map image is not {0..m-1}");

  const auto& sig = domain->signature();
  constexpr Element kUnset = ~Element{0};
  std::vector<std::vector<Element>> tables;
  std::vector<Element> image;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto arity = sig.op(op).arity;
    std::vector<Element> table(table_size(m, arity), kUnset);
    for_each_tuple(domain->size(), arity, [&](std::span<const Element> args) {
      std::size_t slot = 0;
      for (auto v : args) slot = slot * m + map[v];
      const auto value = map[domain->apply(op, args)];
      if (table[slot] == kUnset) {
        table[slot] = value;
      } else if (table[slot] != value) {
        throw Error("map is not a homomorphism: '" + sig.op(op).name + "' is not well defined on the image");
      }
    });
    tables.push_back(std::move(table));
  }
  return std::make_shared<const FiniteAlgebra>(name, sig, m, std::move(tables), std::vector<std::string>{});
}

}  // namespace ualg
