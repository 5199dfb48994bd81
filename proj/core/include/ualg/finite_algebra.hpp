#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ualg/term.hpp"

namespace ualg {

/// Carrier elements are dense indices 0..n-1.
using Element = std::uint32_t;

/// A finite algebra given by total operation tables.
///
/// Tables are stored row-major: the entry for f(a_1,...,a_m) lives at
/// index a_1*n^(m-1) + ... + a_m, so the last argument varies fastest.
class FiniteAlgebra {
 public:
  FiniteAlgebra(std::string name, Signature sig, std::size_t size, std::vector<std::vector<Element>> tables,
                std::vector<std::string> element_names = {});

  const std::string& name() const { return name_; }
  const Signature& signature() const { return sig_; }
  std::size_t size() const { return size_; }
  const std::vector<Element>& table(std::size_t op) const { return tables_.at(op); }

  Element apply(std::size_t op, std::span<const Element> args) const {
    std::size_t index = 0;
    for (auto a : args) index = index * size_ + a;
    return tables_[op][index];
  }
  Element constant(std::size_t op) const { return tables_[op][0]; }

  std::string element_name(Element e) const;
  const std::vector<std::string>& element_names() const { return names_; }

 private:
  std::string name_;
  Signature sig_;
  std::size_t size_;
  std::vector<std::vector<Element>> tables_;
  std::vector<std::string> names_;
};

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

/// Number of table entries n^arity; throws BudgetExceeded past `cap`.
std::size_t table_size(std::size_t n, std::size_t arity, std::size_t cap = SIZE_MAX);

/// Calls `visit(args)` for every tuple in carrier^arity, in table order.
template <typename F>
void for_each_tuple(std::size_t n, std::size_t arity, F&& visit) {
  std::vector<Element> args(arity, 0);
  if (arity == 0) {
    visit(std::span<const Element>(args));
    return;
  }
  if (n == 0) return;
  while (true) {
    visit(std::span<const Element>(args));
    std::size_t pos = arity;
    while (pos > 0) {
      --pos;
      if (++args[pos] < n) break;
      args[pos] = 0;
      if (pos == 0) return;
    }
  }
}

struct Homomorphism {
  AlgebraPtr domain;
  AlgebraPtr codomain;
  std::vector<Element> map;

  Element operator()(Element a) const { return map.at(a); }
  /// Exhaustive check of h(f(a...)) = f(h(a)...) for every op and tuple.
  bool is_homomorphism() const;
  bool is_surjective() const;
};

Homomorphism identity_hom(const AlgebraPtr& a);

/// A congruence stored as a canonical-representative map; the
/// representative of a class is its least element.
class Congruence {
 public:
  /// `labels[a]` is any class label; equal labels mean related elements.
  Congruence(AlgebraPtr algebra, const std::vector<Element>& labels);

  static Congruence identity(AlgebraPtr algebra);
  static Congruence total(AlgebraPtr algebra);

  const FiniteAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const std::vector<Element>& representatives() const { return rep_; }
  Element representative(Element a) const { return rep_.at(a); }
  bool related(Element a, Element b) const { return rep_.at(a) == rep_.at(b); }
  std::size_t num_classes() const;
  /// Classes sorted by least element, each sorted ascending.
  std::vector<std::vector<Element>> classes() const;
  /// Exhaustive operation-compatibility check.
  bool is_compatible() const;

  friend bool operator==(const Congruence& a, const Congruence& b) { return a.rep_ == b.rep_; }

 private:
  AlgebraPtr algebra_;
  std::vector<Element> rep_;
};

/// Renders a partition as `{{0,2},{1,3}}`.
std::string format_partition(const Congruence& c);

/// Evaluates a term without paired constants under a variable assignment.
/// Throws Error on unbound variables, pair leaves or unknown symbols.
Element evaluate(const FiniteAlgebra& a, const Term& t, const std::map<std::string, Element>& assignment);

struct ProductResult {
  AlgebraPtr algebra;
  Homomorphism p1;
  Homomorphism p2;
};

/// Element (a,b) of A x B is encoded as a*|B| + b.
ProductResult product(const AlgebraPtr& a, const AlgebraPtr& b);

inline Element pair_index(Element a, Element b, std::size_t size_b) {
  return static_cast<Element>(a * size_b + b);
}

/// Least subset containing `seed` and the constants, closed under all
/// operations. Returned sorted.
std::vector<Element> generated_subalgebra(const FiniteAlgebra& a, std::span<const Element> seed);

/// Least congruence containing `pairs` (union-find plus signature-table
/// propagation to a fixpoint).
Congruence congruence_closure(const AlgebraPtr& a, std::span<const std::pair<Element, Element>> pairs);

struct QuotientResult {
  AlgebraPtr algebra;
  Homomorphism projection;
};

/// A/theta on the set of class representatives, numbered by least element.
/// Throws Error if theta is not operation-compatible.
QuotientResult quotient(const Congruence& theta);

Congruence kernel(const Homomorphism& h);

/// Every congruence of `a`, by filtering all set partitions of the carrier.
/// Throws BudgetExceeded when the carrier is larger than `max_carrier`.
std::vector<Congruence> enumerate_congruences(const AlgebraPtr& a, std::size_t max_carrier = 10);

/// Brute-force search for an isomorphism a -> b (test-scale only).
std::optional<Homomorphism> find_isomorphism(const AlgebraPtr& a, const AlgebraPtr& b);

}  // namespace ualg
