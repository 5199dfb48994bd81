#pragma once

#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ualg/finite_algebra.hpp"
#include "ualg/variety.hpp"

namespace ualg {

/// The free algebra of a finitely generated variety on a finite set of
/// generators, realized as the subalgebra of the product of the function
/// algebras A^(A^n) generated by the projections.
class FreeAlgebra {
 public:
  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<TermPtr>& generator_terms() const { return generator_terms_; }
  /// Element of each generator, in generator order.
  const std::vector<Element>& generators() const { return generators_; }
  /// Witnessing term recorded when the element was first produced.
  const TermPtr& term_for(Element e) const { return witnesses_.at(e); }
  const Fingerprint& coordinates(Element e) const { return coords_.at(e); }
  /// Element denoted by a term over the generators; nullopt if the term
  /// mentions other generators.
  std::optional<Element> element_of(const Term& t) const;
  const FreeEvaluator& evaluator() const { return evaluator_; }

 private:
  friend FreeAlgebra free_algebra(const Variety&, std::vector<TermPtr>, const Budget&);
  explicit FreeAlgebra(FreeEvaluator evaluator) : evaluator_(std::move(evaluator)) {}

  FreeEvaluator evaluator_;
  AlgebraPtr algebra_;
  std::vector<TermPtr> generator_terms_;
  std::vector<Element> generators_;
  std::vector<TermPtr> witnesses_;
  std::vector<Fingerprint> coords_;
  std::unordered_map<Fingerprint, Element, FingerprintHash> lookup_;
};

/// Free algebra on the given generator leaves (variables or paired
/// constants). Throws BudgetExceeded past the budget and Error when the
/// result would be empty (no generators and no constants).
FreeAlgebra free_algebra(const Variety& variety, std::vector<TermPtr> generators, const Budget& budget = {});

/// Free algebra on n variables, named x, y for n <= 2 and x1..xn otherwise.
FreeAlgebra free_algebra(const Variety& variety, std::size_t n, const Budget& budget = {});

std::vector<TermPtr> default_variables(std::size_t n);

namespace detail {

struct Closure {
  std::vector<Fingerprint> elements;
  std::vector<TermPtr> witnesses;
};

/// Closes `seeds` under every operation, semi-naively, recording one term
/// per new element. `apply` computes an operation on fingerprints.
Closure close_under_operations(const Signature& sig, std::vector<Fingerprint> seeds,
                               std::vector<TermPtr> seed_terms,
                               const std::function<Fingerprint(std::size_t, std::span<const Fingerprint* const>)>& apply,
                               std::size_t points, const Budget& budget);

}  // namespace detail

}  // namespace ualg
