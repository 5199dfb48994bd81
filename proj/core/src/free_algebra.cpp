#include "ualg/free_algebra.hpp"

#include <algorithm>

#include "ualg/error.hpp"

namespace ualg {

namespace detail {

Closure close_under_operations(const Signature& sig, std::vector<Fingerprint> seeds, std::vector<TermPtr> seed_terms,
                               const std::function<Fingerprint(std::size_t, std::span<const Fingerprint* const>)>& apply,
                               std::size_t points, const Budget& budget) {
  Closure c;
  std::unordered_map<Fingerprint, std::size_t, FingerprintHash> index;
  std::size_t scanned = 0;
  auto add = [&](Fingerprint f, const std::function<TermPtr()>& make_term) {
    if (index.contains(f)) return;
    if (c.elements.size() >= budget.max_elements) {
      throw BudgetExceeded("closure exceeds " + std::to_string(budget.max_elements) + " elements");
    }
    index.emplace(f, c.elements.size());
    c.elements.push_back(std::move(f));
    c.witnesses.push_back(make_term());
  };
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    add(std::move(seeds[i]), [&] { return seed_terms[i]; });
  }
  for (std::size_t op = 0; op < sig.size(); ++op) {
    if (sig.op(op).arity != 0) continue;
    add(apply(op, {}), [&] { return Term::op(sig.op(op).name); });
  }
  // Semi-naive rounds: a tuple is applied once, in the round after its
  // newest component appeared.
  std::size_t old_count = 0;
  std::vector<const Fingerprint*> args;
  while (old_count < c.elements.size()) {
    const auto frontier = c.elements.size();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      const auto arity = sig.op(op).arity;
      if (arity == 0) continue;
      for_each_tuple(frontier, arity, [&](std::span<const Element> idx) {
        if (std::none_of(idx.begin(), idx.end(), [&](Element i) { return i >= old_count; })) return;
        scanned += points;
        if (scanned > budget.max_scan) throw BudgetExceeded("closure exceeds the scan budget");
        args.assign(arity, nullptr);
        for (std::size_t i = 0; i < arity; ++i) args[i] = &c.elements[idx[i]];
        add(apply(op, args), [&] {
          std::vector<TermPtr> children;
          for (auto i : idx) children.push_back(c.witnesses[i]);
          return Term::op(sig.op(op).name, std::move(children));
        });
      });
    }
    old_count = frontier;
  }
  return c;
}

}  // namespace detail

std::vector<TermPtr> default_variables(std::size_t n) {
  std::vector<TermPtr> out;
  if (n <= 2) {
    const char* names[] = {"x", "y"};
    for (std::size_t i = 0; i < n; ++i) out.push_back(Term::var(names[i]));
    return out;
  }
  for (std::size_t i = 1; i <= n; ++i) out.push_back(Term::var("x" + std::to_string(i)));
  return out;
}

std::optional<Element> FreeAlgebra::element_of(const Term& t) const {
  for (const auto& leaf : generators_of(std::make_shared<const Term>(t))) {
    if (!evaluator_.generator_index(*leaf)) return std::nullopt;
  }
  auto it = lookup_.find(evaluator_(t));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

FreeAlgebra free_algebra(const Variety& variety, std::vector<TermPtr> generators, const Budget& budget) {
  FreeAlgebra fa(FreeEvaluator(variety, generators, budget));
  const auto& ev = fa.evaluator_;
  const auto& sig = variety.signature();
  std::vector<Fingerprint> seeds;
  for (std::size_t i = 0; i < generators.size(); ++i) seeds.push_back(ev.generator_column(i));
  auto apply = [&ev](std::size_t op, std::span<const Fingerprint* const> args) { return ev.apply(op, args); };
  auto closure = detail::close_under_operations(sig, seeds, generators, apply, ev.points(), budget);
  const auto n = closure.elements.size();
  if (n == 0) throw Error("free algebra on no generators is empty: the signature has no constants");

  for (std::size_t i = 0; i < n; ++i) fa.lookup_.emplace(closure.elements[i], static_cast<Element>(i));
  for (std::size_t i = 0; i < generators.size(); ++i) fa.generators_.push_back(fa.lookup_.at(seeds[i]));

  std::size_t scanned = 0;
  std::vector<std::vector<Element>> tables(sig.size());
  std::vector<const Fingerprint*> args;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto arity = sig.op(op).arity;
    const auto entries = table_size(n, arity, budget.max_scan);
    scanned += entries * ev.points();
    if (scanned > budget.max_scan) throw BudgetExceeded("free algebra tables exceed the scan budget");
    tables[op].reserve(entries);
    for_each_tuple(n, arity, [&](std::span<const Element> idx) {
      args.assign(arity, nullptr);
      for (std::size_t i = 0; i < arity; ++i) args[i] = &closure.elements[idx[i]];
      tables[op].push_back(fa.lookup_.at(ev.apply(op, args)));
    });
  }
  std::vector<std::string> names;
  for (const auto& w : closure.witnesses) names.push_back(w->to_string());
  fa.algebra_ = std::make_shared<const FiniteAlgebra>("F(" + std::to_string(generators.size()) + ")", sig, n,
                                                      std::move(tables), std::move(names));
  fa.generator_terms_ = std::move(generators);
  fa.witnesses_ = std::move(closure.witnesses);
  fa.coords_ = std::move(closure.elements);
  return fa;
}

FreeAlgebra free_algebra(const Variety& variety, std::size_t n, const Budget& budget) {
  return free_algebra(variety, default_variables(n), budget);
}

}  // namespace ualg
