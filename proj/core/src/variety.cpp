#include "ualg/variety.hpp"

#include <algorithm>

#include "ualg/error.hpp"
#include "ualg/free_algebra.hpp"

namespace ualg {

std::size_t FingerprintHash::operator()(const Fingerprint& f) const {
  std::size_t h = f.size();
  for (auto v : f) h = h * 1000003u ^ v;
  return h;
}

std::string IdentityFailure::describe() const {
  std::string out = "in " + algebra + " at ";
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (i) out += ", ";
    out += assignment[i].first->to_string() + "=" + std::to_string(assignment[i].second);
  }
  if (assignment.empty()) out += "the empty assignment";
  return out + ": left = " + std::to_string(left) + ", right = " + std::to_string(right);
}

Variety::Variety(std::vector<AlgebraPtr> generators, const Budget& budget) : generators_(std::move(generators)) {
  if (generators_.empty()) throw Error("a variety needs at least one generating algebra");
  for (const auto& a : generators_) {
    if (!(a->signature() == generators_.front()->signature())) {
      throw SignatureMismatch("algebras '" + generators_.front()->name() + "' and '" + a->name() +
                              "' have different signatures");
    }
  }
  // F(empty): one evaluation point per generating algebra.
  const auto& gens = generators_;
  auto apply = [&gens](std::size_t op, std::span<const Fingerprint* const> args) {
    Fingerprint out(gens.size());
    std::vector<Element> tuple(args.size());
    for (std::size_t k = 0; k < gens.size(); ++k) {
      for (std::size_t i = 0; i < args.size(); ++i) tuple[i] = (*args[i])[k];
      out[k] = gens[k]->apply(op, tuple);
    }
    return out;
  };
  auto closure = detail::close_under_operations(signature(), {}, {}, apply, gens.size(), budget);
  for (std::size_t i = 0; i < closure.elements.size(); ++i) {
    ground_lookup_.emplace(closure.elements[i], i);
    ground_.push_back({closure.witnesses[i], std::move(closure.elements[i])});
  }
}

std::vector<Element> Variety::ground_value(const Term& t) const {
  if (!t.is_ground() || t.has_pairs()) throw Error("'" + t.to_string() + "' is not a constant term");
  std::vector<Element> out;
  out.reserve(generators_.size());
  for (const auto& a : generators_) out.push_back(evaluate(*a, t, {}));
  return out;
}

std::size_t Variety::ground_index(const Term& t) const {
  auto it = ground_lookup_.find(ground_value(t));
  if (it == ground_lookup_.end()) throw Error("constant term outside F(empty)");
  return it->second;
}

bool Variety::equal(const TermPtr& s, const TermPtr& t, const Budget& budget) const {
  if (*s == *t) return true;
  const TermPtr both[] = {s, t};
  FreeEvaluator ev(*this, FreeEvaluator::collect_generators(*this, both), budget);
  return ev(*s) == ev(*t);
}

std::optional<IdentityFailure> Variety::counterexample(const TermPtr& s, const TermPtr& t,
                                                       const Budget& budget) const {
  const TermPtr both[] = {s, t};
  FreeEvaluator ev(*this, FreeEvaluator::collect_generators(*this, both), budget);
  const auto fs = ev(*s);
  const auto ft = ev(*t);
  for (std::size_t p = 0; p < fs.size(); ++p) {
    if (fs[p] == ft[p]) continue;
    auto [k, values] = ev.decode(p);
    IdentityFailure f;
    f.algebra = generators_[k]->name();
    for (std::size_t i = 0; i < values.size(); ++i) f.assignment.emplace_back(ev.generators()[i], values[i]);
    f.left = fs[p];
    f.right = ft[p];
    return f;
  }
  return std::nullopt;
}

FreeEvaluator::FreeEvaluator(const Variety& variety, std::vector<TermPtr> generators, const Budget& budget)
    : variety_(variety), generators_(std::move(generators)) {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (!generators_[i]->is_generator()) throw Error("'" + generators_[i]->to_string() + "' is not a generator");
    if (!index_.emplace(key(*generators_[i]), i).second) {
      throw Error("duplicate generator '" + generators_[i]->to_string() + "'");
    }
  }
  const auto g = generators_.size();
  for (const auto& a : variety_.generators()) {
    offset_.push_back(total_);
    std::size_t points = 1;
    for (std::size_t i = 0; i < g; ++i) {
      if (points > budget.max_scan / a->size()) throw BudgetExceeded("too many evaluation points");
      points *= a->size();
    }
    total_ += points;
    if (total_ > budget.max_scan) throw BudgetExceeded("too many evaluation points");
  }
  columns_.assign(g, Fingerprint(total_));
  for (std::size_t k = 0; k < variety_.generators().size(); ++k) {
    const auto n = variety_.generators()[k]->size();
    const auto begin = offset_[k];
    const auto end = k + 1 < offset_.size() ? offset_[k + 1] : total_;
    std::size_t stride = 1;
    for (std::size_t i = g; i-- > 0;) {
      for (std::size_t p = begin; p < end; ++p) {
        columns_[i][p] = static_cast<Element>(((p - begin) / stride) % n);
      }
      stride *= n;
    }
  }
}

std::string FreeEvaluator::key(const Term& leaf) const {
  if (leaf.is_var()) return "v:" + leaf.name();
  std::string k = "p:";
  for (auto v : variety_.ground_value(*leaf.first())) k += std::to_string(v) + ",";
  k += "|";
  for (auto v : variety_.ground_value(*leaf.second())) k += std::to_string(v) + ",";
  return k;
}

std::vector<TermPtr> FreeEvaluator::collect_generators(const Variety& variety, std::span<const TermPtr> terms) {
  std::vector<TermPtr> out;
  std::map<std::string, bool> seen;
  FreeEvaluator keyer(variety, {});
  for (const auto& t : terms) {
    for (const auto& leaf : generators_of(t)) {
      if (seen.emplace(keyer.key(*leaf), true).second) out.push_back(leaf);
    }
  }
  return out;
}

std::optional<std::size_t> FreeEvaluator::generator_index(const Term& leaf) const {
  if (!leaf.is_generator()) return std::nullopt;
  auto it = index_.find(key(leaf));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Fingerprint FreeEvaluator::apply(std::size_t op, std::span<const Fingerprint* const> args) const {
  Fingerprint out(total_);
  std::vector<Element> tuple(args.size());
  const auto& gens = variety_.generators();
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const auto& a = *gens[k];
    const auto begin = offset_[k];
    const auto end = k + 1 < offset_.size() ? offset_[k + 1] : total_;
    if (args.size() == 2) {
      const auto& tbl = a.table(op);
      const auto n = a.size();
      const auto& x = *args[0];
      const auto& y = *args[1];
      for (std::size_t p = begin; p < end; ++p) out[p] = tbl[x[p] * n + y[p]];
      continue;
    }
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t i = 0; i < args.size(); ++i) tuple[i] = (*args[i])[p];
      out[p] = a.apply(op, tuple);
    }
  }
  return out;
}

Fingerprint FreeEvaluator::evaluate(const Term& t, const std::map<std::string, const Fingerprint*>& bound) const {
  if (t.is_var()) {
    if (auto it = bound.find(t.name()); it != bound.end()) return *it->second;
  }
  if (t.is_generator()) {
    auto idx = generator_index(t);
    if (!idx) throw Error("generator '" + t.to_string() + "' is outside the evaluator's generator list");
    return columns_[*idx];
  }
  auto op = variety_.signature().find(t.name());
  if (!op || variety_.signature().op(*op).arity != t.args().size()) {
    throw SignatureMismatch("symbol '" + t.name() + "' does not match the variety's signature");
  }
  std::vector<Fingerprint> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(evaluate(*a, bound));
  std::vector<const Fingerprint*> ptrs;
  for (const auto& a : args) ptrs.push_back(&a);
  return apply(*op, ptrs);
}

std::size_t FreeEvaluator::point_index(std::size_t k, std::span<const Element> values) const {
  const auto n = variety_.generators().at(k)->size();
  std::size_t p = 0;
  for (auto v : values) p = p * n + v;
  return offset_[k] + p;
}

std::pair<std::size_t, std::vector<Element>> FreeEvaluator::decode(std::size_t point) const {
  std::size_t k = 0;
  while (k + 1 < offset_.size() && offset_[k + 1] <= point) ++k;
  const auto n = variety_.generators()[k]->size();
  std::vector<Element> values(generators_.size());
  std::size_t rest = point - offset_[k];
  for (std::size_t i = generators_.size(); i-- > 0;) {
    values[i] = static_cast<Element>(rest % n);
    rest /= n;
  }
  return {k, values};
}

}  // namespace ualg
