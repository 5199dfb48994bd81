#include "ualg/finite_algebra.hpp"

#include <algorithm>
#include <numeric>

#include "ualg/error.hpp"

namespace ualg {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), Element{0}); }

  Element find(Element x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index becomes the root, so roots are least elements.
  bool unite(Element a, Element b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<Element> parent_;
};

constexpr Element kUnset = static_cast<Element>(-1);

// Index of the tuple of class representatives of `args`.
std::size_t rep_index(std::span<const Element> args, const std::vector<Element>& rep, std::size_t n) {
  std::size_t index = 0;
  for (auto a : args) index = index * n + rep[a];
  return index;
}

}  // namespace

FiniteAlgebra::FiniteAlgebra(std::string name, Signature sig, std::size_t size,
                             std::vector<std::vector<Element>> tables, std::vector<std::string> element_names)
    : name_(std::move(name)),
      sig_(std::move(sig)),
      size_(size),
      tables_(std::move(tables)),
      names_(std::move(element_names)) {
  if (size_ == 0) throw Error("algebra '" + name_ + "' has an empty carrier");
  if (tables_.size() != sig_.size()) throw Error("algebra '" + name_ + "': one table per operation required");
  for (std::size_t i = 0; i < sig_.size(); ++i) {
    const auto& op = sig_.op(i);
    if (tables_[i].size() != table_size(size_, op.arity)) {
      throw Error("algebra '" + name_ + "': table for '" + op.name + "' has the wrong size");
    }
    for (auto v : tables_[i]) {
      if (v >= size_) throw Error("algebra '" + name_ + "': table for '" + op.name + "' leaves the carrier");
    }
  }
  if (!names_.empty() && names_.size() != size_) {
    throw Error("algebra '" + name_ + "': expected " + std::to_string(size_) + " element names");
  }
}

std::string FiniteAlgebra::element_name(Element e) const {
  if (!names_.empty() && e < names_.size()) return names_[e];
  return std::to_string(e);
}

std::size_t table_size(std::size_t n, std::size_t arity, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (n != 0 && total > cap / n) throw BudgetExceeded("operation table exceeds budget");
    total *= n;
  }
  if (total > cap) throw BudgetExceeded("operation table exceeds budget");
  return total;
}

bool Homomorphism::is_homomorphism() const {
  const auto& d = *domain;
  const auto& c = *codomain;
  if (map.size() != d.size() || !(d.signature() == c.signature())) return false;
  if (std::any_of(map.begin(), map.end(), [&](Element e) { return e >= c.size(); })) return false;
  std::vector<Element> image;
  for (std::size_t op = 0; op < d.signature().size(); ++op) {
    bool ok = true;
    for_each_tuple(d.size(), d.signature().op(op).arity, [&](std::span<const Element> args) {
      if (!ok) return;
      image.assign(args.size(), 0);
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = map[args[i]];
      ok = map[d.apply(op, args)] == c.apply(op, image);
    });
    if (!ok) return false;
  }
  return true;
}

bool Homomorphism::is_surjective() const {
  std::vector<bool> hit(codomain->size(), false);
  for (auto e : map) hit.at(e) = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

Homomorphism identity_hom(const AlgebraPtr& a) {
  std::vector<Element> map(a->size());
  std::iota(map.begin(), map.end(), Element{0});
  return {a, a, std::move(map)};
}

Congruence::Congruence(AlgebraPtr algebra, const std::vector<Element>& labels) : algebra_(std::move(algebra)) {
  if (labels.size() != algebra_->size()) throw Error("congruence labels do not cover the carrier");
  std::map<Element, Element> first;
  rep_.resize(labels.size());
  for (std::size_t a = 0; a < labels.size(); ++a) {
    auto [it, inserted] = first.emplace(labels[a], static_cast<Element>(a));
    rep_[a] = it->second;
  }
}

Congruence Congruence::identity(AlgebraPtr algebra) {
  std::vector<Element> labels(algebra->size());
  std::iota(labels.begin(), labels.end(), Element{0});
  return Congruence(std::move(algebra), labels);
}

Congruence Congruence::total(AlgebraPtr algebra) {
  std::vector<Element> labels(algebra->size(), 0);
  return Congruence(std::move(algebra), labels);
}

std::size_t Congruence::num_classes() const {
  std::size_t n = 0;
  for (std::size_t a = 0; a < rep_.size(); ++a) n += rep_[a] == a;
  return n;
}

std::vector<std::vector<Element>> Congruence::classes() const {
  std::map<Element, std::vector<Element>> by_rep;
  for (std::size_t a = 0; a < rep_.size(); ++a) by_rep[rep_[a]].push_back(static_cast<Element>(a));
  std::vector<std::vector<Element>> out;
  for (auto& [r, cls] : by_rep) out.push_back(std::move(cls));
  return out;
}

bool Congruence::is_compatible() const {
  const auto& a = *algebra_;
  const auto n = a.size();
  for (std::size_t op = 0; op < a.signature().size(); ++op) {
    const auto arity = a.signature().op(op).arity;
    if (arity == 0) continue;
    std::vector<Element> seen(table_size(n, arity), kUnset);
    bool ok = true;
    for_each_tuple(n, arity, [&](std::span<const Element> args) {
      if (!ok) return;
      auto& slot = seen[rep_index(args, rep_, n)];
      const auto out = rep_[a.apply(op, args)];
      if (slot == kUnset) {
        slot = out;
      } else {
        ok = slot == out;
      }
    });
    if (!ok) return false;
  }
  return true;
}

std::string format_partition(const Congruence& c) {
  std::string out = "{";
  bool first_class = true;
  for (const auto& cls : c.classes()) {
    if (!first_class) out += ",";
    first_class = false;
    out += "{";
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (i) out += ",";
      out += c.algebra().element_name(cls[i]);
    }
    out += "}";
  }
  return out + "}";
}

Element evaluate(const FiniteAlgebra& a, const Term& t, const std::map<std::string, Element>& assignment) {
  switch (t.kind()) {
    case Term::Kind::kVar: {
      auto it = assignment.find(t.name());
      if (it == assignment.end()) throw Error("unbound variable '" + t.name() + "'");
      if (it->second >= a.size()) throw Error("assignment of '" + t.name() + "' leaves the carrier");
      return it->second;
    }
    case Term::Kind::kPair:
      throw Error("cannot evaluate paired constant '" + t.to_string() + "' in a single algebra");
    case Term::Kind::kOp:
      break;
  }
  auto idx = a.signature().find(t.name());
  if (!idx) throw SignatureMismatch("symbol '" + t.name() + "' is not in the signature of '" + a.name() + "'");
  if (a.signature().op(*idx).arity != t.args().size()) {
    throw SignatureMismatch("arity mismatch for '" + t.name() + "'");
  }
  std::vector<Element> args;
  args.reserve(t.args().size());
  for (const auto& c : t.args()) args.push_back(evaluate(a, *c, assignment));
  return a.apply(*idx, args);
}

ProductResult product(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (!(a->signature() == b->signature())) {
    throw SignatureMismatch("product of '" + a->name() + "' and '" + b->name() + "' with different signatures");
  }
  const auto& sig = a->signature();
  const auto nb = b->size();
  const auto n = a->size() * nb;
  std::vector<std::vector<Element>> tables(sig.size());
  std::vector<Element> left, right;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto arity = sig.op(op).arity;
    tables[op].reserve(table_size(n, arity));
    for_each_tuple(n, arity, [&](std::span<const Element> args) {
      left.resize(arity);
      right.resize(arity);
      for (std::size_t i = 0; i < arity; ++i) {
        left[i] = static_cast<Element>(args[i] / nb);
        right[i] = static_cast<Element>(args[i] % nb);
      }
      tables[op].push_back(pair_index(a->apply(op, left), b->apply(op, right), nb));
    });
  }
  std::vector<std::string> names;
  for (std::size_t x = 0; x < a->size(); ++x) {
    for (std::size_t y = 0; y < nb; ++y) {
      names.push_back("(" + a->element_name(static_cast<Element>(x)) + "," +
                      b->element_name(static_cast<Element>(y)) + ")");
    }
  }
  auto prod = std::make_shared<const FiniteAlgebra>(a->name() + "x" + b->name(), sig, n, std::move(tables),
                                                    std::move(names));
  std::vector<Element> m1(n), m2(n);
  for (std::size_t i = 0; i < n; ++i) {
    m1[i] = static_cast<Element>(i / nb);
    m2[i] = static_cast<Element>(i % nb);
  }
  return {prod, {prod, a, std::move(m1)}, {prod, b, std::move(m2)}};
}

std::vector<Element> generated_subalgebra(const FiniteAlgebra& a, std::span<const Element> seed) {
  std::vector<bool> member(a.size(), false);
  std::vector<Element> elems;
  auto add = [&](Element e) {
    if (!member.at(e)) {
      member[e] = true;
      elems.push_back(e);
    }
  };
  for (auto e : seed) add(e);
  const auto& sig = a.signature();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    if (sig.op(op).arity == 0) add(a.constant(op));
  }
  // Semi-naive closure: each round only applies tuples touching a new element.
  std::size_t old_count = 0;
  while (old_count < elems.size()) {
    const auto frontier = elems.size();
    std::vector<Element> args;
    for (std::size_t op = 0; op < sig.size(); ++op) {
      const auto arity = sig.op(op).arity;
      if (arity == 0) continue;
      for_each_tuple(frontier, arity, [&](std::span<const Element> idx) {
        if (std::none_of(idx.begin(), idx.end(), [&](Element i) { return i >= old_count; })) return;
        args.resize(arity);
        for (std::size_t i = 0; i < arity; ++i) args[i] = elems[idx[i]];
        add(a.apply(op, args));
      });
    }
    old_count = frontier;
  }
  std::sort(elems.begin(), elems.end());
  return elems;
}

Congruence congruence_closure(const AlgebraPtr& a, std::span<const std::pair<Element, Element>> pairs) {
  const auto n = a->size();
  UnionFind uf(n);
  for (const auto& [x, y] : pairs) {
    if (x >= n || y >= n) throw Error("congruence_closure: pair outside the carrier");
    uf.unite(x, y);
  }
  const auto& sig = a->signature();
  std::vector<Element> rep(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t op = 0; op < sig.size(); ++op) {
      const auto arity = sig.op(op).arity;
      if (arity == 0) continue;
      for (Element e = 0; e < n; ++e) rep[e] = uf.find(e);
      // Signature table: tuples with equal representative tuples must have
      // related outputs.
      std::vector<Element> seen(table_size(n, arity), kUnset);
      for_each_tuple(n, arity, [&](std::span<const Element> args) {
        auto& slot = seen[rep_index(args, rep, n)];
        const auto out = a->apply(op, args);
        if (slot == kUnset) {
          slot = out;
        } else if (uf.unite(slot, out)) {
          changed = true;
        }
      });
    }
  }
  std::vector<Element> labels(n);
  for (Element e = 0; e < n; ++e) labels[e] = uf.find(e);
  return Congruence(a, labels);
}

QuotientResult quotient(const Congruence& theta) {
  if (!theta.is_compatible()) throw Error("quotient: relation is not operation-compatible");
  const auto& a = theta.algebra();
  const auto& rep = theta.representatives();
  std::vector<Element> index_of(a.size(), kUnset);
  std::vector<Element> reps;
  for (Element e = 0; e < a.size(); ++e) {
    if (rep[e] == e) {
      index_of[e] = static_cast<Element>(reps.size());
      reps.push_back(e);
    }
  }
  const auto m = reps.size();
  const auto& sig = a.signature();
  std::vector<std::vector<Element>> tables(sig.size());
  std::vector<Element> lifted;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto arity = sig.op(op).arity;
    tables[op].reserve(table_size(m, arity));
    for_each_tuple(m, arity, [&](std::span<const Element> args) {
      lifted.resize(arity);
      for (std::size_t i = 0; i < arity; ++i) lifted[i] = reps[args[i]];
      tables[op].push_back(index_of[rep[a.apply(op, lifted)]]);
    });
  }
  std::vector<std::string> names;
  for (auto r : reps) names.push_back("[" + a.element_name(r) + "]");
  auto q = std::make_shared<const FiniteAlgebra>(a.name() + "/theta", sig, m, std::move(tables), std::move(names));
  std::vector<Element> proj(a.size());
  for (Element e = 0; e < a.size(); ++e) proj[e] = index_of[rep[e]];
  return {q, {theta.algebra_ptr(), q, std::move(proj)}};
}

Congruence kernel(const Homomorphism& h) { return Congruence(h.domain, h.map); }

std::vector<Congruence> enumerate_congruences(const AlgebraPtr& a, std::size_t max_carrier) {
  const auto n = a->size();
  if (n > max_carrier) {
    throw BudgetExceeded("congruence enumeration over " + std::to_string(n) + " elements exceeds the cap of " +
                         std::to_string(max_carrier));
  }
  std::vector<Congruence> out;
  // Restricted growth strings enumerate each set partition exactly once.
  std::vector<Element> labels(n, 0), max_before(n, 0);
  while (true) {
    Congruence c(a, labels);
    if (c.is_compatible()) out.push_back(std::move(c));
    std::size_t i = n;
    bool found = false;
    while (i > 1) {
      --i;
      if (labels[i] <= max_before[i]) {
        found = true;
        break;
      }
    }
    if (!found) break;
    ++labels[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      max_before[j] = std::max(max_before[j - 1], labels[j - 1]);
      labels[j] = 0;
    }
  }
  return out;
}

std::optional<Homomorphism> find_isomorphism(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a->size() != b->size() || !(a->signature() == b->signature())) return std::nullopt;
  std::vector<Element> perm(a->size());
  std::iota(perm.begin(), perm.end(), Element{0});
  do {
    Homomorphism h{a, b, perm};
    if (h.is_homomorphism()) return h;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace ualg
