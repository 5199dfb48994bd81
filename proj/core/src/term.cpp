#include "ualg/term.hpp"

#include <algorithm>
#include <unordered_set>

#include "ualg/error.hpp"

namespace ualg {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Signature::Signature(std::vector<OpSymbol> ops) {
  for (auto& op : ops) add(std::move(op.name), op.arity);
}

void Signature::add(std::string name, std::size_t arity) {
  if (!is_identifier(name)) throw Error("invalid operation symbol '" + name + "'");
  if (find(name)) throw Error("duplicate operation symbol '" + name + "'");
  ops_.push_back({std::move(name), arity});
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i].name == name) return i;
  }
  return std::nullopt;
}

bool Signature::has_constants() const {
  return std::any_of(ops_.begin(), ops_.end(), [](const OpSymbol& op) { return op.arity == 0; });
}

std::size_t Signature::max_arity() const {
  std::size_t m = 0;
  for (const auto& op : ops_) m = std::max(m, op.arity);
  return m;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(text[0])) return false;
  return std::all_of(text.begin() + 1, text.end(), [&](char c) { return alpha(c) || digit(c); });
}

Term::Term(Private, Kind kind, std::string name, std::vector<TermPtr> args)
    : kind_(kind), name_(std::move(name)), args_(std::move(args)) {
  hash_ = mix(static_cast<std::size_t>(kind_) + 1, std::hash<std::string>{}(name_));
  ground_ = kind_ != Kind::kVar;
  has_pairs_ = kind_ == Kind::kPair;
  for (const auto& a : args_) {
    depth_ = std::max(depth_, a->depth_ + 1);
    size_ += a->size_;
    hash_ = mix(hash_, a->hash_);
    if (kind_ == Kind::kOp) {
      ground_ = ground_ && a->ground_;
      has_pairs_ = has_pairs_ || a->has_pairs_;
    }
  }
  // Pairs are leaves: they count as depth 0, size 1.
  if (kind_ == Kind::kPair) {
    depth_ = 0;
    size_ = 1;
  }
}

TermPtr Term::var(std::string name) {
  return std::make_shared<const Term>(Private{}, Kind::kVar, std::move(name), std::vector<TermPtr>{});
}

TermPtr Term::pair(TermPtr first, TermPtr second) {
  for (const auto* c : {&first, &second}) {
    if (!*c) throw Error("paired constant with a null component");
    if (!(*c)->is_ground() || (*c)->has_pairs()) {
      throw Error("paired constant component '" + (*c)->to_string() + "' is not a ground constant term");
    }
  }
  return std::make_shared<const Term>(Private{}, Kind::kPair, std::string{},
                                      std::vector<TermPtr>{std::move(first), std::move(second)});
}

TermPtr Term::op(std::string symbol, std::vector<TermPtr> args) {
  for (const auto& a : args) {
    if (!a) throw Error("null argument to '" + symbol + "'");
  }
  return std::make_shared<const Term>(Private{}, Kind::kOp, std::move(symbol), std::move(args));
}

std::string Term::to_string() const {
  switch (kind_) {
    case Kind::kVar:
      return name_;
    case Kind::kPair:
      return "(" + args_[0]->to_string() + "|" + args_[1]->to_string() + ")";
    case Kind::kOp:
      break;
  }
  if (args_.empty()) return name_;
  std::string out = name_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ",";
    out += args_[i]->to_string();
  }
  return out + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name() ||
      a.args().size() != b.args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!(*a.args()[i] == *b.args()[i])) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (&a == &b) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.args().size() <=> b.args().size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (auto c = *a.args()[i] <=> *b.args()[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

bool same_term(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

TermPtr substitute(const TermPtr& t, const Substitution& env, bool strict) {
  if (t->is_generator()) {
    if (auto it = env.find(t); it != env.end()) return it->second;
    if (strict) throw Error("no binding for generator '" + t->to_string() + "'");
    return t;
  }
  if (t->args().empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  bool changed = false;
  for (const auto& a : t->args()) {
    args.push_back(substitute(a, env, strict));
    changed = changed || args.back() != a;
  }
  return changed ? Term::op(t->name(), std::move(args)) : t;
}

TermPtr substitute_vars(const TermPtr& t, const std::map<std::string, TermPtr>& env) {
  Substitution s;
  for (const auto& [name, value] : env) s.emplace(Term::var(name), value);
  return substitute(t, s, false);
}

namespace {

void collect_generators(const TermPtr& t, std::vector<TermPtr>& out,
                        std::unordered_set<TermPtr, TermPtrHash, TermPtrEq>& seen) {
  if (t->is_generator()) {
    if (seen.insert(t).second) out.push_back(t);
    return;
  }
  for (const auto& a : t->args()) collect_generators(a, out, seen);
}

void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out,
                      std::unordered_set<TermPtr, TermPtrHash, TermPtrEq>& seen) {
  if (seen.contains(t)) return;
  if (t->is_op()) {
    for (const auto& a : t->args()) collect_subterms(a, out, seen);
  }
  seen.insert(t);
  out.push_back(t);
}

}  // namespace

std::vector<TermPtr> generators_of(const TermPtr& t) {
  std::vector<TermPtr> out;
  std::unordered_set<TermPtr, TermPtrHash, TermPtrEq> seen;
  collect_generators(t, out, seen);
  return out;
}

std::vector<std::string> variables_of(const TermPtr& t) {
  std::vector<std::string> out;
  for (const auto& g : generators_of(t)) {
    if (g->is_var()) out.push_back(g->name());
  }
  return out;
}

std::size_t count_occurrences(const TermPtr& t, const TermPtr& leaf) {
  if (*t == *leaf) return 1;
  if (!t->is_op()) return 0;
  std::size_t n = 0;
  for (const auto& a : t->args()) n += count_occurrences(a, leaf);
  return n;
}

std::vector<TermPtr> subterms(const TermPtr& t) {
  std::vector<TermPtr> out;
  std::unordered_set<TermPtr, TermPtrHash, TermPtrEq> seen;
  collect_subterms(t, out, seen);
  return out;
}

void check_term(const Term& t, const Signature& sig) {
  if (t.is_var()) return;
  if (t.is_pair()) {
    check_term(*t.first(), sig);
    check_term(*t.second(), sig);
    return;
  }
  auto idx = sig.find(t.name());
  if (!idx) throw ParseError("unknown symbol '" + t.name() + "'");
  if (sig.op(*idx).arity != t.args().size()) {
    throw ParseError("arity mismatch: '" + t.name() + "' expects " + std::to_string(sig.op(*idx).arity) +
                     " argument(s), got " + std::to_string(t.args().size()));
  }
  for (const auto& a : t.args()) check_term(*a, sig);
}

bool for_each_term(const Signature& sig, const std::vector<TermPtr>& gens, std::size_t max_depth,
                   const std::function<bool(const TermPtr&)>& visit) {
  // all[i] holds every emitted term; level_end[d] is the end index of depth d.
  std::vector<TermPtr> all;
  std::vector<std::size_t> level_end;
  for (const auto& g : gens) {
    all.push_back(g);
    if (!visit(g)) return false;
  }
  for (const auto& op : sig.ops()) {
    if (op.arity != 0) continue;
    all.push_back(Term::op(op.name));
    if (!visit(all.back())) return false;
  }
  level_end.push_back(all.size());

  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    const std::size_t pool = level_end.back();
    const std::size_t prev_begin = depth >= 2 ? level_end[depth - 2] : 0;
    for (const auto& op : sig.ops()) {
      if (op.arity == 0 || pool == 0) continue;
      std::vector<std::size_t> idx(op.arity, 0);
      while (true) {
        // Keep only tuples with an argument of depth exactly depth-1.
        bool fresh = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= prev_begin; });
        if (fresh) {
          std::vector<TermPtr> args;
          args.reserve(op.arity);
          for (auto i : idx) args.push_back(all[i]);
          all.push_back(Term::op(op.name, std::move(args)));
          if (!visit(all.back())) return false;
        }
        std::size_t pos = op.arity;
        while (pos > 0) {
          --pos;
          if (++idx[pos] < pool) break;
          idx[pos] = 0;
          if (pos == 0) {
            pos = op.arity + 1;
            break;
          }
        }
        if (pos == op.arity + 1) break;
      }
    }
    level_end.push_back(all.size());
  }
  return true;
}

std::vector<TermPtr> enumerate_terms(const Signature& sig, const std::vector<TermPtr>& gens,
                                     std::size_t max_depth) {
  std::vector<TermPtr> out;
  for_each_term(sig, gens, max_depth, [&](const TermPtr& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace ualg
