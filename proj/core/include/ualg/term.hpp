#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ualg {

struct OpSymbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const OpSymbol&, const OpSymbol&) = default;
};

/// Operation symbols with arities. Constants are the arity-0 symbols.
/// Symbol order is significant: it fixes enumeration and table order.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<OpSymbol> ops);

  /// Throws ualg::Error on a duplicate or malformed name.
  void add(std::string name, std::size_t arity);

  std::optional<std::size_t> find(std::string_view name) const;
  const OpSymbol& op(std::size_t index) const { return ops_.at(index); }
  const std::vector<OpSymbol>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool has_constants() const;
  std::size_t max_arity() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<OpSymbol> ops_;
};

bool is_identifier(std::string_view text);

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable term tree. Leaves are generators (variables or paired
/// constants) or arity-0 operation applications.
///
/// A paired constant `(w|w')` is an opaque leaf: it is never expanded and
/// behaves as a free generator. Its components must be ground and pair-free.
class Term {
  struct Private {};

 public:
  enum class Kind { kVar, kPair, kOp };

  static TermPtr var(std::string name);
  static TermPtr pair(TermPtr first, TermPtr second);
  static TermPtr op(std::string symbol, std::vector<TermPtr> args = {});

  Term(Private, Kind kind, std::string name, std::vector<TermPtr> args);

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::kVar; }
  bool is_pair() const { return kind_ == Kind::kPair; }
  bool is_op() const { return kind_ == Kind::kOp; }
  /// A generator is a variable or a paired constant.
  bool is_generator() const { return kind_ != Kind::kOp; }

  /// Variable name or operation symbol; empty for pairs.
  const std::string& name() const { return name_; }
  /// Operation arguments, or the two components of a pair.
  const std::vector<TermPtr>& args() const { return args_; }
  const TermPtr& first() const { return args_.at(0); }
  const TermPtr& second() const { return args_.at(1); }

  bool is_ground() const { return ground_; }
  bool has_pairs() const { return has_pairs_; }
  std::size_t depth() const { return depth_; }
  std::size_t size() const { return size_; }
  std::size_t hash() const { return hash_; }

  std::string to_string() const;

 private:
  Kind kind_;
  std::string name_;
  std::vector<TermPtr> args_;
  bool ground_ = true;
  bool has_pairs_ = false;
  std::size_t depth_ = 0;
  std::size_t size_ = 1;
  std::size_t hash_ = 0;
};

bool operator==(const Term& a, const Term& b);
std::strong_ordering operator<=>(const Term& a, const Term& b);

/// Structural equality on shared terms (null-safe).
bool same_term(const TermPtr& a, const TermPtr& b);

struct TermPtrLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return *a < *b; }
};
struct TermPtrHash {
  std::size_t operator()(const TermPtr& t) const { return t->hash(); }
};
struct TermPtrEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return *a == *b; }
};

/// Generator leaf -> replacement.
using Substitution = std::map<TermPtr, TermPtr, TermPtrLess>;

/// Simultaneous replacement of generator leaves. In strict mode every
/// generator leaf of `t` must be bound, otherwise ualg::Error is thrown;
/// in lenient mode unbound leaves are kept.
TermPtr substitute(const TermPtr& t, const Substitution& env, bool strict = false);

/// Convenience form binding variables by name (lenient).
TermPtr substitute_vars(const TermPtr& t, const std::map<std::string, TermPtr>& env);

/// Distinct generator leaves of `t`, in first-occurrence order.
std::vector<TermPtr> generators_of(const TermPtr& t);
/// Distinct variable names of `t`, in first-occurrence order.
std::vector<std::string> variables_of(const TermPtr& t);

/// Number of leaves equal to `leaf`.
std::size_t count_occurrences(const TermPtr& t, const TermPtr& leaf);

/// Every distinct subterm of `t`, children before parents.
std::vector<TermPtr> subterms(const TermPtr& t);

/// Checks arity and symbol membership against `sig`; throws ParseError.
void check_term(const Term& t, const Signature& sig);

/// All terms over `sig` and `gens` of depth <= max_depth, each exactly once.
///
/// Order: depth-major; depth 0 lists `gens` in the given order followed by
/// the constants in symbol order; depth d lists, per operation symbol in
/// symbol order, the argument tuples lexicographically by the enumeration
/// index of the arguments, keeping tuples with at least one argument of
/// depth d-1.
std::vector<TermPtr> enumerate_terms(const Signature& sig, const std::vector<TermPtr>& gens,
                                     std::size_t max_depth);

/// Streaming form of enumerate_terms. The visitor returns false to stop.
/// Returns false if the visitor stopped the enumeration.
bool for_each_term(const Signature& sig, const std::vector<TermPtr>& gens, std::size_t max_depth,
                   const std::function<bool(const TermPtr&)>& visit);

}  // namespace ualg
