#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ualg/finite_algebra.hpp"
#include "ualg/term.hpp"

namespace ualg {

/// Resource caps for closure computations and exhaustive evaluation.
struct Budget {
  /// Largest carrier a closure may produce.
  std::size_t max_elements = 1'000'000;
  /// Cap on evaluation work (tuple applications times evaluation points).
  std::size_t max_scan = 200'000'000;
};

/// A value vector over every evaluation point of a free algebra: for each
/// generating algebra A (in order) and each assignment of the generators
/// into A (generator 0 most significant), the value at that point.
using Fingerprint = std::vector<Element>;

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const;
};

/// An element of F(empty): a witnessing constant term and its value in each
/// generating algebra.
struct GroundElement {
  TermPtr witness;
  std::vector<Element> values;
};

/// An assignment on which two terms disagree.
struct IdentityFailure {
  std::string algebra;
  std::vector<std::pair<TermPtr, Element>> assignment;
  Element left = 0;
  Element right = 0;

  std::string describe() const;
};

/// The variety generated by a nonempty list of finite algebras sharing one
/// signature. An identity holds in the variety exactly when it holds under
/// every assignment into every generating algebra.
class Variety {
 public:
  explicit Variety(std::vector<AlgebraPtr> generators, const Budget& budget = {});

  const Signature& signature() const { return generators_.front()->signature(); }
  const std::vector<AlgebraPtr>& generators() const { return generators_; }

  /// The elements of F(empty), in closure order. Empty when the signature
  /// has no constants.
  const std::vector<GroundElement>& ground_pool() const { return ground_; }
  /// Value of a ground, pair-free term in each generating algebra.
  std::vector<Element> ground_value(const Term& t) const;
  /// Index into ground_pool() of a ground, pair-free term.
  std::size_t ground_index(const Term& t) const;

  /// Variety-level equality. Variables and paired constants are free
  /// generators; two paired constants are the same generator when their
  /// components agree in F(empty).
  bool equal(const TermPtr& s, const TermPtr& t, const Budget& budget = {}) const;
  std::optional<IdentityFailure> counterexample(const TermPtr& s, const TermPtr& t,
                                                const Budget& budget = {}) const;

 private:
  std::vector<AlgebraPtr> generators_;
  std::vector<GroundElement> ground_;
  std::unordered_map<std::vector<Element>, std::size_t, FingerprintHash> ground_lookup_;
};

/// Evaluates terms over a fixed list of generator leaves at every point of
/// the free algebra's coordinate space.
class FreeEvaluator {
 public:
  FreeEvaluator(const Variety& variety, std::vector<TermPtr> generators, const Budget& budget = {});

  /// Distinct generator leaves of `terms`, merging paired constants with
  /// equal components in F(empty). Order: first occurrence.
  static std::vector<TermPtr> collect_generators(const Variety& variety, std::span<const TermPtr> terms);

  const Variety& variety() const { return variety_; }
  const std::vector<TermPtr>& generators() const { return generators_; }
  std::size_t points() const { return total_; }

  /// Throws Error when `t` contains a generator outside the list.
  Fingerprint operator()(const Term& t) const { return evaluate(t, {}); }
  /// Variables named in `bound` evaluate to the given fingerprints.
  Fingerprint evaluate(const Term& t, const std::map<std::string, const Fingerprint*>& bound) const;

  const Fingerprint& generator_column(std::size_t i) const { return columns_.at(i); }
  std::optional<std::size_t> generator_index(const Term& leaf) const;
  /// Elementwise application of operation `op`.
  Fingerprint apply(std::size_t op, std::span<const Fingerprint* const> args) const;

  /// Point index of an assignment of the generators into algebra `k`.
  std::size_t point_index(std::size_t k, std::span<const Element> values) const;
  /// Decodes a point index into (algebra index, generator values).
  std::pair<std::size_t, std::vector<Element>> decode(std::size_t point) const;

 private:
  std::string key(const Term& leaf) const;

  Variety variety_;
  std::vector<TermPtr> generators_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> offset_;
  std::size_t total_ = 0;
  std::vector<Fingerprint> columns_;
};

}  // namespace ualg
