#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ualg/diagonal.hpp"
#include "ualg/error.hpp"
#include "ualg/finite_algebra.hpp"

namespace ualg {

/// A binary relation on {0..size-1} as a dense bit matrix.
class Relation {
 public:
  explicit Relation(std::size_t size = 0) : size_(size), bits_(size * size, false) {}

  std::size_t size() const { return size_; }
  bool contains(Element a, Element b) const { return bits_[a * size_ + b]; }
  void insert(Element a, Element b) { bits_[a * size_ + b] = true; }
  std::size_t count() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t size_;
  std::vector<bool> bits_;
};

struct FactorRelations {
  Relation on_x;
  Relation on_y;
};

/// E_X = {(a,c) | q(a,b) = q(c,d) for some b, d} and E_Y symmetrically.
/// q must be a surjective homomorphism out of product(X, Y).
FactorRelations compute_factor_congruences(const AlgebraPtr& x, const AlgebraPtr& y, const Homomorphism& q);

/// Thrown by verify_congruence. `witness` holds (a, b, c) with aRb, bRc
/// and not aRc for transitivity; for compatibility it holds the argument
/// tuples of `op`, left tuple then right tuple.
class NotACongruence : public Error {
 public:
  enum class Kind { kReflexivity, kSymmetry, kTransitivity, kCompatibility };
  NotACongruence(Kind kind, std::vector<Element> witness, std::string op, const std::string& what)
      : Error(what), kind(kind), witness(std::move(witness)), op(std::move(op)) {}

  Kind kind;
  std::vector<Element> witness;
  std::string op;
};

/// Exhaustive check that `rel` is a congruence of `a`. The pack, when
/// given, only enriches the error message.
Congruence verify_congruence(const Relation& rel, const AlgebraPtr& a, const DiagPack* pack = nullptr);

struct Decomposition {
  Homomorphism q_x;  // X -> X/E_X
  Homomorphism q_y;  // Y -> Y/E_Y
  Congruence e_x;
  Congruence e_y;
  /// Codomain of q -> X/E_X x Y/E_Y.
  Homomorphism iso;
  /// Number of element pairs of X x Y on which the two kernels were compared.
  std::size_t pairs_compared = 0;
};

/// Two elements of X x Y, as (a,b) and (c,d), on which ker q and
/// ker(q_X x q_Y) disagree.
struct KernelCounterexample {
  Element a, b, c, d;
  bool merged_by_q = false;
  std::string describe() const;
};

struct DecomposeResult {
  std::optional<Decomposition> decomposition;
  std::optional<KernelCounterexample> counterexample;
  bool ok() const { return decomposition.has_value(); }
};

/// Builds E_X, E_Y, verifies them, and compares the kernels exhaustively.
/// On disagreement the lexicographically first pair is reported.
DecomposeResult decompose(const AlgebraPtr& x, const AlgebraPtr& y, const Homomorphism& q,
                          const DiagPack* pack = nullptr);

/// Hom file format:
///
///   hom <name>
///   codomain <path>        (optional; otherwise the image is induced)
///   map 0 1 1 0 ...        (images of the domain in encoding order)
struct HomSpec {
  std::string name;
  std::optional<std::string> codomain_path;
  std::vector<Element> map;
};

HomSpec parse_hom(std::string_view text, const std::string& source = "<input>");

/// The algebra induced on {0..m-1} by a map out of `domain` whose image is
/// exactly {0..m-1}. Throws Error when the map is not a homomorphism onto
/// a well-defined algebra.
AlgebraPtr induced_codomain(const AlgebraPtr& domain, const std::vector<Element>& map, const std::string& name);

}  // namespace ualg
