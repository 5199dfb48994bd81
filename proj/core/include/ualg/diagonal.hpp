#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ualg/term.hpp"
#include "ualg/variety.hpp"

namespace ualg {

/// A diagonalizing term t(x, y, c1..ck) with constant lists e and e'.
/// Valid for a variety when t(x,y,e) = x and t(x,y,e') = y are identities.
struct DiagPack {
  TermPtr t;
  std::vector<TermPtr> e;
  std::vector<TermPtr> e_prime;

  std::size_t k() const { return e.size(); }
  /// Structural checks only: list lengths, variables of t among x, y,
  /// c1..ck, pair-free constant lists. Throws Error.
  void validate() const;
};

/// Name of the i-th (0-based) constant slot: c1, c2, ...
std::string pack_slot(std::size_t i);

struct DiagCheck {
  bool ok = false;
  /// Which identity failed: 0 for t(x,y,e) = x, 1 for t(x,y,e') = y.
  int failed_identity = -1;
  std::optional<IdentityFailure> failure;

  std::string describe() const;
};

DiagCheck check_diag(const Variety& variety, const DiagPack& pack);

enum class DiagSearchStatus { kFound, kNotFound, kNoConstants };

struct DiagSearchResult {
  DiagSearchStatus status = DiagSearchStatus::kNotFound;
  std::optional<DiagPack> pack;
  std::string diagnostic;
  std::size_t terms_tried = 0;
};

struct DiagSearchOptions {
  std::size_t max_depth = 2;
  std::size_t max_k = 2;
  /// Cap on candidate terms built; exceeding it throws BudgetExceeded.
  std::size_t max_terms = 2'000'000;
};

/// Smallest valid pack in the order (depth, k, term order, e, e'), where
/// terms at each depth follow enumerate_terms order with semantically
/// duplicate terms skipped (the first representative is kept, which is the
/// least term in enumeration order with that meaning). Constants range over
/// F(empty) via their witnessing terms.
DiagSearchResult search_diag(const Variety& variety, const DiagSearchOptions& options, const Budget& budget = {});

/// delta(a, b) = t(a, b, (e1|e1'), ..., (ek|ek')).
TermPtr delta_expand(const TermPtr& a, const TermPtr& b, const DiagPack& pack);

/// Inverse of delta_expand on syntax: when `term` is literally
/// delta_expand(a, b, pack), returns (a, b).
std::optional<std::pair<TermPtr, TermPtr>> match_delta(const TermPtr& term, const DiagPack& pack);

/// Builds F = F({x,y}) and the subalgebra of F x F generated by
/// F(empty)^2 and {(x,x),(y,y)}; returns whether (x,y) belongs to it.
bool pair_generation_test(const Variety& variety, const Budget& budget = {});

/// Pack file format:
///
///   diag k=2
///   t = add(mul(x,c1),mul(y,c2))
///   e = one,zero
///   e' = zero,one
DiagPack parse_pack(std::string_view text, const Signature& sig);
std::string format_pack(const DiagPack& pack);

}  // namespace ualg
