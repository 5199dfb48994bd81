#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ualg/diagonal.hpp"
#include "ualg/parse.hpp"
#include "ualg/variety.hpp"

namespace ualg {

/// How the pair (alpha_j, beta_j) of a chain step is justified:
///   a  alpha_j = beta_j
///   b  alpha_j = (w|w'), beta_j = delta(w,w')        (c: the reverse)
///   d  alpha_j = v(delta(w0,w0'),...), beta_j = delta(v(w0,...), v(w0',...))
///                                                    (e: the reverse)
/// The verifier accepts b and c in either orientation, likewise d and e.
enum class Justification : char {
  kRefl = 'a',
  kPairToDelta = 'b',
  kDeltaToPair = 'c',
  kHomToDelta = 'd',
  kDeltaToHom = 'e',
};

std::optional<Justification> justification_from_char(char c);
char to_char(Justification j);

/// One step a_i -> a_{i+1}: a_i = u(beta), a_{i+1} = u(alpha), with slot
/// variables a0..aN of u bound position-wise.
struct ChainStep {
  TermPtr u;
  std::vector<TermPtr> alpha;
  std::vector<TermPtr> beta;
  std::vector<Justification> just;

  std::size_t slots() const { return alpha.size(); }
};

using Chain = std::vector<ChainStep>;

struct HomChain {
  std::string op;
  Chain steps;
};

struct Certificate {
  DiagPack pack;
  Chain idempotence;
  /// One chain per operation symbol of positive arity, signature order.
  std::vector<HomChain> hom;
};

/// Slot variable name: a0, a1, ...
std::string slot_name(std::size_t j);

/// Endpoints of the obligation delta(x,x) = x.
std::pair<TermPtr, TermPtr> idempotence_obligation(const DiagPack& pack);
/// Endpoints of delta(s(x1..xl), s(y1..yl)) = s(delta(x1,y1),...,delta(xl,yl)).
std::pair<TermPtr, TermPtr> hom_obligation(const DiagPack& pack, const OpSymbol& s);

/// An oriented R-instance: the step may replace `beta` by `alpha`.
struct RInstance {
  TermPtr alpha;
  TermPtr beta;
  Justification just;
};

/// All R-instances over the constant pool, both orientations:
/// ((w|w'), delta(w,w')) for w, w' in the pool, and
/// (v(delta(w0,w0'),...), delta(v(w0,...), v(w0',...))) for every operation v,
/// nullary ones included. Throws BudgetExceeded past `max_instances`.
std::vector<RInstance> rewrite_relation(const DiagPack& pack, const Signature& sig, const std::vector<TermPtr>& pool,
                                        std::size_t max_instances = 1'000'000);

/// Syntactic check that (alpha, beta) is justified by `just`.
bool justifies(Justification just, const TermPtr& alpha, const TermPtr& beta, const DiagPack& pack,
               const Variety& variety);

struct StepVerdict {
  bool ok = true;
  std::optional<std::size_t> position;
  std::string reason;
};

/// Checks the justifications, then u(beta) = left and u(alpha) = right in
/// the variety, paired constants read as free generators.
StepVerdict verify_step(const ChainStep& step, const TermPtr& left, const TermPtr& right, const Variety& variety,
                        const DiagPack& pack, const Budget& budget = {});

struct ChainVerdict {
  bool ok = true;
  std::optional<std::size_t> step;
  std::optional<std::size_t> position;
  std::string reason;
};

/// Verifies a chain from `left` to `right`. Intermediate endpoints are the
/// terms u_i(alpha); an empty chain needs left = right.
ChainVerdict verify_chain(const Chain& chain, const TermPtr& left, const TermPtr& right, const Variety& variety,
                          const DiagPack& pack, const Budget& budget = {});

struct ObligationReport {
  std::string name;       // "idempotence" or "hom <op>"
  std::size_t chain = 0;  // 1-based, file order of obligations
  ChainVerdict verdict;
};

struct CertificateReport {
  DiagCheck pack_check;
  std::vector<ObligationReport> obligations;

  bool ok() const;
  std::string describe() const;
};

CertificateReport verify_certificate(const Certificate& cert, const Variety& variety, const Budget& budget = {});

struct ChainSearchOptions {
  std::size_t depth = 6;
  std::size_t beam = 64;
  /// Cap on (template, W, R-instance) combinations precomputed per search.
  std::size_t max_moves = 2'000'000;
};

struct ChainSearchResult {
  std::optional<Chain> chain;
  std::string diagnostic;
  std::size_t nodes_expanded = 0;
};

/// Bounded search for a chain from `left` to `right`. Nodes are terms up to
/// variety equality. A move plugs an R-instance into a small context over
/// the current term and a pool of auxiliary terms. Every returned step has
/// passed verify_step.
ChainSearchResult search_chain(const TermPtr& left, const TermPtr& right, const Variety& variety,
                               const DiagPack& pack, const ChainSearchOptions& options = {},
                               const Budget& budget = {});

struct CertificateSearchResult {
  std::optional<Certificate> certificate;
  std::string diagnostic;
};

CertificateSearchResult search_certificate(const Variety& variety, const DiagPack& pack,
                                           const ChainSearchOptions& options = {}, const Budget& budget = {});

/// Macro table with `delta(a,b)` bound to the pack.
MacroTable delta_macros(const DiagPack& pack);

/// Certificate file format:
///
///   certificate
///   diag k=2
///   t = add(mul(x,c1),mul(y,c2))
///   e = one,zero
///   e' = zero,one
///   chain idempotence
///   u = add(mul(a0,a1),mul(a0,a2))
///   alpha = x;(one|zero);(zero|one)
///   beta = x;(one|zero);(zero|one)
///   just = a,a,a
///   chain hom add
///   ...
///
/// `delta(a,b)` may be used in any term after the pack block.
Certificate parse_certificate(std::string_view text, const Signature& sig);
/// Prints subterms of the form delta(a,b) with the macro.
std::string format_certificate(const Certificate& cert);
std::string format_term_with_delta(const TermPtr& t, const DiagPack& pack);

}  // namespace ualg
