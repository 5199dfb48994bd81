// Chain search. A node is a term up to variety equality, identified by its
// fingerprint. A move rewrites the current node c into T(alpha) where
// T(beta) = c and (alpha, beta) is an R-instance sitting in slot Z of a
// small context T:
//
//   T = S              S = Z | op(W,...,Z,...,W)
//   T = op(C, S) | op(S, C)   for binary op
//   T = C[S at position p]    when the subterm of C at p equals S(beta)
//
// C is the current node, W an auxiliary term from a fixed pool. Both are
// justified reflexively.

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "ualg/error.hpp"
#include "ualg/witness.hpp"

namespace ualg {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Shape {
  std::size_t op = kNone;  // kNone: bare Z
  std::size_t zpos = 0;
  bool uses_w() const { return op != kNone; }
};

struct Aux {
  TermPtr term;
  Fingerprint fp;
};

struct Instance {
  RInstance r;
  Fingerprint alpha_fp;
  Fingerprint beta_fp;
};

struct Move {
  std::size_t shape;
  std::size_t w;  // kNone when the shape has no W
  std::size_t instance;
  Fingerprint after;
};

struct Context {
  std::size_t op = kNone;  // kNone: no C
  bool c_first = true;
  /// Set when S replaced the subterm of C at this position instead.
  std::optional<std::vector<std::size_t>> path;
};

struct Node {
  Fingerprint fp;
  TermPtr term;
  std::size_t parent = kNone;
  std::size_t move = kNone;
  Context ctx;
};

struct PairFpHash {
  std::size_t operator()(const std::pair<Fingerprint, Fingerprint>& p) const {
    FingerprintHash h;
    return h(p.first) * 31 + h(p.second);
  }
};

std::size_t hamming(const Fingerprint& a, const Fingerprint& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

class Searcher {
 public:
  Searcher(const TermPtr& left, const TermPtr& right, const Variety& variety, const DiagPack& pack,
           const ChainSearchOptions& options, const Budget& budget)
      : left_(left),
        right_(right),
        variety_(variety),
        pack_(pack),
        options_(options),
        budget_(budget),
        sig_(variety.signature()),
        ev_(variety, leaves(), budget) {}

  ChainSearchResult run() {
    ChainSearchResult result;
    const auto start = ev_(*left_);
    target_ = ev_(*right_);
    if (start == target_) {
      result.chain = Chain{};
      result.diagnostic = "endpoints already equal";
      return result;
    }
    build_pool();
    build_instances();
    build_moves();

    std::unordered_set<Fingerprint, FingerprintHash> seen{start};
    nodes_.push_back({start, left_, kNone, kNone, {}});
    std::vector<std::size_t> frontier{0};
    for (std::size_t level = 0; level < options_.depth && !frontier.empty(); ++level) {
      std::vector<std::size_t> next;
      for (auto n : frontier) {
        ++result.nodes_expanded;
        if (auto hit = expand(n, seen, next)) {
          result.chain = reconstruct(*hit);
          result.diagnostic = "found with " + std::to_string(result.chain->size()) + " steps";
          return result;
        }
      }
      std::stable_sort(next.begin(), next.end(), [&](std::size_t a, std::size_t b) {
        return hamming(nodes_[a].fp, target_) < hamming(nodes_[b].fp, target_);
      });
      if (next.size() > options_.beam) next.resize(options_.beam);
      frontier = std::move(next);
    }
    result.diagnostic = "not found <= depth " + std::to_string(options_.depth) + " (beam " +
                        std::to_string(options_.beam) + ")";
    return result;
  }

 private:
  std::vector<TermPtr> leaves() const {
    std::vector<TermPtr> terms{left_, right_};
    for (std::size_t i = 0; i < pack_.k(); ++i) terms.push_back(Term::pair(pack_.e[i], pack_.e_prime[i]));
    return FreeEvaluator::collect_generators(variety_, terms);
  }

  bool covered(const TermPtr& t) const {
    for (const auto& leaf : generators_of(t)) {
      if (!ev_.generator_index(*leaf)) return false;
    }
    return true;
  }

  void add_aux(const TermPtr& t, std::unordered_set<Fingerprint, FingerprintHash>& seen) {
    auto fp = ev_(*t);
    if (seen.insert(fp).second) pool_.push_back({t, std::move(fp)});
  }

  void build_pool() {
    std::unordered_set<Fingerprint, FingerprintHash> seen;
    std::vector<TermPtr> base(ev_.generators().begin(), ev_.generators().end());
    for (std::size_t op = 0; op < sig_.size(); ++op) {
      if (sig_.op(op).arity == 0) base.push_back(Term::op(sig_.op(op).name));
    }
    for (const auto& t : base) add_aux(t, seen);
    for (const auto& end : {left_, right_}) {
      for (const auto& t : subterms(end)) add_aux(t, seen);
    }
    for (std::size_t op = 0; op < sig_.size(); ++op) {
      const auto arity = sig_.op(op).arity;
      if (arity == 0) continue;
      for_each_tuple(base.size(), arity, [&](std::span<const Element> idx) {
        std::vector<TermPtr> args;
        for (auto i : idx) args.push_back(base[i]);
        add_aux(Term::op(sig_.op(op).name, std::move(args)), seen);
      });
    }
  }

  void build_instances() {
    std::vector<TermPtr> constants;
    for (const auto& g : variety_.ground_pool()) constants.push_back(g.witness);
    std::unordered_set<std::pair<Fingerprint, Fingerprint>, PairFpHash> seen;
    auto relation = rewrite_relation(pack_, sig_, constants);
    if (relation.size() * ev_.points() > budget_.max_scan) {
      throw BudgetExceeded("chain search: " + std::to_string(relation.size()) + " R-instances over " +
                           std::to_string(ev_.points()) + " points exceed the scan budget");
    }
    for (auto& r : relation) {
      if (!covered(r.alpha) || !covered(r.beta)) continue;
      auto a = ev_(*r.alpha);
      auto b = ev_(*r.beta);
      if (a == b || !seen.insert({b, a}).second) continue;
      instances_.push_back({std::move(r), std::move(a), std::move(b)});
    }
  }

  Fingerprint apply_shape(const Shape& s, const Fingerprint* w, const Fingerprint& z) const {
    if (!s.uses_w()) return z;
    const auto arity = sig_.op(s.op).arity;
    std::vector<const Fingerprint*> args(arity, w);
    args[s.zpos] = &z;
    return ev_.apply(s.op, args);
  }

  TermPtr shape_term(const Shape& s, const TermPtr& w, const TermPtr& z) const {
    if (!s.uses_w()) return z;
    std::vector<TermPtr> args(sig_.op(s.op).arity, w);
    args[s.zpos] = z;
    return Term::op(sig_.op(s.op).name, std::move(args));
  }

  void build_moves() {
    shapes_.push_back({});
    for (std::size_t op = 0; op < sig_.size(); ++op) {
      for (std::size_t p = 0; p < sig_.op(op).arity; ++p) shapes_.push_back({op, p});
    }
    const std::size_t points = ev_.points();
    std::unordered_set<std::pair<Fingerprint, Fingerprint>, PairFpHash> seen;
    for (std::size_t s = 0; s < shapes_.size(); ++s) {
      const bool needs_w = shapes_[s].uses_w() && sig_.op(shapes_[s].op).arity > 1;
      const std::size_t ws = needs_w ? pool_.size() : 1;
      for (std::size_t w = 0; w < ws; ++w) {
        for (std::size_t i = 0; i < instances_.size(); ++i) {
          if (++tried_ > options_.max_moves || tried_ * points > budget_.max_scan) {
            throw BudgetExceeded("chain search exceeds its move budget");
          }
          const Fingerprint* wfp = needs_w ? &pool_[w].fp : nullptr;
          auto before = apply_shape(shapes_[s], wfp, instances_[i].beta_fp);
          auto after = apply_shape(shapes_[s], wfp, instances_[i].alpha_fp);
          if (before == after || !seen.insert({before, after}).second) continue;
          by_before_[before].push_back(moves_.size());
          moves_.push_back({s, needs_w ? w : kNone, i, std::move(after)});
        }
      }
    }
    for (const auto& [fp, list] : by_before_) keys_.push_back(&fp);
    // Iteration order of the map is unspecified; fix it by first move index.
    std::sort(keys_.begin(), keys_.end(),
              [&](const Fingerprint* a, const Fingerprint* b) { return by_before_[*a][0] < by_before_[*b][0]; });
  }

  TermPtr move_term(const Move& m, bool use_alpha) const {
    const auto w = m.w == kNone ? nullptr : pool_[m.w].term;
    const auto& r = instances_[m.instance].r;
    return shape_term(shapes_[m.shape], w, use_alpha ? r.alpha : r.beta);
  }

  std::optional<std::size_t> offer(std::size_t parent, std::size_t move, Context ctx, Fingerprint fp, TermPtr term,
                                   std::unordered_set<Fingerprint, FingerprintHash>& seen,
                                   std::vector<std::size_t>& next) {
    if (!seen.insert(fp).second) return std::nullopt;
    const bool hit = fp == target_;
    nodes_.push_back({std::move(fp), std::move(term), parent, move, std::move(ctx)});
    next.push_back(nodes_.size() - 1);
    if (hit) return nodes_.size() - 1;
    return std::nullopt;
  }

  static void collect_positions(const TermPtr& t, std::vector<std::size_t>& path,
                                std::vector<std::pair<std::vector<std::size_t>, TermPtr>>& out) {
    if (!path.empty()) out.emplace_back(path, t);
    if (!t->is_op()) return;
    for (std::size_t i = 0; i < t->args().size(); ++i) {
      path.push_back(i);
      collect_positions(t->args()[i], path, out);
      path.pop_back();
    }
  }

  static TermPtr replace_at(const TermPtr& t, std::span<const std::size_t> path, const TermPtr& with) {
    if (path.empty()) return with;
    auto args = t->args();
    args[path[0]] = replace_at(args[path[0]], path.subspan(1), with);
    return Term::op(t->name(), std::move(args));
  }

  std::optional<std::size_t> expand(std::size_t n, std::unordered_set<Fingerprint, FingerprintHash>& seen,
                                    std::vector<std::size_t>& next) {
    const auto fp = nodes_[n].fp;
    const auto cur = nodes_[n].term;
    // The whole node is a before-side.
    if (auto it = by_before_.find(fp); it != by_before_.end()) {
      for (auto m : it->second) {
        if (auto hit = offer(n, m, {}, moves_[m].after, move_term(moves_[m], true), seen, next)) return hit;
      }
    }
    // A proper subterm is a before-side.
    std::vector<std::pair<std::vector<std::size_t>, TermPtr>> positions;
    std::vector<std::size_t> path;
    collect_positions(cur, path, positions);
    for (const auto& [where, sub] : positions) {
      auto it = by_before_.find(ev_(*sub));
      if (it == by_before_.end()) continue;
      for (auto m : it->second) {
        auto term = replace_at(cur, where, move_term(moves_[m], true));
        Context ctx;
        ctx.path = where;
        auto new_fp = ev_(*term);
        if (auto hit = offer(n, m, std::move(ctx), std::move(new_fp), std::move(term), seen, next)) return hit;
      }
    }
    // op(C, S) or op(S, C) with op(C, S(beta)) = C.
    for (std::size_t op = 0; op < sig_.size(); ++op) {
      if (sig_.op(op).arity != 2) continue;
      for (bool c_first : {true, false}) {
        for (const auto* key : keys_) {
          const Fingerprint* args[2] = {&fp, key};
          if (!c_first) std::swap(args[0], args[1]);
          if (ev_.apply(op, args) != fp) continue;
          for (auto m : by_before_.at(*key)) {
            const Fingerprint* out_args[2] = {&fp, &moves_[m].after};
            if (!c_first) std::swap(out_args[0], out_args[1]);
            auto inner = move_term(moves_[m], true);
            auto term = Term::op(sig_.op(op).name, c_first ? std::vector<TermPtr>{cur, inner}
                                                           : std::vector<TermPtr>{inner, cur});
            Context ctx;
            ctx.op = op;
            ctx.c_first = c_first;
            if (auto hit = offer(n, m, ctx, ev_.apply(op, out_args), std::move(term), seen, next)) return hit;
          }
        }
      }
    }
    return std::nullopt;
  }

  // Replaces every variable of `t` by a slot, appending the refl entries.
  TermPtr abstract_variables(const TermPtr& t, ChainStep& step) const {
    std::map<std::string, TermPtr> env;
    for (const auto& v : variables_of(t)) {
      env.emplace(v, Term::var(slot_name(step.alpha.size())));
      step.alpha.push_back(Term::var(v));
      step.beta.push_back(Term::var(v));
      step.just.push_back(Justification::kRefl);
    }
    return substitute_vars(t, env);
  }

  ChainStep make_step(const Node& node) const {
    const auto& m = moves_[node.move];
    const auto& inst = instances_[m.instance];
    const auto& cur = nodes_[node.parent].term;
    ChainStep step;
    TermPtr frame, c_slot, w_slot;
    if (node.ctx.path) {
      frame = abstract_variables(cur, step);
    } else if (node.ctx.op != kNone) {
      c_slot = Term::var(slot_name(step.alpha.size()));
      step.alpha.push_back(cur);
      step.beta.push_back(cur);
      step.just.push_back(Justification::kRefl);
    }
    if (m.w != kNone) {
      w_slot = Term::var(slot_name(step.alpha.size()));
      step.alpha.push_back(pool_[m.w].term);
      step.beta.push_back(pool_[m.w].term);
      step.just.push_back(Justification::kRefl);
    }
    const auto z_slot = Term::var(slot_name(step.alpha.size()));
    step.alpha.push_back(inst.r.alpha);
    step.beta.push_back(inst.r.beta);
    step.just.push_back(inst.r.just);
    auto inner = shape_term(shapes_[m.shape], w_slot, z_slot);
    if (node.ctx.path) {
      step.u = replace_at(frame, *node.ctx.path, inner);
    } else if (node.ctx.op != kNone) {
      step.u = Term::op(sig_.op(node.ctx.op).name, node.ctx.c_first ? std::vector<TermPtr>{c_slot, inner}
                                                                     : std::vector<TermPtr>{inner, c_slot});
    } else {
      step.u = inner;
    }
    return step;
  }

  Chain reconstruct(std::size_t n) const {
    Chain chain;
    for (; nodes_[n].parent != kNone; n = nodes_[n].parent) chain.push_back(make_step(nodes_[n]));
    std::reverse(chain.begin(), chain.end());
    auto verdict = verify_chain(chain, left_, right_, variety_, pack_, budget_);
    if (!verdict.ok) throw Error("chain search produced an invalid step: " + verdict.reason);
    return chain;
  }

  TermPtr left_, right_;
  const Variety& variety_;
  const DiagPack& pack_;
  ChainSearchOptions options_;
  Budget budget_;
  Signature sig_;
  FreeEvaluator ev_;
  Fingerprint target_;
  std::vector<Aux> pool_;
  std::vector<Instance> instances_;
  std::vector<Shape> shapes_;
  std::vector<Move> moves_;
  std::unordered_map<Fingerprint, std::vector<std::size_t>, FingerprintHash> by_before_;
  std::vector<const Fingerprint*> keys_;
  std::vector<Node> nodes_;
  std::size_t tried_ = 0;
};

}  // namespace

ChainSearchResult search_chain(const TermPtr& left, const TermPtr& right, const Variety& variety,
                               const DiagPack& pack, const ChainSearchOptions& options, const Budget& budget) {
  if (options.beam == 0) throw Error("search beam must be positive");
  pack.validate();
  return Searcher(left, right, variety, pack, options, budget).run();
}

CertificateSearchResult search_certificate(const Variety& variety, const DiagPack& pack,
                                           const ChainSearchOptions& options, const Budget& budget) {
  CertificateSearchResult result;
  auto check = check_diag(variety, pack);
  if (!check.ok) {
    result.diagnostic = "pack does not validate: " + check.describe();
    return result;
  }
  Certificate cert;
  cert.pack = pack;
  auto [il, ir] = idempotence_obligation(pack);
  auto found = search_chain(il, ir, variety, pack, options, budget);
  if (!found.chain) {
    result.diagnostic = "idempotence: " + found.diagnostic;
    return result;
  }
  cert.idempotence = std::move(*found.chain);
  const auto& sig = variety.signature();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto& sym = sig.op(op);
    if (sym.arity == 0) continue;
    auto [hl, hr] = hom_obligation(pack, sym);
    auto hf = search_chain(hl, hr, variety, pack, options, budget);
    if (!hf.chain) {
      result.diagnostic = "hom " + sym.name + ": " + hf.diagnostic;
      return result;
    }
    cert.hom.push_back({sym.name, std::move(*hf.chain)});
  }
  result.certificate = std::move(cert);
  result.diagnostic = "found";
  return result;
}

}  // namespace ualg
