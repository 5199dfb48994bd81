#include "ualg/diagonal.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ualg/error.hpp"
#include "ualg/free_algebra.hpp"
#include "ualg/parse.hpp"

namespace ualg {

std::string pack_slot(std::size_t i) { return "c" + std::to_string(i + 1); }

void DiagPack::validate() const {
  if (!t) throw Error("pack has no term");
  if (e.size() != e_prime.size()) throw Error("pack constant lists differ in length");
  std::set<std::string> allowed{"x", "y"};
  for (std::size_t i = 0; i < k(); ++i) allowed.insert(pack_slot(i));
  if (t->has_pairs()) throw Error("pack term must not contain paired constants");
  for (const auto& v : variables_of(t)) {
    if (!allowed.contains(v)) throw Error("pack term uses undeclared variable '" + v + "'");
  }
  for (const auto* list : {&e, &e_prime}) {
    for (const auto& c : *list) {
      if (!c || !c->is_ground() || c->has_pairs()) throw Error("pack constants must be ground constant terms");
    }
  }
}

std::string DiagCheck::describe() const {
  if (ok) return "pack validates";
  std::string which = failed_identity == 0 ? "t(x,y,e) = x" : "t(x,y,e') = y";
  return "identity " + which + " fails " + (failure ? failure->describe() : std::string{});
}

namespace {

TermPtr instantiate(const DiagPack& pack, const std::vector<TermPtr>& constants) {
  std::map<std::string, TermPtr> env;
  for (std::size_t i = 0; i < constants.size(); ++i) env.emplace(pack_slot(i), constants[i]);
  return substitute_vars(pack.t, env);
}

}  // namespace

DiagCheck check_diag(const Variety& variety, const DiagPack& pack) {
  pack.validate();
  DiagCheck result;
  const TermPtr x = Term::var("x");
  const TermPtr y = Term::var("y");
  if (auto f = variety.counterexample(instantiate(pack, pack.e), x)) {
    result.failed_identity = 0;
    result.failure = std::move(f);
    return result;
  }
  if (auto f = variety.counterexample(instantiate(pack, pack.e_prime), y)) {
    result.failed_identity = 1;
    result.failure = std::move(f);
    return result;
  }
  result.ok = true;
  return result;
}

namespace {

// Semantically deduplicated term enumeration over x, y, c1..ck. Levels
// mirror enumerate_terms; a term is kept only if its meaning is new.
class DedupEnumerator {
 public:
  DedupEnumerator(const Variety& variety, std::size_t k, const Budget& budget)
      : eval_(variety, leaves(k), budget), sig_(variety.signature()) {
    std::vector<std::size_t> level;
    for (std::size_t i = 0; i < eval_.generators().size(); ++i) {
      offer(eval_.generators()[i], eval_.generator_column(i), level);
    }
    for (std::size_t op = 0; op < sig_.size(); ++op) {
      if (sig_.op(op).arity != 0) continue;
      offer(Term::op(sig_.op(op).name), eval_.apply(op, {}), level);
    }
    levels_.push_back(std::move(level));
  }

  static std::vector<TermPtr> leaves(std::size_t k) {
    std::vector<TermPtr> out{Term::var("x"), Term::var("y")};
    for (std::size_t i = 0; i < k; ++i) out.push_back(Term::var(pack_slot(i)));
    return out;
  }

  const FreeEvaluator& evaluator() const { return eval_; }

  /// Indices of the terms first reached at `depth`.
  const std::vector<std::size_t>& level(std::size_t depth, std::size_t& built, std::size_t max_terms) {
    while (levels_.size() <= depth) extend(built, max_terms);
    return levels_[depth];
  }
  const TermPtr& term(std::size_t i) const { return terms_[i]; }
  const Fingerprint& meaning(std::size_t i) const { return meanings_[i]; }

 private:
  void offer(TermPtr t, Fingerprint f, std::vector<std::size_t>& level) {
    if (!seen_.insert(f).second) return;
    level.push_back(terms_.size());
    terms_.push_back(std::move(t));
    meanings_.push_back(std::move(f));
  }

  void extend(std::size_t& built, std::size_t max_terms) {
    const std::size_t pool = terms_.size();
    const std::size_t prev_begin = levels_.back().empty() ? pool : levels_.back().front();
    std::vector<std::size_t> level;
    std::vector<const Fingerprint*> args;
    for (std::size_t op = 0; op < sig_.size(); ++op) {
      const auto arity = sig_.op(op).arity;
      if (arity == 0) continue;
      for_each_tuple(pool, arity, [&](std::span<const Element> idx) {
        if (std::none_of(idx.begin(), idx.end(), [&](Element i) { return i >= prev_begin; })) return;
        if (++built > max_terms) throw BudgetExceeded("diagonal search exceeds " + std::to_string(max_terms) + " terms");
        args.assign(arity, nullptr);
        for (std::size_t i = 0; i < arity; ++i) args[i] = &meanings_[idx[i]];
        auto f = eval_.apply(op, args);
        if (seen_.contains(f)) return;
        std::vector<TermPtr> children;
        for (auto i : idx) children.push_back(terms_[i]);
        offer(Term::op(sig_.op(op).name, std::move(children)), std::move(f), level);
      });
    }
    levels_.push_back(std::move(level));
  }

  FreeEvaluator eval_;
  Signature sig_;
  std::vector<TermPtr> terms_;
  std::vector<Fingerprint> meanings_;
  std::vector<std::vector<std::size_t>> levels_;
  std::unordered_set<Fingerprint, FingerprintHash> seen_;
};

// Indices into the ground pool, odometer order, first index most significant.
bool next_tuple(std::vector<std::size_t>& tuple, std::size_t base) {
  for (std::size_t pos = tuple.size(); pos-- > 0;) {
    if (++tuple[pos] < base) return true;
    tuple[pos] = 0;
  }
  return false;
}

// Does t(x, y, c := tuple) equal the projection onto `target` (0 = x, 1 = y)
// in every generating algebra?
bool projects(const FreeEvaluator& ev, const Fingerprint& meaning, const Variety& variety,
              const std::vector<std::size_t>& tuple, int target) {
  const auto& pool = variety.ground_pool();
  std::vector<Element> values(2 + tuple.size());
  for (std::size_t a = 0; a < variety.generators().size(); ++a) {
    const auto n = static_cast<Element>(variety.generators()[a]->size());
    for (std::size_t i = 0; i < tuple.size(); ++i) values[2 + i] = pool[tuple[i]].values[a];
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) {
        values[0] = x;
        values[1] = y;
        if (meaning[ev.point_index(a, values)] != (target == 0 ? x : y)) return false;
      }
    }
  }
  return true;
}

}  // namespace

DiagSearchResult search_diag(const Variety& variety, const DiagSearchOptions& options, const Budget& budget) {
  DiagSearchResult result;
  const auto& pool = variety.ground_pool();
  if (pool.empty()) {
    result.status = DiagSearchStatus::kNoConstants;
    result.diagnostic = "no constants: F(empty) is empty, so no constant lists can be formed";
    return result;
  }
  std::vector<DedupEnumerator> per_k;
  for (std::size_t k = 0; k <= options.max_k; ++k) per_k.emplace_back(variety, k, budget);
  std::size_t built = 0;

  for (std::size_t depth = 0; depth <= options.max_depth; ++depth) {
    for (std::size_t k = 0; k <= options.max_k; ++k) {
      auto& en = per_k[k];
      for (auto idx : en.level(depth, built, options.max_terms)) {
        const auto& t = en.term(idx);
        ++result.terms_tried;
        // Terms not using every slot were already tried at a smaller k.
        auto vars = variables_of(t);
        bool uses_all = true;
        for (std::size_t i = 0; i < k && uses_all; ++i) {
          uses_all = std::find(vars.begin(), vars.end(), pack_slot(i)) != vars.end();
        }
        if (!uses_all) continue;

        std::optional<std::vector<std::size_t>> first_e, first_e_prime;
        std::vector<std::size_t> tuple(k, 0);
        do {
          if (!first_e && projects(en.evaluator(), en.meaning(idx), variety, tuple, 0)) first_e = tuple;
          if (!first_e_prime && projects(en.evaluator(), en.meaning(idx), variety, tuple, 1)) first_e_prime = tuple;
        } while ((!first_e || !first_e_prime) && next_tuple(tuple, pool.size()));
        if (!first_e || !first_e_prime) continue;

        DiagPack pack;
        pack.t = t;
        for (auto i : *first_e) pack.e.push_back(pool[i].witness);
        for (auto i : *first_e_prime) pack.e_prime.push_back(pool[i].witness);
        result.status = DiagSearchStatus::kFound;
        result.pack = std::move(pack);
        result.diagnostic = "found at depth " + std::to_string(depth) + " with k=" + std::to_string(k);
        return result;
      }
    }
  }
  result.diagnostic = "not found <= depth " + std::to_string(options.max_depth) + ", k <= " +
                      std::to_string(options.max_k);
  return result;
}

TermPtr delta_expand(const TermPtr& a, const TermPtr& b, const DiagPack& pack) {
  Substitution env;
  env.emplace(Term::var("x"), a);
  env.emplace(Term::var("y"), b);
  for (std::size_t i = 0; i < pack.k(); ++i) {
    env.emplace(Term::var(pack_slot(i)), Term::pair(pack.e[i], pack.e_prime[i]));
  }
  return substitute(pack.t, env, false);
}

namespace {

bool match_into(const TermPtr& pattern, const TermPtr& term, const DiagPack& pack, TermPtr& a, TermPtr& b) {
  if (pattern->is_var()) {
    const auto& name = pattern->name();
    if (name == "x" || name == "y") {
      auto& slot = name == "x" ? a : b;
      if (!slot) {
        slot = term;
        return true;
      }
      return *slot == *term;
    }
    for (std::size_t i = 0; i < pack.k(); ++i) {
      if (name == pack_slot(i)) {
        return term->is_pair() && *term->first() == *pack.e[i] && *term->second() == *pack.e_prime[i];
      }
    }
    return false;
  }
  if (!term->is_op() || term->name() != pattern->name() || term->args().size() != pattern->args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < term->args().size(); ++i) {
    if (!match_into(pattern->args()[i], term->args()[i], pack, a, b)) return false;
  }
  return true;
}

}  // namespace

std::optional<std::pair<TermPtr, TermPtr>> match_delta(const TermPtr& term, const DiagPack& pack) {
  TermPtr a, b;
  if (!match_into(pack.t, term, pack, a, b) || !a || !b) return std::nullopt;
  return std::make_pair(a, b);
}

bool pair_generation_test(const Variety& variety, const Budget& budget) {
  auto free2 = free_algebra(variety, 2, budget);
  const auto& f = *free2.algebra();
  const auto n = f.size();
  const auto constants = generated_subalgebra(f, {});
  const Element x = free2.generators()[0];
  const Element y = free2.generators()[1];

  // Closure inside F x F, element (a,b) encoded as a*n + b.
  std::vector<bool> member(n * n, false);
  std::vector<Element> elems;
  auto add = [&](Element a, Element b) {
    const auto code = a * n + b;
    if (!member[code]) {
      member[code] = true;
      elems.push_back(static_cast<Element>(code));
    }
  };
  for (auto c : constants) {
    for (auto d : constants) add(c, d);
  }
  add(x, x);
  add(y, y);
  const auto& sig = f.signature();
  std::size_t scanned = 0;
  std::size_t old_count = 0;
  std::vector<Element> left, right;
  while (old_count < elems.size()) {
    const auto frontier = elems.size();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      const auto arity = sig.op(op).arity;
      if (arity == 0) continue;
      for_each_tuple(frontier, arity, [&](std::span<const Element> idx) {
        if (std::none_of(idx.begin(), idx.end(), [&](Element i) { return i >= old_count; })) return;
        if (++scanned > budget.max_scan) throw BudgetExceeded("pair generation closure exceeds the scan budget");
        left.resize(arity);
        right.resize(arity);
        for (std::size_t i = 0; i < arity; ++i) {
          left[i] = static_cast<Element>(elems[idx[i]] / n);
          right[i] = static_cast<Element>(elems[idx[i]] % n);
        }
        add(f.apply(op, left), f.apply(op, right));
      });
    }
    old_count = frontier;
  }
  return member[x * n + y];
}

DiagPack parse_pack(std::string_view text, const Signature& sig) {
  DiagPack pack;
  std::optional<std::size_t> k;
  bool have_e = false, have_e_prime = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("pack line " + std::to_string(line_no) + ": " + msg); };
  auto value_of = [](const std::string& l) {
    auto pos = l.find('=');
    return l.substr(pos + 1);
  };
  auto key_of = [](const std::string& l) {
    auto pos = l.find('=');
    std::string key = l.substr(0, pos);
    key.erase(std::remove_if(key.begin(), key.end(), [](unsigned char c) { return std::isspace(c); }), key.end());
    return key;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream words(line);
    std::string first;
    words >> first;
    if (first == "diag") {
      std::string kk;
      words >> kk;
      if (kk.rfind("k=", 0) != 0) fail("expected 'diag k=<k>'");
      try {
        k = std::stoul(kk.substr(2));
      } catch (const std::exception&) {
        fail("bad k in '" + kk + "'");
      }
      continue;
    }
    if (line.find('=') == std::string::npos) fail("expected '<key> = <value>'");
    const auto key = key_of(line);
    try {
      if (key == "t") {
        pack.t = parse_term(value_of(line), sig);
      } else if (key == "e") {
        pack.e = parse_term_list(value_of(line), sig, ',');
        have_e = true;
      } else if (key == "e'") {
        pack.e_prime = parse_term_list(value_of(line), sig, ',');
        have_e_prime = true;
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const ParseError& e) {
      if (std::string_view(e.what()).rfind("pack line", 0) == 0) throw;
      fail(e.what());
    }
  }
  if (!k) throw ParseError("pack: missing 'diag k=<k>' header");
  if (!pack.t) throw ParseError("pack: missing 't = <term>'");
  if (*k > 0 && (!have_e || !have_e_prime)) throw ParseError("pack: missing 'e' or 'e'' list");
  if (pack.e.size() != *k || pack.e_prime.size() != *k) {
    throw ParseError("pack: constant lists must have exactly k=" + std::to_string(*k) + " entries");
  }
  try {
    pack.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("pack: ") + e.what());
  }
  return pack;
}

std::string format_pack(const DiagPack& pack) {
  auto join = [](const std::vector<TermPtr>& ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) out += ",";
      out += ts[i]->to_string();
    }
    return out;
  };
  std::string out = "diag k=" + std::to_string(pack.k()) + "\n";
  out += "t = " + pack.t->to_string() + "\n";
  if (pack.k() > 0) {
    out += "e = " + join(pack.e) + "\n";
    out += "e' = " + join(pack.e_prime) + "\n";
  }
  return out;
}

}  // namespace ualg
