#include "ualg/witness.hpp"

#include <algorithm>
#include <sstream>

#include "ualg/error.hpp"

namespace ualg {

std::optional<Justification> justification_from_char(char c) {
  switch (c) {
    case 'a': return Justification::kRefl;
    case 'b': return Justification::kPairToDelta;
    case 'c': return Justification::kDeltaToPair;
    case 'd': return Justification::kHomToDelta;
    case 'e': return Justification::kDeltaToHom;
    default: return std::nullopt;
  }
}

char to_char(Justification j) { return static_cast<char>(j); }

std::string slot_name(std::size_t j) { return "a" + std::to_string(j); }

std::pair<TermPtr, TermPtr> idempotence_obligation(const DiagPack& pack) {
  const auto x = Term::var("x");
  return {delta_expand(x, x, pack), x};
}

std::pair<TermPtr, TermPtr> hom_obligation(const DiagPack& pack, const OpSymbol& s) {
  std::vector<TermPtr> xs, ys, deltas;
  for (std::size_t i = 1; i <= s.arity; ++i) {
    xs.push_back(Term::var("x" + std::to_string(i)));
    ys.push_back(Term::var("y" + std::to_string(i)));
    deltas.push_back(delta_expand(xs.back(), ys.back(), pack));
  }
  return {delta_expand(Term::op(s.name, xs), Term::op(s.name, ys), pack), Term::op(s.name, deltas)};
}

std::vector<RInstance> rewrite_relation(const DiagPack& pack, const Signature& sig, const std::vector<TermPtr>& pool,
                                        std::size_t max_instances) {
  std::vector<RInstance> out;
  auto push = [&](TermPtr side_a, TermPtr side_d, Justification forward, Justification backward) {
    if (out.size() + 2 > max_instances) {
      throw BudgetExceeded("rewrite relation exceeds " + std::to_string(max_instances) + " instances");
    }
    out.push_back({side_a, side_d, forward});
    out.push_back({side_d, side_a, backward});
  };
  for (const auto& w : pool) {
    for (const auto& w2 : pool) {
      push(Term::pair(w, w2), delta_expand(w, w2, pack), Justification::kPairToDelta, Justification::kDeltaToPair);
    }
  }
  const auto m = pool.size();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto& sym = sig.op(op);
    // Each argument is a pair (w, w') from pool x pool.
    for_each_tuple(m * m, sym.arity, [&](std::span<const Element> idx) {
      std::vector<TermPtr> deltas, left, right;
      for (auto i : idx) {
        const auto& w = pool[i / m];
        const auto& w2 = pool[i % m];
        deltas.push_back(delta_expand(w, w2, pack));
        left.push_back(w);
        right.push_back(w2);
      }
      push(Term::op(sym.name, deltas),
           delta_expand(Term::op(sym.name, left), Term::op(sym.name, right), pack), Justification::kHomToDelta,
           Justification::kDeltaToHom);
    });
  }
  return out;
}

namespace {

bool is_constant_term(const TermPtr& t) { return t->is_ground() && !t->has_pairs(); }

bool pair_matches_delta(const TermPtr& p, const TermPtr& d, const DiagPack& pack) {
  if (!p->is_pair()) return false;
  auto m = match_delta(d, pack);
  return m && *m->first == *p->first() && *m->second == *p->second();
}

bool hom_matches_delta(const TermPtr& h, const TermPtr& d, const DiagPack& pack) {
  if (!h->is_op()) return false;
  auto m = match_delta(d, pack);
  if (!m) return false;
  std::vector<TermPtr> left, right;
  for (const auto& arg : h->args()) {
    auto inner = match_delta(arg, pack);
    if (!inner || !is_constant_term(inner->first) || !is_constant_term(inner->second)) return false;
    left.push_back(inner->first);
    right.push_back(inner->second);
  }
  return *m->first == *Term::op(h->name(), left) && *m->second == *Term::op(h->name(), right);
}

std::map<std::string, TermPtr> slot_env(const std::vector<TermPtr>& values) {
  std::map<std::string, TermPtr> env;
  for (std::size_t j = 0; j < values.size(); ++j) env.emplace(slot_name(j), values[j]);
  return env;
}

}  // namespace

bool justifies(Justification just, const TermPtr& alpha, const TermPtr& beta, const DiagPack& pack,
               const Variety& variety) {
  switch (just) {
    case Justification::kRefl:
      return *alpha == *beta || variety.equal(alpha, beta);
    case Justification::kPairToDelta:
    case Justification::kDeltaToPair:
      return pair_matches_delta(alpha, beta, pack) || pair_matches_delta(beta, alpha, pack);
    case Justification::kHomToDelta:
    case Justification::kDeltaToHom:
      return hom_matches_delta(alpha, beta, pack) || hom_matches_delta(beta, alpha, pack);
  }
  return false;
}

StepVerdict verify_step(const ChainStep& step, const TermPtr& left, const TermPtr& right, const Variety& variety,
                        const DiagPack& pack, const Budget& budget) {
  StepVerdict v;
  auto fail = [&](std::string reason, std::optional<std::size_t> pos = std::nullopt) {
    v.ok = false;
    v.position = pos;
    v.reason = std::move(reason);
    return v;
  };
  const auto n = step.slots();
  if (step.beta.size() != n || step.just.size() != n) {
    return fail("slot-count mismatch: " + std::to_string(n) + " alpha, " + std::to_string(step.beta.size()) +
                " beta, " + std::to_string(step.just.size()) + " just");
  }
  if (!step.u) return fail("missing u");
  for (const auto& name : variables_of(step.u)) {
    bool is_slot = false;
    for (std::size_t j = 0; j < n && !is_slot; ++j) is_slot = name == slot_name(j);
    if (!is_slot) return fail("u uses '" + name + "', which is not one of a0..a" + std::to_string(n ? n - 1 : 0));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!justifies(step.just[j], step.alpha[j], step.beta[j], pack, variety)) {
      return fail(std::string("justification '") + to_char(step.just[j]) + "' does not hold for alpha = " +
                      step.alpha[j]->to_string() + ", beta = " + step.beta[j]->to_string(),
                  j);
    }
  }
  const auto from = substitute_vars(step.u, slot_env(step.beta));
  const auto to = substitute_vars(step.u, slot_env(step.alpha));
  if (auto f = variety.counterexample(from, left, budget)) return fail("u(beta) differs from the left endpoint " + f->describe());
  if (auto f = variety.counterexample(to, right, budget)) return fail("u(alpha) differs from the right endpoint " + f->describe());
  return v;
}

ChainVerdict verify_chain(const Chain& chain, const TermPtr& left, const TermPtr& right, const Variety& variety,
                          const DiagPack& pack, const Budget& budget) {
  ChainVerdict v;
  if (chain.empty()) {
    if (auto f = variety.counterexample(left, right, budget)) {
      v.ok = false;
      v.reason = "empty chain but the endpoints differ " + f->describe();
    }
    return v;
  }
  TermPtr current = left;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& step = chain[i];
    TermPtr next = right;
    if (i + 1 < chain.size() && step.u && step.alpha.size() == step.beta.size()) {
      next = substitute_vars(step.u, slot_env(step.alpha));
    }
    auto sv = verify_step(step, current, next, variety, pack, budget);
    if (!sv.ok) {
      v.ok = false;
      v.step = i;
      v.position = sv.position;
      v.reason = sv.reason;
      return v;
    }
    current = next;
  }
  return v;
}

bool CertificateReport::ok() const {
  return pack_check.ok && std::all_of(obligations.begin(), obligations.end(),
                                      [](const ObligationReport& o) { return o.verdict.ok; });
}

std::string CertificateReport::describe() const {
  std::ostringstream out;
  out << "pack: " << pack_check.describe() << "\n";
  for (const auto& o : obligations) {
    out << "chain " << o.chain << " (" << o.name << "): ";
    if (o.verdict.ok) {
      out << "pass\n";
      continue;
    }
    out << "FAIL";
    if (o.verdict.step) out << " at step " << *o.verdict.step;
    if (o.verdict.position) out << ", position " << *o.verdict.position;
    out << ": " << o.verdict.reason << "\n";
  }
  return out.str();
}

CertificateReport verify_certificate(const Certificate& cert, const Variety& variety, const Budget& budget) {
  CertificateReport report;
  report.pack_check = check_diag(variety, cert.pack);
  if (!report.pack_check.ok) return report;

  auto [il, ir] = idempotence_obligation(cert.pack);
  report.obligations.push_back({"idempotence", 1, verify_chain(cert.idempotence, il, ir, variety, cert.pack, budget)});

  const auto& sig = variety.signature();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const auto& sym = sig.op(op);
    auto it = std::find_if(cert.hom.begin(), cert.hom.end(), [&](const HomChain& h) { return h.op == sym.name; });
    if (it == cert.hom.end() && sym.arity == 0) continue;
    ObligationReport o{"hom " + sym.name, report.obligations.size() + 1, {}};
    if (it == cert.hom.end()) {
      o.verdict.ok = false;
      o.verdict.reason = "missing chain for '" + sym.name + "'";
    } else {
      auto [hl, hr] = hom_obligation(cert.pack, sym);
      o.verdict = verify_chain(it->steps, hl, hr, variety, cert.pack, budget);
    }
    report.obligations.push_back(std::move(o));
  }
  for (const auto& h : cert.hom) {
    if (!sig.find(h.op)) {
      ObligationReport o{"hom " + h.op, report.obligations.size() + 1, {}};
      o.verdict.ok = false;
      o.verdict.reason = "'" + h.op + "' is not an operation of the signature";
      report.obligations.push_back(std::move(o));
    }
  }
  return report;
}

MacroTable delta_macros(const DiagPack& pack) {
  MacroTable table;
  table.emplace("delta", TermMacro{2, [pack](const std::vector<TermPtr>& args) {
                                     return delta_expand(args.at(0), args.at(1), pack);
                                   }});
  return table;
}

std::string format_term_with_delta(const TermPtr& t, const DiagPack& pack) {
  if (auto m = match_delta(t, pack)) {
    return "delta(" + format_term_with_delta(m->first, pack) + "," + format_term_with_delta(m->second, pack) + ")";
  }
  if (!t->is_op() || t->args().empty()) return t->to_string();
  std::string out = t->name() + "(";
  for (std::size_t i = 0; i < t->args().size(); ++i) {
    if (i) out += ",";
    out += format_term_with_delta(t->args()[i], pack);
  }
  return out + ")";
}

namespace {

void format_chain(std::ostringstream& out, const Chain& chain, const DiagPack& pack) {
  auto list = [&](const std::vector<TermPtr>& ts) {
    std::string s;
    for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? ";" : "") + format_term_with_delta(ts[i], pack);
    return s;
  };
  for (const auto& step : chain) {
    out << "u = " << format_term_with_delta(step.u, pack) << "\n";
    out << "alpha = " << list(step.alpha) << "\n";
    out << "beta = " << list(step.beta) << "\n";
    out << "just = ";
    for (std::size_t i = 0; i < step.just.size(); ++i) out << (i ? "," : "") << to_char(step.just[i]);
    out << "\n";
  }
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_certificate(const Certificate& cert) {
  std::ostringstream out;
  out << "certificate\n" << format_pack(cert.pack);
  out << "chain idempotence\n";
  format_chain(out, cert.idempotence, cert.pack);
  for (const auto& h : cert.hom) {
    out << "chain hom " << h.op << "\n";
    format_chain(out, h.steps, cert.pack);
  }
  return out.str();
}

Certificate parse_certificate(std::string_view text, const Signature& sig) {
  std::istringstream in{std::string(text)};
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string raw;
  for (std::size_t no = 1; std::getline(in, raw); ++no) {
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto line = trim(raw);
    if (!line.empty()) lines.emplace_back(no, std::move(line));
  }
  if (lines.empty() || lines.front().second != "certificate") {
    throw ParseError("certificate: first line must be 'certificate'");
  }
  std::size_t i = 1;
  std::string pack_text;
  for (; i < lines.size() && lines[i].second.rfind("chain", 0) != 0; ++i) pack_text += lines[i].second + "\n";
  Certificate cert;
  cert.pack = parse_pack(pack_text, sig);
  const auto macros = delta_macros(cert.pack);

  Chain* chain = nullptr;
  bool have_idempotence = false;
  ChainStep* step = nullptr;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("certificate line " + std::to_string(line_no) + ": " + msg);
  };
  auto check_step = [&]() {
    if (!step) return;
    if (!step->u || step->alpha.empty() != step->beta.empty() || step->just.size() != step->alpha.size() ||
        step->beta.size() != step->alpha.size()) {
      fail("incomplete step: need u, alpha, beta and just with matching lengths");
    }
  };

  for (; i < lines.size(); ++i) {
    line_no = lines[i].first;
    const auto& line = lines[i].second;
    try {
      if (line.rfind("chain", 0) == 0) {
        check_step();
        step = nullptr;
        std::istringstream words(line);
        std::string kw, kind, op;
        words >> kw >> kind;
        if (kind == "idempotence") {
          if (have_idempotence) fail("duplicate idempotence chain");
          have_idempotence = true;
          chain = &cert.idempotence;
        } else if (kind == "hom" && (words >> op)) {
          if (!sig.find(op)) fail("unknown operation '" + op + "'");
          for (const auto& h : cert.hom) {
            if (h.op == op) fail("duplicate chain for '" + op + "'");
          }
          cert.hom.push_back({op, {}});
          chain = &cert.hom.back().steps;
        } else {
          fail("expected 'chain idempotence' or 'chain hom <op>'");
        }
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("expected '<key> = <value>'");
      const auto key = trim(line.substr(0, eq));
      const auto value = line.substr(eq + 1);
      if (!chain) fail("step outside a chain block");
      if (key == "u") {
        check_step();
        chain->push_back({parse_term(value, sig, &macros), {}, {}, {}});
        step = &chain->back();
        continue;
      }
      if (!step) fail("'" + key + "' before 'u'");
      if (key == "alpha") {
        step->alpha = parse_term_list(value, sig, ';', &macros);
      } else if (key == "beta") {
        step->beta = parse_term_list(value, sig, ';', &macros);
      } else if (key == "just") {
        step->just.clear();
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) {
          item = trim(item);
          auto j = item.size() == 1 ? justification_from_char(item[0]) : std::nullopt;
          if (!j) fail("bad justification '" + item + "'");
          step->just.push_back(*j);
        }
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const ParseError& e) {
      if (std::string_view(e.what()).rfind("certificate line", 0) == 0) throw;
      fail(e.what());
    }
  }
  check_step();
  if (!have_idempotence) throw ParseError("certificate: missing 'chain idempotence'");
  return cert;
}

}  // namespace ualg
