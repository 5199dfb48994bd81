#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "ualg/algebra_io.hpp"
#include "ualg/decompose.hpp"
#include "ualg/diagonal.hpp"
#include "ualg/error.hpp"
#include "ualg/free_algebra.hpp"
#include "ualg/witness.hpp"

namespace ualg::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::vector<std::string> inputs;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::size_t max_elements = Budget{}.max_elements;
  std::string out_path;
  std::size_t max_depth = 2;
  std::size_t max_k = 2;
  std::size_t depth = 6;
  std::size_t beam = 64;
  std::size_t generators = 1;

  bool report() const { return format == "report"; }
  Budget budget() const {
    Budget b;
    b.max_elements = max_elements;
    return b;
  }
};

class Command {
 public:
  Command(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  int finish(const std::string& name, bool ok, json payload, const std::string& text) {
    if (cfg_.report()) {
      payload["command"] = name;
      payload["seed"] = cfg_.seed;
      payload["status"] = ok ? "pass" : "fail";
      out_ << payload.dump(2) << "\n";
    } else {
      out_ << text;
    }
    return ok ? kPass : kFail;
  }

  /// Writes a generated file to --out, or returns it for printing.
  std::string emit(const std::string& content) {
    if (cfg_.out_path.empty()) return content;
    std::ofstream f(cfg_.out_path);
    if (!f) throw Error("cannot write '" + cfg_.out_path + "'");
    f << content;
    return "wrote " + cfg_.out_path + "\n";
  }

  Variety load_variety(std::size_t count) const {
    std::vector<AlgebraPtr> algebras;
    for (std::size_t i = 0; i < count; ++i) algebras.push_back(load_algebra(cfg_.inputs[i]));
    return Variety(std::move(algebras), cfg_.budget());
  }

  void need_inputs(std::size_t min, const std::string& usage) const {
    if (cfg_.inputs.size() < min) throw ParseError("usage: " + usage);
  }

 protected:
  const RunConfig& cfg_;
  std::ostream& out_;
};

json failure_json(const IdentityFailure& f) {
  json assignment = json::object();
  for (const auto& [leaf, value] : f.assignment) assignment[leaf->to_string()] = value;
  return {{"algebra", f.algebra}, {"assignment", assignment}, {"left", f.left}, {"right", f.right}};
}

int check_diag_cmd(const RunConfig& cfg, std::ostream& out) {
  Command cmd(cfg, out);
  cmd.need_inputs(2, "ualg check-diag ALGEBRA... PACK");
  auto variety = cmd.load_variety(cfg.inputs.size() - 1);
  auto pack = parse_pack(read_file(cfg.inputs.back()), variety.signature());
  auto result = check_diag(variety, pack);
  json payload{{"pack", format_pack(pack)}};
  if (!result.ok) {
    payload["failed_identity"] = result.failed_identity == 0 ? "t(x,y,e) = x" : "t(x,y,e') = y";
    if (result.failure) payload["failure"] = failure_json(*result.failure);
  }
  return cmd.finish("check-diag", result.ok, payload, (result.ok ? "pass: " : "FAIL: ") + result.describe() + "\n");
}

int search_diag_cmd(const RunConfig& cfg, std::ostream& out) {
  Command cmd(cfg, out);
  cmd.need_inputs(1, "ualg search-diag ALGEBRA...");
  auto variety = cmd.load_variety(cfg.inputs.size());
  DiagSearchOptions opts;
  opts.max_depth = cfg.max_depth;
  opts.max_k = cfg.max_k;
  auto result = search_diag(variety, opts, cfg.budget());
  const bool ok = result.status == DiagSearchStatus::kFound;
  json payload{{"diagnostic", result.diagnostic}, {"terms_tried", result.terms_tried}};
  std::string text;
  if (ok) {
    const auto pack_text = format_pack(*result.pack);
    payload["pack"] = pack_text;
    text = cmd.emit(pack_text);
  } else {
    text = "not found: " + result.diagnostic + "\n";
  }
  return cmd.finish("search-diag", ok, payload, text);
}

std::string factor_label(const Congruence& c) {
  if (c.num_classes() == c.algebra().size()) return "id";
  if (c.num_classes() == 1) return "!";
  return "quotient " + format_partition(c);
}

int decompose_cmd(const RunConfig& cfg, std::ostream& out) {
  Command cmd(cfg, out);
  cmd.need_inputs(3, "ualg decompose X Y HOM [PACK]");
  if (cfg.inputs.size() > 4) throw ParseError("usage: ualg decompose X Y HOM [PACK]");
  auto x = load_algebra(cfg.inputs[0]);
  auto y = load_algebra(cfg.inputs[1]);
  if (!(x->signature() == y->signature())) throw SignatureMismatch("X and Y have different signatures");
  const std::filesystem::path hom_path = cfg.inputs[2];
  auto spec = parse_hom(read_file(hom_path), hom_path.string());
  auto prod = product(x, y).algebra;
  if (spec.map.size() != prod->size()) {
    throw ParseError(hom_path.string() + ": map needs " + std::to_string(prod->size()) + " images");
  }
  AlgebraPtr codomain = spec.codomain_path ? load_algebra(hom_path.parent_path() / *spec.codomain_path)
                                           : induced_codomain(prod, spec.map, spec.name);
  Homomorphism q{prod, codomain, spec.map};

  std::optional<DiagPack> pack;
  json payload;
  std::string text;
  if (cfg.inputs.size() == 4) {
    pack = parse_pack(read_file(cfg.inputs[3]), x->signature());
    auto check = check_diag(Variety({x, y}, cfg.budget()), *pack);
    payload["pack_check"] = check.ok ? "pass" : check.describe();
    if (!check.ok) text += "warning: pack does not validate on X, Y: " + check.describe() + "\n";
  }

  DecomposeResult result;
  try {
    result = decompose(x, y, q, pack ? &*pack : nullptr);
  } catch (const NotACongruence& e) {
    payload["error"] = e.what();
    payload["witness"] = e.witness;
    return cmd.finish("decompose", false, payload, text + "FAIL: " + e.what() + "\n");
  }
  if (!result.ok()) {
    const auto& ce = *result.counterexample;
    payload["counterexample"] = {{"left", {ce.a, ce.b}}, {"right", {ce.c, ce.d}}, {"merged_by_q", ce.merged_by_q}};
    return cmd.finish("decompose", false, payload, text + "FAIL: kernels differ at " + ce.describe() + "\n");
  }
  const auto& d = *result.decomposition;
  payload["e_x"] = format_partition(d.e_x);
  payload["e_y"] = format_partition(d.e_y);
  payload["iso"] = d.iso.map;
  payload["pairs_compared"] = d.pairs_compared;
  text += "pass: q = " + factor_label(d.e_x) + " x " + factor_label(d.e_y) + "\n";
  text += "E_X = " + format_partition(d.e_x) + "\n";
  text += "E_Y = " + format_partition(d.e_y) + "\n";
  const auto ny = d.q_y.codomain->size();
  text += "iso:";
  for (std::size_t z = 0; z < d.iso.map.size(); ++z) {
    text += " " + std::to_string(z) + "->(" + std::to_string(d.iso.map[z] / ny) + "," +
            std::to_string(d.iso.map[z] % ny) + ")";
  }
  text += "\n";
  return cmd.finish("decompose", true, payload, text);
}

json certificate_json(const CertificateReport& report) {
  json obligations = json::array();
  for (const auto& o : report.obligations) {
    json j{{"chain", o.chain}, {"name", o.name}, {"ok", o.verdict.ok}};
    if (o.verdict.step) j["step"] = *o.verdict.step;
    if (o.verdict.position) j["position"] = *o.verdict.position;
    if (!o.verdict.ok) j["reason"] = o.verdict.reason;
    obligations.push_back(j);
  }
  return {{"pack", report.pack_check.ok ? "pass" : report.pack_check.describe()}, {"obligations", obligations}};
}

int verify_cert_cmd(const RunConfig& cfg, std::ostream& out) {
  Command cmd(cfg, out);
  cmd.need_inputs(2, "ualg verify-cert ALGEBRA... CERT");
  auto variety = cmd.load_variety(cfg.inputs.size() - 1);
  auto cert = parse_certificate(read_file(cfg.inputs.back()), variety.signature());
  auto report = verify_certificate(cert, variety, cfg.budget());
  return cmd.finish("verify-cert", report.ok(), certificate_json(report), report.describe());
}

int search_cert_cmd(const RunConfig& cfg, std::ostream& out) {
  Command cmd(cfg, out);
  cmd.need_inputs(2, "ualg search-cert ALGEBRA... PACK");
  auto variety = cmd.load_variety(cfg.inputs.size() - 1);
  auto pack = parse_pack(read_file(cfg.inputs.back()), variety.signature());
  ChainSearchOptions opts;
  opts.depth = cfg.depth;
  opts.beam = cfg.beam;
  auto result = search_certificate(variety, pack, opts, cfg.budget());
  json payload{{"diagnostic", result.diagnostic}};
  if (!result.certificate) return cmd.finish("search-cert", false, payload, "not found: " + result.diagnostic + "\n");
  const auto text = format_certificate(*result.certificate);
  payload["certificate"] = text;
  return cmd.finish("search-cert", true, payload, cmd.emit(text));
}

int free_cmd(const RunConfig& cfg, std::ostream& out) {
  Command cmd(cfg, out);
  cmd.need_inputs(1, "ualg free ALGEBRA... --generators N");
  auto variety = cmd.load_variety(cfg.inputs.size());
  auto fa = free_algebra(variety, cfg.generators, cfg.budget());
  const auto& a = *fa.algebra();
  json elements = json::array();
  std::string text = "F(" + std::to_string(cfg.generators) + ") has " + std::to_string(a.size()) + " elements\n";
  for (Element e = 0; e < a.size(); ++e) {
    elements.push_back(fa.term_for(e)->to_string());
    text += std::to_string(e) + ": " + fa.term_for(e)->to_string() + "\n";
  }
  json payload{{"generators", cfg.generators}, {"size", a.size()}, {"elements", elements}};
  if (!cfg.out_path.empty()) text += cmd.emit(format_algebra(a));
  return cmd.finish("free", true, payload, text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks diagonalizing terms, decompositions and certificates over finitely generated varieties"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("inputs", cfg.inputs, "Input files")->required();
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "report"}));
    sub->add_option("--seed", cfg.seed, "Seed recorded in reports");
    sub->add_option("--max-elements", cfg.max_elements, "Element cap for free algebra closures")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_path, "Write the generated file here");
  };
  auto* check = app.add_subcommand("check-diag", "Validate a diagonalizing pack");
  common(check);
  auto* sdiag = app.add_subcommand("search-diag", "Search for a diagonalizing pack");
  common(sdiag);
  sdiag->add_option("--max-depth", cfg.max_depth, "Maximum term depth");
  sdiag->add_option("--max-k", cfg.max_k, "Maximum number of constant slots");
  auto* dec = app.add_subcommand("decompose", "Decompose a surjection out of X x Y");
  common(dec);
  auto* vcert = app.add_subcommand("verify-cert", "Verify a certificate");
  common(vcert);
  auto* scert = app.add_subcommand("search-cert", "Search for a certificate");
  common(scert);
  scert->add_option("--depth", cfg.depth, "Maximum chain length");
  scert->add_option("--beam", cfg.beam, "Frontier cap per level")->check(CLI::PositiveNumber);
  auto* fr = app.add_subcommand("free", "List a free algebra");
  common(fr);
  fr->add_option("--generators", cfg.generators, "Number of free generators");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInputError;
  }

  try {
    if (check->parsed()) return check_diag_cmd(cfg, out);
    if (sdiag->parsed()) return search_diag_cmd(cfg, out);
    if (dec->parsed()) return decompose_cmd(cfg, out);
    if (vcert->parsed()) return verify_cert_cmd(cfg, out);
    if (scert->parsed()) return search_cert_cmd(cfg, out);
    if (fr->parsed()) return free_cmd(cfg, out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace ualg::cli
