#include "ualg/algebra_io.hpp"

#include <fstream>
#include <sstream>

#include "ualg/error.hpp"

namespace ualg {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct PendingOp {
  std::string name;
  std::size_t arity = 0;
  std::vector<Element> entries;
  std::size_t line = 0;
};

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FiniteAlgebra parse_algebra(std::string_view text, const std::string& source) {
  std::string name;
  std::size_t carrier = 0;
  bool have_carrier = false;
  std::vector<std::string> names;
  std::vector<PendingOp> ops;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + msg);
  };
  auto element = [&](const std::string& tok) -> Element {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == tok) return static_cast<Element>(i);
    }
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty()) fail("bad element '" + tok + "'");
    if (v >= carrier) fail("element " + tok + " outside carrier of size " + std::to_string(carrier));
    return static_cast<Element>(v);
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    const auto& head = toks[0];
    if (head == "algebra") {
      if (toks.size() != 2) fail("expected 'algebra <name>'");
      name = toks[1];
    } else if (head == "carrier") {
      if (toks.size() != 2 || have_carrier) fail("expected a single 'carrier <k>'");
      try {
        carrier = std::stoul(toks[1]);
      } catch (const std::exception&) {
        fail("bad carrier size");
      }
      if (carrier == 0) fail("carrier must be nonempty");
      have_carrier = true;
    } else if (head == "names") {
      if (!have_carrier) fail("'names' before 'carrier'");
      names.assign(toks.begin() + 1, toks.end());
      if (names.size() != carrier) fail("expected " + std::to_string(carrier) + " names");
    } else if (head == "op") {
      if (!have_carrier) fail("'op' before 'carrier'");
      if (toks.size() < 2) fail("expected 'op <sym>/<arity>'");
      auto slash = toks[1].find('/');
      if (slash == std::string::npos) fail("expected 'op <sym>/<arity>'");
      PendingOp op;
      op.name = toks[1].substr(0, slash);
      op.line = line_no;
      try {
        op.arity = std::stoul(toks[1].substr(slash + 1));
      } catch (const std::exception&) {
        fail("bad arity in '" + toks[1] + "'");
      }
      if (op.arity == 0) {
        if (toks.size() != 4 || toks[2] != "=") fail("expected 'op <sym>/0 = <element>'");
        op.entries.push_back(element(toks[3]));
      } else if (toks.size() != 2) {
        fail("table rows go on the lines after 'op'");
      }
      ops.push_back(std::move(op));
    } else {
      if (ops.empty() || ops.back().arity == 0) fail("unexpected line '" + raw + "'");
      auto& op = ops.back();
      if (toks.size() != carrier) fail("table row needs " + std::to_string(carrier) + " entries");
      for (const auto& t : toks) op.entries.push_back(element(t));
    }
  }
  if (!have_carrier) throw ParseError(source + ": missing 'carrier'");
  if (name.empty()) throw ParseError(source + ": missing 'algebra <name>'");

  Signature sig;
  std::vector<std::vector<Element>> tables;
  for (auto& op : ops) {
    line_no = op.line;
    const auto expected = table_size(carrier, op.arity);
    if (op.entries.size() != expected) {
      fail("table for '" + op.name + "' has " + std::to_string(op.entries.size()) + " entries, expected " +
           std::to_string(expected));
    }
    try {
      sig.add(op.name, op.arity);
    } catch (const Error& e) {
      fail(e.what());
    }
    tables.push_back(std::move(op.entries));
  }
  return FiniteAlgebra(name, std::move(sig), carrier, std::move(tables), std::move(names));
}

AlgebraPtr load_algebra(const std::filesystem::path& path) {
  return std::make_shared<const FiniteAlgebra>(parse_algebra(read_file(path), path.string()));
}

std::string format_algebra(const FiniteAlgebra& a) {
  std::ostringstream out;
  const auto n = a.size();
  out << "algebra " << a.name() << "\n";
  out << "carrier " << n << "\n";
  if (!a.element_names().empty()) {
    out << "names";
    for (const auto& nm : a.element_names()) out << " " << nm;
    out << "\n";
  }
  for (std::size_t op = 0; op < a.signature().size(); ++op) {
    const auto& sym = a.signature().op(op);
    out << "op " << sym.name << "/" << sym.arity;
    if (sym.arity == 0) {
      out << " = " << a.constant(op) << "\n";
      continue;
    }
    out << "\n";
    const auto& tbl = a.table(op);
    for (std::size_t i = 0; i < tbl.size(); ++i) {
      out << tbl[i] << ((i + 1) % n == 0 ? "\n" : " ");
    }
  }
  return out.str();
}

}  // namespace ualg
