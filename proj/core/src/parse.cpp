#include "ualg/parse.hpp"

#include <cctype>

#include "ualg/error.hpp"

namespace ualg {

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const Signature& sig, const MacroTable* macros)
      : text_(text), sig_(sig), macros_(macros) {}

  std::vector<TermPtr> parse_list(char separator) {
    std::vector<TermPtr> out;
    skip_ws();
    if (at_end()) return out;
    out.push_back(parse());
    while (true) {
      skip_ws();
      if (at_end()) break;
      expect(separator);
      out.push_back(parse());
    }
    return out;
  }

  TermPtr parse_single() {
    auto t = parse();
    skip_ws();
    if (!at_end()) fail("unexpected trailing input");
    return t;
  }

 private:
  TermPtr parse() {
    skip_ws();
    if (at_end()) fail("expected a term");
    if (peek() == '(') return parse_pair();
    auto name = parse_ident();
    skip_ws();
    std::vector<TermPtr> args;
    const bool applied = !at_end() && peek() == '(';
    if (applied) {
      ++pos_;
      args.push_back(parse());
      skip_ws();
      while (!at_end() && peek() == ',') {
        ++pos_;
        args.push_back(parse());
        skip_ws();
      }
      expect(')');
    }
    auto idx = sig_.find(name);
    if (!idx && macros_) {
      if (auto m = macros_->find(name); m != macros_->end()) {
        if (m->second.arity != args.size()) {
          fail("arity mismatch: '" + name + "' expects " + std::to_string(m->second.arity) + " argument(s)");
        }
        return m->second.expand(args);
      }
    }
    if (!idx) {
      if (applied) fail("unknown symbol '" + name + "'");
      return Term::var(std::move(name));
    }
    const auto arity = sig_.op(*idx).arity;
    if (arity != args.size()) {
      fail("arity mismatch: '" + name + "' expects " + std::to_string(arity) + " argument(s), got " +
           std::to_string(args.size()));
    }
    return Term::op(std::move(name), std::move(args));
  }

  TermPtr parse_pair() {
    expect('(');
    auto first = parse();
    skip_ws();
    expect('|');
    auto second = parse();
    skip_ws();
    expect(')');
    for (const auto* c : {&first, &second}) {
      if (!(*c)->is_ground() || (*c)->has_pairs()) {
        fail("malformed paired constant: component '" + (*c)->to_string() + "' is not ground");
      }
    }
    return Term::pair(std::move(first), std::move(second));
  }

  std::string parse_ident() {
    const auto start = pos_;
    auto ok_first = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ok_rest = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    if (at_end() || !ok_first(peek())) fail("expected an identifier");
    ++pos_;
    while (!at_end() && ok_rest(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
  }

  std::string_view text_;
  const Signature& sig_;
  const MacroTable* macros_;
  std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_term(std::string_view text, const Signature& sig, const MacroTable* macros) {
  return TermParser(text, sig, macros).parse_single();
}

std::vector<TermPtr> parse_term_list(std::string_view text, const Signature& sig, char separator,
                                     const MacroTable* macros) {
  return TermParser(text, sig, macros).parse_list(separator);
}

}  // namespace ualg
