#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ualg/term.hpp"

namespace ualg {

/// A named term macro, expanded at parse time (e.g. `delta(a,b)` in
/// certificate files). Macros are only consulted for names that are not
/// operation symbols of the signature.
struct TermMacro {
  std::size_t arity = 0;
  std::function<TermPtr(const std::vector<TermPtr>&)> expand;
};
using MacroTable = std::map<std::string, TermMacro, std::less<>>;

/// Parses the prefix term grammar:
///
///   term := ident | ident "(" term ("," term)* ")" | "(" term "|" term ")"
///
/// A bare identifier is a constant when the signature has an arity-0 symbol
/// of that name, otherwise a variable. Throws ParseError on unknown symbols,
/// arity mismatches and non-ground pair components.
TermPtr parse_term(std::string_view text, const Signature& sig, const MacroTable* macros = nullptr);

/// Parses `term sep term sep ...`; an all-blank input yields an empty list.
std::vector<TermPtr> parse_term_list(std::string_view text, const Signature& sig, char separator,
                                     const MacroTable* macros = nullptr);

}  // namespace ualg
