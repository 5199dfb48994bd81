#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ualg/finite_algebra.hpp"

namespace ualg {

/// Reads the line-oriented algebra format:
///
///   # comment
///   algebra z4
///   carrier 4
///   names a b c d          (optional)
///   op add/2
///   0 1 2 3                (n^(arity-1) rows of n entries, row-major)
///   ...
///   op zero/0 = 0
///
/// Entries are element indices or declared names. The signature is the
/// sequence of `op` declarations in file order.
FiniteAlgebra parse_algebra(std::string_view text, const std::string& source = "<input>");
AlgebraPtr load_algebra(const std::filesystem::path& path);
std::string format_algebra(const FiniteAlgebra& a);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace ualg
