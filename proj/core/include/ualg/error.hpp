#pragma once

#include <stdexcept>
#include <string>

namespace ualg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (terms, algebra files, packs, certificates).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Algebras or terms that do not share a signature.
class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its configured element or scan budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace ualg
