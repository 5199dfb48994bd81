#pragma once

#include <filesystem>
#include <string>

#include "ualg/finite_algebra.hpp"
#include "ualg/variety.hpp"

namespace fixtures {

inline std::filesystem::path corpus(const std::string& rel) { return std::filesystem::path(UALG_CORPUS_DIR) / rel; }

inline ualg::Signature ring_signature() {
  ualg::Signature sig;
  sig.add("add", 2);
  sig.add("mul", 2);
  sig.add("zero", 0);
  sig.add("one", 0);
  return sig;
}

// Z_n as a commutative ring with 1, built without the corpus files.
inline ualg::AlgebraPtr ring(std::size_t n) {
  std::vector<ualg::Element> add, mul;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      add.push_back(static_cast<ualg::Element>((a + b) % n));
      mul.push_back(static_cast<ualg::Element>((a * b) % n));
    }
  }
  std::vector<std::vector<ualg::Element>> tables{add, mul, {0}, {static_cast<ualg::Element>(1 % n)}};
  return std::make_shared<const ualg::FiniteAlgebra>("z" + std::to_string(n), ring_signature(), n, tables);
}

inline ualg::AlgebraPtr group(std::size_t n) {
  ualg::Signature sig;
  sig.add("add", 2);
  sig.add("zero", 0);
  std::vector<ualg::Element> add;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) add.push_back(static_cast<ualg::Element>((a + b) % n));
  }
  return std::make_shared<const ualg::FiniteAlgebra>("g" + std::to_string(n), sig, n,
                                                     std::vector<std::vector<ualg::Element>>{add, {0}});
}

inline ualg::AlgebraPtr chain_lattice(std::size_t n) {
  ualg::Signature sig;
  sig.add("meet", 2);
  sig.add("join", 2);
  sig.add("bot", 0);
  sig.add("top", 0);
  std::vector<ualg::Element> meet, join;
  for (ualg::Element a = 0; a < n; ++a) {
    for (ualg::Element b = 0; b < n; ++b) {
      meet.push_back(std::min(a, b));
      join.push_back(std::max(a, b));
    }
  }
  return std::make_shared<const ualg::FiniteAlgebra>(
      "chain" + std::to_string(n), sig, n,
      std::vector<std::vector<ualg::Element>>{meet, join, {0}, {static_cast<ualg::Element>(n - 1)}});
}

inline ualg::Variety variety_of(std::initializer_list<ualg::AlgebraPtr> gens) { return ualg::Variety(gens); }

}  // namespace fixtures
