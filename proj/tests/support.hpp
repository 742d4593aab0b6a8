#pragma once

#include <random>
#include <string>
#include <vector>

#include "freemetric/morphism.hpp"
#include "freemetric/word.hpp"

namespace fmtest {

inline const fm::BasisPtr& ab() {
  static const fm::BasisPtr b = fm::Basis::parse("a,b");
  return b;
}

inline const fm::BasisPtr& abc() {
  static const fm::BasisPtr b = fm::Basis::parse("a,b,c");
  return b;
}

inline fm::Word W(const std::string& text, const fm::BasisPtr& basis = ab()) {
  return fm::parse_word(basis, text);
}

inline fm::Endomorphism M(const std::vector<std::string>& images,
                          const fm::BasisPtr& basis = ab()) {
  std::vector<fm::Word> ws;
  for (const auto& s : images) ws.push_back(W(s, basis));
  return fm::Endomorphism(basis, std::move(ws));
}

/// Reduced word of exactly `len` letters, uniform over choices at each step.
inline fm::Word random_word(std::mt19937_64& rng, std::size_t len,
                            const fm::BasisPtr& basis = ab()) {
  std::vector<fm::Letter> out;
  std::uniform_int_distribution<unsigned> pick(0, 2 * basis->rank() - 1);
  while (out.size() < len) {
    fm::Letter l{static_cast<std::uint16_t>(pick(rng))};
    if (!out.empty() && out.back().cancels(l)) continue;
    out.push_back(l);
  }
  return fm::Word::from_reduced(basis, std::move(out));
}

inline fm::Word random_word_upto(std::mt19937_64& rng, std::size_t maxlen,
                                 const fm::BasisPtr& basis = ab()) {
  std::uniform_int_distribution<std::size_t> len(0, maxlen);
  return random_word(rng, len(rng), basis);
}

/// Random automorphism of F_2 from Nielsen generators and inner automorphisms.
inline fm::Endomorphism random_automorphism(std::mt19937_64& rng, unsigned steps) {
  const auto ng = fm::nielsen_generators(ab());
  fm::Endomorphism phi = fm::Endomorphism::identity(ab());
  std::uniform_int_distribution<int> kind(0, 3);
  for (unsigned i = 0; i < steps; ++i) {
    switch (kind(rng)) {
      case 0: phi = fm::compose(phi, ng.swap); break;
      case 1: phi = fm::compose(phi, ng.invert_first); break;
      case 2: phi = fm::compose(phi, ng.multiply); break;
      default: phi = fm::compose(phi, fm::inner(random_word_upto(rng, 3))); break;
    }
  }
  return phi;
}

}  // namespace fmtest
