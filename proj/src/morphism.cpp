#include "freemetric/morphism.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <json.hpp>

#include "freemetric/errors.hpp"

namespace fm {

Endomorphism::Endomorphism(BasisPtr basis, std::vector<Word> images)
    : basis_(std::move(basis)), images_(std::move(images)) {
  if (!basis_) throw DomainError("null basis");
  if (images_.size() != basis_->rank()) {
    throw DomainError("expected " + std::to_string(basis_->rank()) + " images, got " +
                      std::to_string(images_.size()));
  }
  for (const Word& w : images_) {
    if (!same_basis(basis_, w.basis())) throw DomainError("basis mismatch");
    max_image_length_ = std::max(max_image_length_, w.size());
  }
}

Endomorphism Endomorphism::identity(BasisPtr basis) {
  std::vector<Word> images;
  for (std::size_t g = 0; g < basis->rank(); ++g) images.push_back(Word::generator(basis, g));
  return Endomorphism(std::move(basis), std::move(images));
}

void Endomorphism::apply_into(std::vector<Letter>& acc, std::span<const Letter> letters) const {
  for (Letter l : letters) {
    const Word& img = images_[l.gen()];
    if (l.sign() > 0) {
      append_reduced(acc, img.letters());
    } else {
      append_inverse_reduced(acc, img.letters());
    }
  }
}

Word Endomorphism::apply(const Word& w) const {
  if (!same_basis(basis_, w.basis())) throw DomainError("basis mismatch");
  std::vector<Letter> acc;
  acc.reserve(w.size() * std::max<std::size_t>(1, max_image_length_));
  apply_into(acc, w.letters());
  return Word::from_reduced(basis_, std::move(acc));
}

bool operator==(const Endomorphism& lhs, const Endomorphism& rhs) {
  return same_basis(lhs.basis_, rhs.basis_) && lhs.images_ == rhs.images_;
}

Endomorphism compose(const Endomorphism& first, const Endomorphism& second) {
  if (!same_basis(first.basis(), second.basis())) throw DomainError("basis mismatch");
  std::vector<Word> images;
  images.reserve(first.rank());
  for (const Word& w : first.images()) images.push_back(second.apply(w));
  return Endomorphism(first.basis(), std::move(images));
}

Endomorphism inner(const Word& x) {
  const BasisPtr& basis = x.basis();
  std::vector<Word> images;
  for (std::size_t g = 0; g < basis->rank(); ++g) {
    images.push_back(conjugate(Word::generator(basis, g), x));
  }
  return Endomorphism(basis, std::move(images));
}

SignedPermutation::SignedPermutation(BasisPtr basis, std::vector<Letter> images)
    : basis_(std::move(basis)), images_(std::move(images)) {
  if (images_.size() != basis_->rank()) throw DomainError("permutation table has wrong size");
  std::vector<bool> seen(basis_->rank(), false);
  for (Letter l : images_) {
    if (l.gen() >= basis_->rank() || seen[l.gen()]) {
      throw DomainError("permutation table is not a bijection on the letters");
    }
    seen[l.gen()] = true;
  }
}

SignedPermutation SignedPermutation::identity(BasisPtr basis) {
  std::vector<Letter> images;
  for (std::size_t g = 0; g < basis->rank(); ++g) images.push_back(Letter::make(g, 1));
  return SignedPermutation(std::move(basis), std::move(images));
}

Endomorphism perm_auto(const SignedPermutation& pi) {
  std::vector<Word> images;
  for (Letter l : pi.images()) {
    images.push_back(Word::from_reduced(pi.basis(), {l}));
  }
  return Endomorphism(pi.basis(), std::move(images));
}

Endomorphism epsilon(const BasisPtr& basis) {
  std::vector<Letter> images;
  for (std::size_t g = 0; g < basis->rank(); ++g) images.push_back(Letter::make(g, -1));
  return perm_auto(SignedPermutation(basis, std::move(images)));
}

NielsenGenerators nielsen_generators(const BasisPtr& basis) {
  if (basis->rank() != 2) throw DomainError("Nielsen generators need a rank-2 basis");
  const Word a = Word::generator(basis, 0);
  const Word b = Word::generator(basis, 1);
  return {Endomorphism(basis, {b, a}), Endomorphism(basis, {invert(a), b}),
          Endomorphism(basis, {a * b, b})};
}

StallingsGraph image_graph(const Endomorphism& phi) {
  return StallingsGraph::fold(phi.basis(), phi.images());
}

bool is_injective(const Endomorphism& phi) { return image_graph(phi).rank() == phi.rank(); }

bool is_automorphism(const Endomorphism& phi) {
  const StallingsGraph graph = image_graph(phi);
  if (graph.rank() != phi.rank()) return false;
  for (std::size_t g = 0; g < phi.rank(); ++g) {
    if (!graph.contains(Word::generator(phi.basis(), g))) return false;
  }
  return true;
}

namespace {

// Nielsen reduction of the image tuple. `current[i]` is the i-th tuple entry
// as a word over the basis; `expr[i]` expresses it in the original images,
// with generator j standing for the j-th original image.
struct NielsenState {
  std::vector<Word> current;
  std::vector<Word> expr;
};

std::size_t total_length(const std::vector<Word>& tuple) {
  std::size_t n = 0;
  for (const Word& w : tuple) n += w.size();
  return n;
}

// Candidate moves in a fixed order: entry i, partner j, exponent +1 then -1,
// right multiplication then left.
template <typename Visit>
bool for_each_move(const NielsenState& s, Visit&& visit) {
  const std::size_t n = s.current.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int sign : {1, -1}) {
        const Word pj = sign > 0 ? s.current[j] : invert(s.current[j]);
        const Word ej = sign > 0 ? s.expr[j] : invert(s.expr[j]);
        if (visit(i, s.current[i] * pj, s.expr[i] * ej)) return true;
        if (visit(i, pj * s.current[i], ej * s.expr[i])) return true;
      }
    }
  }
  return false;
}

bool reduce_step(NielsenState& s) {
  return for_each_move(s, [&](std::size_t i, Word next, Word next_expr) {
    if (next.size() >= s.current[i].size()) return false;
    s.current[i] = std::move(next);
    s.expr[i] = std::move(next_expr);
    return true;
  });
}

// Breadth-first search through length-preserving moves until a state with a
// length-reducing move appears.
bool escape_plateau(NielsenState& s, std::size_t max_states) {
  std::set<std::vector<Word>> seen{s.current};
  std::deque<NielsenState> queue{s};
  while (!queue.empty()) {
    NielsenState state = std::move(queue.front());
    queue.pop_front();
    NielsenState probe = state;
    if (reduce_step(probe)) {
      s = std::move(probe);
      return true;
    }
    for_each_move(state, [&](std::size_t i, Word next, Word next_expr) {
      if (next.size() != state.current[i].size()) return false;
      NielsenState child = state;
      child.current[i] = std::move(next);
      child.expr[i] = std::move(next_expr);
      if (seen.insert(child.current).second) queue.push_back(std::move(child));
      return false;
    });
    if (seen.size() > max_states) throw ResourceError("Nielsen reduction plateau too large");
  }
  return false;
}

}  // namespace

Endomorphism invert_automorphism(const Endomorphism& phi) {
  if (!is_automorphism(phi)) throw DomainError("not an automorphism");
  const BasisPtr& basis = phi.basis();
  const std::size_t n = phi.rank();
  NielsenState state{phi.images(), Endomorphism::identity(basis).images()};
  while (total_length(state.current) > n) {
    if (reduce_step(state)) continue;
    if (!escape_plateau(state, 200000)) throw DomainError("Nielsen reduction stalled");
  }
  std::vector<Word> inverse_images(n, Word(basis));
  for (std::size_t i = 0; i < n; ++i) {
    const Letter l = state.current[i][0];
    inverse_images[l.gen()] = l.sign() > 0 ? state.expr[i] : invert(state.expr[i]);
  }
  Endomorphism inverse(basis, std::move(inverse_images));
  if (compose(phi, inverse) != Endomorphism::identity(basis)) {
    throw std::logic_error("automorphism inversion failed verification");
  }
  return inverse;
}

std::vector<Endomorphism> whitehead_automorphisms(const BasisPtr& basis) {
  const std::size_t n = basis->rank();
  std::vector<Endomorphism> out;
  for (std::size_t mc = 0; mc < 2 * n; ++mc) {
    const Letter m{static_cast<std::uint16_t>(mc)};
    const Word mw = Word::from_reduced(basis, {m});
    const Word mi = invert(mw);
    // Letters other than m^{+-1}, indexed for subset enumeration.
    std::vector<Letter> others;
    for (std::size_t c = 0; c < 2 * n; ++c) {
      if (c / 2 != m.gen()) others.push_back(Letter{static_cast<std::uint16_t>(c)});
    }
    const std::size_t subsets = std::size_t{1} << others.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      auto in_set = [&](Letter l) {
        for (std::size_t k = 0; k < others.size(); ++k) {
          if (others[k] == l) return ((mask >> k) & 1) != 0;
        }
        return false;
      };
      std::vector<Word> images;
      for (std::size_t g = 0; g < n; ++g) {
        const Word x = Word::generator(basis, g);
        if (g == m.gen()) {
          images.push_back(x);
          continue;
        }
        const bool pos = in_set(Letter::make(g, 1));
        const bool neg = in_set(Letter::make(g, -1));
        if (pos && neg) {
          images.push_back(mi * x * mw);
        } else if (pos) {
          images.push_back(x * mw);
        } else if (neg) {
          images.push_back(mi * x);
        } else {
          images.push_back(x);
        }
      }
      out.emplace_back(basis, std::move(images));
    }
  }
  return out;
}

bool is_primitive(const Word& u) {
  const auto autos = whitehead_automorphisms(u.basis());
  Word current = cyclic_reduce(u).core;
  if (current.empty()) return false;
  while (current.size() > 1) {
    bool reduced = false;
    for (const Endomorphism& w : autos) {
      Word next = cyclic_reduce(w.apply(current)).core;
      if (next.size() < current.size()) {
        current = std::move(next);
        reduced = true;
        break;
      }
    }
    if (!reduced) return false;
  }
  return true;
}

Endomorphism parse_morphism_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("morphism file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("basis") || !doc.contains("images")) {
    throw ParseError("morphism file needs \"basis\" and \"images\"");
  }
  std::vector<std::string> names;
  for (const auto& n : doc.at("basis")) {
    if (!n.is_string()) throw ParseError("basis entries must be strings");
    names.push_back(n.get<std::string>());
  }
  BasisPtr basis = Basis::make(std::move(names));
  const auto& images = doc.at("images");
  if (!images.is_object()) throw ParseError("\"images\" must be an object");
  for (const auto& [key, value] : images.items()) {
    if (!basis->find(key)) throw DomainError("image given for unknown generator '" + key + "'");
  }
  std::vector<Word> words;
  for (const std::string& name : basis->names()) {
    if (!images.contains(name)) throw ParseError("missing image for '" + name + "'");
    const auto& value = images.at(name);
    if (!value.is_string()) throw ParseError("image of '" + name + "' must be a string");
    words.push_back(parse_word(basis, value.get<std::string>()));
  }
  return Endomorphism(basis, std::move(words));
}

std::string format_morphism_json(const Endomorphism& phi) {
  nlohmann::ordered_json doc;
  doc["basis"] = phi.basis()->names();
  nlohmann::ordered_json images = nlohmann::ordered_json::object();
  for (std::size_t g = 0; g < phi.rank(); ++g) {
    images[phi.basis()->name(g)] = format_word(phi.image(g));
  }
  doc["images"] = images;
  return doc.dump();
}

std::string format_morphism(const Endomorphism& phi) {
  std::string out;
  for (std::size_t g = 0; g < phi.rank(); ++g) {
    if (g) out += ", ";
    out += phi.basis()->name(g) + " -> " + format_word(phi.image(g));
  }
  return out;
}

}  // namespace fm
