#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "freemetric/stallings.hpp"
#include "freemetric/word.hpp"

namespace fm {

/// An endomorphism of a free group, given by one image per generator.
/// Maps act on the right: g(phi psi) = (g phi) psi.
class Endomorphism {
 public:
  Endomorphism(BasisPtr basis, std::vector<Word> images);
  static Endomorphism identity(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  std::size_t rank() const { return images_.size(); }
  const Word& image(std::size_t gen) const { return images_.at(gen); }
  const std::vector<Word>& images() const { return images_; }
  /// M_phi = max |a phi| over the basis.
  std::size_t max_image_length() const { return max_image_length_; }

  Word apply(const Word& w) const;
  /// Appends the reduced image of `letters` to `acc` (which must be reduced).
  void apply_into(std::vector<Letter>& acc, std::span<const Letter> letters) const;

  friend bool operator==(const Endomorphism& lhs, const Endomorphism& rhs);

 private:
  BasisPtr basis_;
  std::vector<Word> images_;
  std::size_t max_image_length_ = 0;
};

/// Apply `first`, then `second`.
Endomorphism compose(const Endomorphism& first, const Endomorphism& second);
/// g -> x^-1 g x.
Endomorphism inner(const Word& x);

/// A bijection of the letters that commutes with inversion. Stored as the
/// image of each positive letter.
class SignedPermutation {
 public:
  SignedPermutation(BasisPtr basis, std::vector<Letter> images);
  static SignedPermutation identity(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  Letter operator()(Letter l) const {
    const Letter img = images_[l.gen()];
    return l.sign() > 0 ? img : img.inverse();
  }
  const std::vector<Letter>& images() const { return images_; }

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  BasisPtr basis_;
  std::vector<Letter> images_;
};

Endomorphism perm_auto(const SignedPermutation& pi);
/// a -> a^-1 for every generator.
Endomorphism epsilon(const BasisPtr& basis);

/// mu_{b,a}, mu_{a^-1,b}, mu_{ab,b} on a rank-2 basis.
struct NielsenGenerators {
  Endomorphism swap;
  Endomorphism invert_first;
  Endomorphism multiply;
};
NielsenGenerators nielsen_generators(const BasisPtr& basis);

StallingsGraph image_graph(const Endomorphism& phi);
/// Rank of the image subgroup equals the rank of the basis (free groups are
/// Hopfian, so this is injectivity).
bool is_injective(const Endomorphism& phi);
bool is_automorphism(const Endomorphism& phi);
/// Throws DomainError when phi is not an automorphism.
Endomorphism invert_automorphism(const Endomorphism& phi);

/// Whitehead automorphisms of the second kind for the basis: pairs (A, m)
/// with m in A and m^-1 outside A, excluding the inner ones.
std::vector<Endomorphism> whitehead_automorphisms(const BasisPtr& basis);
/// True iff u belongs to some basis.
bool is_primitive(const Word& u);

/// {"basis": [...], "images": {"a": "a b", ...}}
Endomorphism parse_morphism_json(std::string_view text);
std::string format_morphism_json(const Endomorphism& phi);
/// "a -> a b, b -> b"
std::string format_morphism(const Endomorphism& phi);

}  // namespace fm
