#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fm {

class Basis;
using BasisPtr = std::shared_ptr<const Basis>;

/// Ordered list of generator names. Names match [a-z][a-z0-9_]* and are
/// unique; the empty basis is rejected.
class Basis {
 public:
  static constexpr std::size_t kMaxRank = 0x7fff;

  static BasisPtr make(std::vector<std::string> names);
  /// "a,b,c" or "a b c".
  static BasisPtr parse(std::string_view list);

  std::size_t rank() const { return names_.size(); }
  const std::string& name(std::size_t gen) const { return names_.at(gen); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const Basis& other) const { return names_ == other.names_; }

 private:
  explicit Basis(std::vector<std::string> names) : names_(std::move(names)) {}
  std::vector<std::string> names_;
};

bool same_basis(const BasisPtr& lhs, const BasisPtr& rhs);

/// A signed generator packed as 2*gen + (sign < 0). The packed order is the
/// canonical letter order: generator id first, then +1 before -1.
struct Letter {
  std::uint16_t code = 0;

  static constexpr Letter make(std::size_t gen, int sign) {
    return Letter{static_cast<std::uint16_t>(2 * gen + (sign < 0 ? 1 : 0))};
  }
  constexpr std::size_t gen() const { return code >> 1; }
  constexpr int sign() const { return (code & 1) ? -1 : 1; }
  constexpr Letter inverse() const {
    return Letter{static_cast<std::uint16_t>(code ^ 1)};
  }
  constexpr bool cancels(Letter other) const { return (code ^ other.code) == 1; }

  friend constexpr auto operator<=>(const Letter&, const Letter&) = default;
};

/// Appends `tail` to `acc` with free cancellation at the junction and inside
/// `tail`. `acc` must already be reduced.
void append_reduced(std::vector<Letter>& acc, std::span<const Letter> tail);

/// Appends the inverse of `tail` to `acc` with free cancellation.
void append_inverse_reduced(std::vector<Letter>& acc, std::span<const Letter> tail);

std::size_t common_prefix_length(std::span<const Letter> u, std::span<const Letter> v);

/// A freely reduced word over a basis. The empty word is the identity.
class Word {
 public:
  explicit Word(BasisPtr basis);
  /// Reduces `raw`. Throws DomainError on a generator index outside the basis.
  Word(BasisPtr basis, std::span<const Letter> raw);

  static Word generator(BasisPtr basis, std::size_t gen, int sign = 1);
  /// Takes ownership of letters already known to be reduced and in range.
  static Word from_reduced(BasisPtr basis, std::vector<Letter> letters);

  const BasisPtr& basis() const { return basis_; }
  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  friend bool operator==(const Word& lhs, const Word& rhs);
  /// Shortlex order on letters.
  friend std::strong_ordering operator<=>(const Word& lhs, const Word& rhs);

 private:
  BasisPtr basis_;
  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const;
};

std::uint64_t hash_letters(std::span<const Letter> letters);

Word reduce(const BasisPtr& basis, std::span<const Letter> raw);
Word multiply(const Word& u, const Word& v);
Word operator*(const Word& u, const Word& v);
Word invert(const Word& u);
Word power(const Word& u, long long exponent);
Word reversal(const Word& u);
/// x^-1 u x.
Word conjugate(const Word& u, const Word& x);

struct CyclicReduction {
  Word core;
  Word conj;  ///< u = conj^-1 * core * conj
};

CyclicReduction cyclic_reduce(const Word& u);
std::size_t cyclic_length(const Word& u);
Word common_prefix(const Word& u, const Word& v);

/// Index of the lexicographically least rotation (Booth).
std::size_t least_rotation(std::span<const Letter> letters);
bool is_conjugate(const Word& u, const Word& v);

/// All reduced words of length <= radius in shortlex order.
std::vector<Word> ball(const BasisPtr& basis, unsigned radius);
/// Number of reduced words of length <= radius.
std::uint64_t ball_size(std::size_t rank, unsigned radius);

/// Word grammar: tokens separated by whitespace or '*'; token is `name` or
/// `name^k` with k a (possibly negative) integer; `1` is the identity.
Word parse_word(const BasisPtr& basis, std::string_view text);
/// Inverse of parse_word: runs collapse to powers, identity prints as `1`.
std::string format_word(const Word& w);
std::string format_letter(const Basis& basis, Letter l);

}  // namespace fm
