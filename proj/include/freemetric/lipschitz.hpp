#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "freemetric/morphism.hpp"

namespace fm {

/// Decision for membership of an endomorphism in Per(F)Inn(F), the
/// automorphisms that are Lipschitz for the visual metrics of the basis.
struct InPerInn {
  SignedPermutation pi;
  Word z;  ///< phi = perm_auto(pi) followed by inner(z)
  bool verified = false;
};

enum class RefutationKind { NotAutomorphism, CyclicLengthObstruction, NoCommonConjugator, NotPermutation };

struct NotInPerInn {
  RefutationKind kind;
  /// Generator whose image has cyclic length != 1 (CyclicLengthObstruction).
  std::optional<std::size_t> witness_generator;
  std::size_t witness_cyclic_length = 0;
};

struct LipschitzClassification {
  std::variant<InPerInn, NotInPerInn> verdict;

  bool in_per_inn() const { return std::holds_alternative<InPerInn>(verdict); }
};

LipschitzClassification classify_per_inn(const Endomorphism& phi);

std::string refutation_name(RefutationKind kind);
/// key=value lines: verdict, pi (as a table over letters), z, verified.
std::string format_classification(const LipschitzClassification& c, const Basis& basis);

/// Q = 2 d(1,x) + d(p, x p): the additive constant under which inner(x)
/// lowers basis Gromov products at basepoint p by at most Q.
std::uint64_t inner_lipschitz_Q(const Word& x, const Word& p);

/// Q = d(p, p phi) for an isometry of the basis word metric. Throws
/// DomainError when a length change shows up on the radius-3 ball.
std::uint64_t isometry_lipschitz_Q(const Endomorphism& phi, const Word& p);

/// Some g in the ball of the given radius with |g phi|_c < |g|_c, in shortlex
/// order, if one exists.
std::optional<Word> fexp_counterexample(const Endomorphism& phi, unsigned radius);

/// Identity checks mu^-1 eps mu = eps, eps, eps lambda_b for the three
/// Nielsen generators of Aut(F_2).
struct TwoBasisRelations {
  bool swap = false;
  bool invert_first = false;
  bool multiply = false;
  bool all() const { return swap && invert_first && multiply; }
};
TwoBasisRelations twobasis_relations(const BasisPtr& basis);

}  // namespace fm
