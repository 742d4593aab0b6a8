#include "freemetric/lipschitz.hpp"

#include <algorithm>
#include <limits>

#include "freemetric/errors.hpp"
#include "freemetric/metric.hpp"

namespace fm {

namespace {

// True iff w is a (possibly empty or negative) power of the letter b.
bool is_power_of(const Word& w, Letter b) {
  if (w.empty()) return true;
  const Letter first = w[0];
  if (first != b && first != b.inverse()) return false;
  return std::all_of(w.letters().begin(), w.letters().end(), [&](Letter l) { return l == first; });
}

Word letter_power(const BasisPtr& basis, Letter b, long long k) {
  return power(Word::from_reduced(basis, {b}), k);
}

}  // namespace

LipschitzClassification classify_per_inn(const Endomorphism& phi) {
  if (!is_automorphism(phi)) return {NotInPerInn{RefutationKind::NotAutomorphism, std::nullopt, 0}};
  const BasisPtr& basis = phi.basis();
  const std::size_t n = phi.rank();

  // a phi = w_a^-1 b_a w_a with b_a a single letter.
  std::vector<Letter> cores;
  std::vector<Word> conj;
  for (std::size_t a = 0; a < n; ++a) {
    CyclicReduction cr = cyclic_reduce(phi.image(a));
    if (cr.core.size() != 1) {
      return {NotInPerInn{RefutationKind::CyclicLengthObstruction, a, cr.core.size()}};
    }
    cores.push_back(cr.core[0]);
    conj.push_back(std::move(cr.conj));
  }

  // z ranges over the intersection of the cosets <b_a> w_a. Parametrise by
  // z = b_0^k w_0; each other generator demands b_0^k c_a in <b_a> with
  // c_a = w_0 w_a^-1, which confines k to |k| <= |c_a| + 2 unless b_a is a
  // power of b_0.
  std::vector<Word> offsets;
  long long bound = static_cast<long long>(conj[0].size()) + 1;
  for (std::size_t a = 1; a < n; ++a) {
    offsets.push_back(conj[0] * invert(conj[a]));
    bound = std::max(bound, static_cast<long long>(offsets.back().size()) + 2);
  }
  std::optional<Word> best;
  for (long long k = -bound; k <= bound; ++k) {
    const Word head = letter_power(basis, cores[0], k);
    bool ok = true;
    for (std::size_t a = 1; a < n && ok; ++a) ok = is_power_of(head * offsets[a - 1], cores[a]);
    if (!ok) continue;
    Word z = head * conj[0];
    if (!best || z.size() < best->size()) best = std::move(z);
  }
  if (!best) return {NotInPerInn{RefutationKind::NoCommonConjugator, std::nullopt, 0}};

  std::vector<bool> seen(n, false);
  for (Letter b : cores) {
    if (seen[b.gen()]) return {NotInPerInn{RefutationKind::NotPermutation, std::nullopt, 0}};
    seen[b.gen()] = true;
  }
  InPerInn found{SignedPermutation(basis, cores), *best, false};
  found.verified = compose(perm_auto(found.pi), inner(found.z)) == phi;
  return {std::move(found)};
}

std::string refutation_name(RefutationKind kind) {
  switch (kind) {
    case RefutationKind::NotAutomorphism: return "NotAutomorphism";
    case RefutationKind::CyclicLengthObstruction: return "CyclicLengthObstruction";
    case RefutationKind::NoCommonConjugator: return "NoCommonConjugator";
    case RefutationKind::NotPermutation: return "NotPermutation";
  }
  return "Unknown";
}

std::string format_classification(const LipschitzClassification& c, const Basis& basis) {
  std::string out;
  if (const auto* in = std::get_if<InPerInn>(&c.verdict)) {
    out += "verdict=InPerInn\n";
    out += "pi=";
    for (std::size_t g = 0; g < basis.rank(); ++g) {
      for (int sign : {1, -1}) {
        const Letter l = Letter::make(g, sign);
        if (g || sign < 0) out += ",";
        out += format_letter(basis, l) + "->" + format_letter(basis, in->pi(l));
      }
    }
    out += "\nz=" + format_word(in->z) + "\n";
    out += std::string("verified=") + (in->verified ? "true" : "false") + "\n";
  } else {
    const auto& no = std::get<NotInPerInn>(c.verdict);
    out += "verdict=NotInPerInn\n";
    out += "reason=" + refutation_name(no.kind) + "\n";
    if (no.witness_generator) {
      out += "witness=" + basis.name(*no.witness_generator) + "\n";
      out += "witness_cyclic_length=" + std::to_string(no.witness_cyclic_length) + "\n";
    }
  }
  out += "metric=basis visual\n";
  return out;
}

std::uint64_t inner_lipschitz_Q(const Word& x, const Word& p) {
  return 2 * x.size() + dist_basis(p, x * p);
}

std::uint64_t isometry_lipschitz_Q(const Endomorphism& phi, const Word& p) {
  for (const Word& g : ball(phi.basis(), 3)) {
    if (phi.apply(g).size() != g.size()) {
      throw DomainError("not an isometry of the basis word metric: |" + format_word(g) +
                        "| changes under the map");
    }
  }
  return dist_basis(p, phi.apply(p));
}

std::optional<Word> fexp_counterexample(const Endomorphism& phi, unsigned radius) {
  for (const Word& g : ball(phi.basis(), radius)) {
    if (cyclic_length(phi.apply(g)) < cyclic_length(g)) return g;
  }
  return std::nullopt;
}

TwoBasisRelations twobasis_relations(const BasisPtr& basis) {
  const auto [swap, invert_first, multiply] = nielsen_generators(basis);
  const Endomorphism eps = epsilon(basis);
  auto conjugated = [&](const Endomorphism& mu) {
    return compose(compose(invert_automorphism(mu), eps), mu);
  };
  const Word b = Word::generator(basis, 1);
  return {conjugated(swap) == eps, conjugated(invert_first) == eps,
          conjugated(multiply) == compose(eps, inner(b))};
}

}  // namespace fm
