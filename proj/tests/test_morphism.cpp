#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "freemetric/errors.hpp"
#include "freemetric/morphism.hpp"
#include "freemetric/stallings.hpp"
#include "support.hpp"

using namespace fm;
using fmtest::ab;
using fmtest::M;
using fmtest::W;

namespace {

std::size_t fold_rank(std::vector<Word> gens) {
  return StallingsGraph::fold(ab(), gens).rank();
}

bool generates_f2(const Word& u, const Word& v) {
  std::vector<Word> gens{u, v};
  auto g = StallingsGraph::fold(ab(), gens);
  return g.vertex_count() == 1 && g.edge_count() == 2;
}

}  // namespace

TEST_CASE("apply") {
  CHECK(M({"a b", "b"}).apply(W("a b^-1")) == W("a"));
  CHECK(M({"a b", "b"}).apply(W("1")).empty());
  CHECK(M({"a^2", "b^2"}).apply(W("a b")) == W("a^2 b^2"));
  CHECK_THROWS_AS(M({"a"}), DomainError);
}

TEST_CASE("compose and inner") {
  const auto phi = M({"a b^2", "b a"});
  CHECK(compose(phi, Endomorphism::identity(ab())) == phi);
  CHECK(compose(epsilon(ab()), epsilon(ab())) == Endomorphism::identity(ab()));
  CHECK(compose(inner(W("a")), inner(W("b"))) == inner(W("a b")));
  CHECK(inner(W("a")) == M({"a", "a^-1 b a"}));
  CHECK(inner(W("1")) == Endomorphism::identity(ab()));
  CHECK(inner(W("a b")).image(0) == W("b^-1 a b"));
  // right action: a(phi psi) = (a phi) psi
  const auto psi = M({"b", "a^-1"});
  CHECK(compose(phi, psi).apply(W("a")) == psi.apply(phi.apply(W("a"))));
}

TEST_CASE("permutation automorphisms and Nielsen generators") {
  const Letter a = Letter::make(0, 1), b = Letter::make(1, 1);
  CHECK(perm_auto(SignedPermutation(ab(), {b, a})) == M({"b", "a"}));
  CHECK(epsilon(ab()) == M({"a^-1", "b^-1"}));
  CHECK(perm_auto(SignedPermutation::identity(ab())) == Endomorphism::identity(ab()));
  CHECK_THROWS(SignedPermutation(ab(), {a, a.inverse()}));
  const auto ng = nielsen_generators(ab());
  CHECK(ng.swap.apply(W("a b")) == W("b a"));
  CHECK(ng.multiply.apply(W("a")) == W("a b"));
  CHECK(compose(ng.invert_first, ng.invert_first) == Endomorphism::identity(ab()));
}

TEST_CASE("stallings folding") {
  CHECK(fold_rank({W("a^2"), W("a b")}) == 2);
  CHECK(fold_rank({W("a b a^-1")}) == 1);
  CHECK(fold_rank({W("a"), W("a^-1")}) == 1);
  CHECK(fold_rank({W("a"), W("b"), W("a b")}) == 2);
  std::vector<Word> sq{W("a^2"), W("b^2")};
  auto g = StallingsGraph::fold(ab(), sq);
  CHECK(g.contains(W("a^2 b^2")));
  CHECK_FALSE(g.contains(W("a")));
  CHECK(g.contains(W("1")));
  CHECK(g.vertex_count() == 3);
  CHECK(g.edges().size() == g.edge_count());
}

TEST_CASE("folding is independent of generator order") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    std::vector<Word> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(fmtest::random_word_upto(rng, 6));
    auto base = StallingsGraph::fold(ab(), gens);
    for (int s = 0; s < 5; ++s) {
      std::shuffle(gens.begin(), gens.end(), rng);
      auto g = StallingsGraph::fold(ab(), gens);
      CHECK(g.rank() == base.rank());
      CHECK(g.vertex_count() == base.vertex_count());
      for (int k = 0; k < 10; ++k) {
        const Word w = fmtest::random_word_upto(rng, 8);
        CHECK(g.contains(w) == base.contains(w));
      }
    }
    for (const auto& x : gens) CHECK(base.contains(x));
  }
}

TEST_CASE("injectivity and automorphisms") {
  const auto mu = nielsen_generators(ab()).multiply;
  CHECK(is_injective(M({"a^2", "b^2"})));
  CHECK_FALSE(is_injective(M({"a", "a"})));
  CHECK(is_injective(mu));
  CHECK(is_automorphism(mu));
  CHECK_FALSE(is_automorphism(M({"a^2", "b^2"})));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) CHECK(is_automorphism(inner(fmtest::random_word_upto(rng, 8))));
}

TEST_CASE("inversion") {
  const auto mu = nielsen_generators(ab()).multiply;
  CHECK(invert_automorphism(mu) == M({"a b^-1", "b"}));
  CHECK(invert_automorphism(epsilon(ab())) == epsilon(ab()));
  const Word x = W("a b^-1 a^2");
  CHECK(invert_automorphism(inner(x)) == inner(invert(x)));
  CHECK_THROWS_AS(invert_automorphism(M({"a^2", "b^2"})), DomainError);

  std::mt19937_64 rng(2024);
  const auto id = Endomorphism::identity(ab());
  for (int i = 0; i < 100; ++i) {
    const auto phi = fmtest::random_automorphism(rng, 12);
    const auto inv = invert_automorphism(phi);
    CHECK(compose(phi, inv) == id);
    CHECK(compose(inv, phi) == id);
  }
}

TEST_CASE("homomorphism and the inner relation") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto phi = M({format_word(fmtest::random_word_upto(rng, 4)),
                        format_word(fmtest::random_word_upto(rng, 4))});
    const Word u = fmtest::random_word_upto(rng, 8), v = fmtest::random_word_upto(rng, 8);
    CHECK(phi.apply(u * v) == phi.apply(u) * phi.apply(v));
    const Word x = fmtest::random_word_upto(rng, 5);
    CHECK(compose(inner(x), phi) == compose(phi, inner(phi.apply(x))));
    if (is_automorphism(phi)) CHECK(is_injective(phi));
  }
}

TEST_CASE("primitive elements") {
  CHECK(is_primitive(W("a")));
  CHECK_FALSE(is_primitive(W("a^2")));
  CHECK_FALSE(is_primitive(W("a b a^2 b^2")));
  CHECK_FALSE(is_primitive(W("1")));
  CHECK(is_primitive(W("a b a^-1 b^2 a^-1")) == is_primitive(W("b a^-1 b^2")));
  CHECK(is_primitive(W("a b c", fmtest::abc())));
  CHECK_FALSE(is_primitive(W("a b a^-1 b^-1")));
  CHECK(whitehead_automorphisms(ab()).size() > 0);
  for (const auto& w : whitehead_automorphisms(ab())) CHECK(is_automorphism(w));
}

TEST_CASE("is_primitive agrees with a complement search") {
  const auto words = ball(ab(), 6);
  std::size_t count = 0;
  for (const auto& u : words) {
    if (u.empty()) continue;
    bool oracle = false;
    for (const auto& v : words) {
      if (!v.empty() && generates_f2(u, v)) {
        oracle = true;
        break;
      }
    }
    count += oracle;
    if (is_primitive(u) != oracle) FAIL_CHECK(format_word(u));
  }
  CHECK(count > 100);
}

TEST_CASE("morphism json") {
  const auto phi = parse_morphism_json(R"({"basis":["a","b"],"images":{"a":"a b","b":"b"}})");
  CHECK(phi == nielsen_generators(ab()).multiply);
  CHECK(parse_morphism_json(format_morphism_json(phi)) == phi);
  CHECK(format_morphism(phi) == "a -> a b, b -> b");
  CHECK_THROWS(parse_morphism_json("{"));
  CHECK_THROWS(parse_morphism_json(R"({"basis":["a","b"],"images":{"a":"a"}})"));
  CHECK_THROWS(parse_morphism_json(R"({"basis":["a","b"],"images":{"a":"a","b":"c"}})"));
}
