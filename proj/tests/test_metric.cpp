#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <deque>
#include <unordered_map>

#include "freemetric/errors.hpp"
#include "freemetric/metric.hpp"
#include "support.hpp"

using namespace fm;
using fmtest::ab;
using fmtest::W;

namespace {

GeneratingSet genset(std::vector<std::string> members) {
  std::vector<Word> ws;
  for (const auto& m : members) ws.push_back(W(m));
  return GeneratingSet::make(ab(), std::move(ws));
}

// Plain one-sided BFS in the Cayley graph.
std::uint64_t bfs_distance(const GeneratingSet& s, const Word& g, const Word& h) {
  const Word target = invert(g) * h;
  std::unordered_map<Word, std::uint64_t, WordHash> seen{{Word(ab()), 0}};
  std::deque<Word> queue{Word(ab())};
  while (!queue.empty()) {
    Word x = queue.front();
    queue.pop_front();
    if (x == target) return seen.at(x);
    for (const auto& step : s.steps()) {
      Word y = x * step;
      if (seen.emplace(y, seen.at(x) + 1).second) queue.push_back(y);
    }
  }
  return ~0ull;
}

VisualMetricSpec spec_with(const GeneratingSet& s) {
  VisualMetricSpec spec = VisualMetricSpec::standard(ab());
  spec.genset = s;
  return spec;
}

}  // namespace

TEST_CASE("basis distance") {
  CHECK(dist_basis(W("a b"), W("a")) == 1);
  CHECK(dist_basis(W("a b^-1 a"), W("a b^-1 a")) == 0);
  CHECK(dist_basis(W("a"), W("b^-1")) == 2);
}

TEST_CASE("generating sets") {
  CHECK(GeneratingSet::from_basis(ab()).is_basis());
  CHECK(genset({"b", "a"}).is_basis());
  CHECK_FALSE(genset({"a", "b", "a b"}).is_basis());
  CHECK(genset({"a", "b", "a b"}).steps().size() == 6);
  CHECK_THROWS_AS(genset({"a^2", "b"}), DomainError);
  CHECK_THROWS_AS(genset({"a", "b", "a"}), DomainError);
  CHECK_THROWS_AS(genset({"a", "b", "1"}), DomainError);
  auto parsed = parse_genset("basis: a b\n# comment\na\nb\n\na^2 b\n");
  CHECK(parsed.members().size() == 3);
  CHECK(parse_genset(format_genset(parsed)).members() == parsed.members());
  CHECK(parse_genset("basis: a b\n").is_basis());
  CHECK_THROWS(parse_genset("a\nb\n"));
}

TEST_CASE("genset distance examples") {
  const auto s3 = genset({"a", "b", "a b"});
  CHECK(dist_genset(s3, W("1"), W("a b a b")) == 2);
  const auto fau = genset({"a", "b", "a^2 b", "a^3 b"});
  CHECK(dist_genset(fau, W("1"), W("a^-2 b^-1 a^-3 b^-1 a b")) == 5);
  const auto basis = GeneratingSet::from_basis(ab());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Word g = fmtest::random_word_upto(rng, 7), h = fmtest::random_word_upto(rng, 7);
    CHECK(dist_genset(basis, g, h) == dist_basis(g, h));
  }
  SearchBudget tiny{10};
  CHECK_THROWS_AS(dist_genset(fau, W("1"), W("a^-2 b^-1 a^-3 b^-1 a b"), tiny), ResourceError);
}

TEST_CASE("genset distance agrees with plain BFS") {
  std::mt19937_64 rng(9);
  const std::vector<std::pair<GeneratingSet, std::size_t>> cases{
      {genset({"a", "b", "a b"}), 3}, {genset({"a", "b", "a^2 b", "a^3 b"}), 3},
      {genset({"a b", "a b^2"}), 2}};
  for (const auto& [s, len] : cases) {
    GensetDistanceOracle oracle(s);
    for (int i = 0; i < 60; ++i) {
      const Word g = fmtest::random_word_upto(rng, len), h = fmtest::random_word_upto(rng, len);
      const auto expected = bfs_distance(s, g, h);
      CHECK(dist_genset(s, g, h) == expected);
      CHECK(oracle.distance(g, h) == expected);
    }
  }
}

TEST_CASE("genset distance is a metric") {
  const auto s = genset({"a", "b", "a^2 b", "a^3 b"});
  GensetDistanceOracle d(s);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Word x = fmtest::random_word_upto(rng, 6), y = fmtest::random_word_upto(rng, 6),
               z = fmtest::random_word_upto(rng, 6);
    CHECK(d.distance(x, y) == d.distance(y, x));
    CHECK(d.distance(x, z) <= d.distance(x, y) + d.distance(y, z));
    CHECK((d.distance(x, y) == 0) == (x == y));
  }
}

TEST_CASE("mutual bound and sandwich") {
  const auto a = GeneratingSet::from_basis(ab());
  CHECK(mutual_bound_N(a, a) == 1);
  CHECK(mutual_bound_N(a, genset({"a", "b", "a b"})) == 2);
  CHECK(mutual_bound_N(a, genset({"a", "b", "a^2 b", "a^3 b"})) == 4);

  for (const auto& a2 : {genset({"a", "b", "a b"}), genset({"a", "b", "a^2 b", "a^3 b"})}) {
    const auto n = mutual_bound_N(a, a2);
    GensetDistanceOracle d2(a2);
    const auto words = ball(ab(), 4);
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        const auto da = dist_basis(words[i], words[j]);
        const auto db = d2.distance(words[i], words[j]);
        if (db > n * da || da > n * db) FAIL_CHECK(format_word(words[i]) << " " << format_word(words[j]));
      }
    }
  }
}

TEST_CASE("gromov product") {
  const auto spec = VisualMetricSpec::standard(ab());
  CHECK(gromov_product(spec, W("a b a"), W("a b^-1")) == Rational(1));
  CHECK(gromov_product(spec, W("a"), W("a^-1")) == Rational(0));
  CHECK(gromov_product(spec, W("a b^2"), W("a b^2")) == Rational(3));

  auto at_b = spec;
  at_b.basepoint = W("b");
  CHECK(gromov_product(at_b, W("a b"), W("a")) == Rational(2));

  // Odd cycles in {a, b, ab} give half-integers.
  const auto s3 = spec_with(genset({"a", "b", "a b"}));
  CHECK(gromov_product(s3, W("a"), W("a b")) == Rational(1, 2));

  std::mt19937_64 rng(8);
  for (const auto& sp : {spec, at_b, s3}) {
    for (int i = 0; i < 100; ++i) {
      const Word g = fmtest::random_word_upto(rng, 6), h = fmtest::random_word_upto(rng, 6);
      const Rational q = gromov_product(sp, g, h);
      const auto dg = dist_genset(sp.genset, sp.basepoint, g);
      const auto dh = dist_genset(sp.genset, sp.basepoint, h);
      CHECK(q >= 0);
      CHECK(q <= Rational(std::min(dg, dh)));
      CHECK(q * 2 == Rational(static_cast<long>(dg + dh - dist_genset(sp.genset, g, h))));
    }
  }
}

TEST_CASE("gromov product is the common prefix length in the tree") {
  const auto spec = VisualMetricSpec::standard(ab());
  const auto words = ball(ab(), 5);
  for (const auto& g : words)
    for (const auto& h : words)
      if (gromov_product(spec, g, h) != Rational(common_prefix(g, h).size()))
        FAIL_CHECK(format_word(g) << " " << format_word(h));
}

TEST_CASE("rho and sigma") {
  const auto spec = VisualMetricSpec::standard(ab());
  CHECK(rho(spec, W("a"), W("b")).upper == 1.0);
  CHECK(rho(spec, W("a b"), W("a b a b")).upper == 0.25);
  CHECK(rho(spec, W("a b"), W("a b")).zero);
  const auto s = sigma(spec, W("a b"), W("a"));
  CHECK(s.exact);
  CHECK(s.dyadic);
  CHECK(s.product == Rational(1));
  CHECK(s.upper == 0.5);
  CHECK(s.to_string() == "0.5 2^-1");
  CHECK(sigma(spec, W("a"), W("a")).to_string() == "0");

  auto half = spec;
  half.gamma = Gamma::rational(Rational(1, 2));
  CHECK(std::abs(sigma(half, W("a b"), W("a b^-1")).upper - std::exp(-0.5)) < 1e-12);

  const auto s3 = spec_with(genset({"a", "b", "a b"}));
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const Word g = fmtest::random_word_upto(rng, 5), h = fmtest::random_word_upto(rng, 5);
    if (g == h) continue;
    const auto r = rho(s3, g, h);
    const auto v = sigma(s3, g, h);
    CHECK_FALSE(v.exact);
    CHECK(v.upper == r.upper);
    CHECK(v.lower == r.upper / 4);
  }
}

TEST_CASE("sigma is the prefix metric and an ultrametric") {
  const auto spec = VisualMetricSpec::standard(ab());
  const auto words = ball(ab(), 4);
  const std::size_t n = words.size();
  std::vector<long> product(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = sigma(spec, words[i], words[j]);
      if (i == j) {
        CHECK(v.zero);
        product[i * n + j] = 1000;
        continue;
      }
      const auto k = common_prefix(words[i], words[j]).size();
      CHECK(v.exact);
      CHECK(v.product == Rational(k));
      CHECK(v.upper == std::ldexp(1.0, -static_cast<int>(k)));
      product[i * n + j] = static_cast<long>(k);
    }
  }
  // sigma(x,z) <= max(sigma(x,y), sigma(y,z))  <=>  k(x,z) >= min(k(x,y), k(y,z))
  std::size_t violations = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        violations += product[i * n + k] < std::min(product[i * n + j], product[j * n + k]);
  CHECK(violations == 0);
}

TEST_CASE("four point deficiency") {
  const auto spec = VisualMetricSpec::standard(ab());
  const auto b3 = ball(ab(), 3);
  CHECK(four_point_deficiency(spec, b3) == Rational(0));
  std::vector<Word> two{W("a"), W("b")};
  CHECK(four_point_deficiency(spec, two) == Rational(0));
  const auto s3 = spec_with(genset({"a", "b", "a b"}));
  const auto b2 = ball(ab(), 2);
  const Rational delta = four_point_deficiency(s3, b2);
  CHECK(delta >= 0);
  MESSAGE("delta for {a, b, ab} on the radius-2 ball: " << format_rational(delta));
}

TEST_CASE("quasi-geodesic constants") {
  auto c = quasigeodesic_constants(2, 3, 5);
  CHECK(c.lambda == 10);
  CHECK(c.K == 10);
  c = quasigeodesic_constants(1, 0, 1);
  CHECK(c.lambda == 1);
  CHECK(c.K == 2);
  c = quasigeodesic_constants(0.1, 0, 1);
  CHECK(c.lambda == 1);
  CHECK(c.K == doctest::Approx(11));
}

TEST_CASE("gamma and spec validation") {
  CHECK(Gamma::parse("ln2").is_ln2());
  CHECK(Gamma::parse("1/2").rational_value() == Rational(1, 2));
  CHECK_THROWS(Gamma::parse("0"));
  CHECK_THROWS(Gamma::parse("-1"));
  auto spec = VisualMetricSpec::standard(ab());
  spec.T = 0.5;
  CHECK_THROWS(spec.validate());
  auto other = VisualMetricSpec::standard(ab());
  other.basepoint = W("a", fmtest::abc());
  CHECK_THROWS_AS(other.validate(), DomainError);
}
