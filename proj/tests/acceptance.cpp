// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "freemetric/audit.hpp"
#include "freemetric/casebook.hpp"
#include "freemetric/lipschitz.hpp"
#include "freemetric/metric.hpp"
#include "support.hpp"

using namespace fm;
using fmtest::ab;
using fmtest::W;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string output;  // compared across thread counts

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::vector<unsigned> upto(unsigned n) {
  std::vector<unsigned> r(n);
  std::iota(r.begin(), r.end(), 1u);
  return r;
}

const VisualMetricSpec& standard() {
  static const VisualMetricSpec s = VisualMetricSpec::standard(ab());
  return s;
}

SignedPermutation random_permutation(std::mt19937_64& rng) {
  const bool swap = rng() % 2;
  return SignedPermutation(ab(), {Letter::make(swap ? 1 : 0, rng() % 2 ? 1 : -1),
                                  Letter::make(swap ? 0 : 1, rng() % 2 ? 1 : -1)});
}

Endomorphism random_per_inn(std::mt19937_64& rng, std::size_t maxlen) {
  return compose(perm_auto(random_permutation(rng)), inner(fmtest::random_word_upto(rng, maxlen)));
}

// Length of the common prefix, letter by letter.
std::size_t prefix(const Word& u, const Word& v) {
  std::size_t k = 0;
  while (k < u.size() && k < v.size() && u[k] == v[k]) ++k;
  return k;
}

Outcome c1_prefix_metric(unsigned) {
  Outcome o;
  const auto words = ball(ab(), 6);
  const std::size_t n = words.size();
  std::vector<std::uint8_t> k(n * n, 255);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto v = sigma(standard(), words[i], words[j]);
      const std::size_t p = prefix(words[i], words[j]);
      const bool ok = v.exact && v.dyadic && !v.zero && v.product == Rational(static_cast<long>(p)) &&
                      v.upper == std::ldexp(1.0, -static_cast<int>(p));
      mismatches += !ok;
      k[i * n + j] = static_cast<std::uint8_t>(v.product.numerator());
    }
  }
  // sigma(x,z) <= max(sigma(x,y), sigma(y,z)) in exponents
  std::uint64_t violations = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        violations += k[x * n + z] < std::min(k[x * n + y], k[y * n + z]);
  o.require(mismatches == 0, std::to_string(mismatches) + " pairs differ from 2^-|u^v|");
  o.require(violations == 0, std::to_string(violations) + " ultrametric violations");
  o.detail = o.pass ? std::to_string(n * (n - 1)) + " pairs, " + std::to_string(n * n * n) +
                          " triples, 0 violations"
                    : o.detail;
  return o;
}

Outcome c2_four_point(unsigned) {
  Outcome o;
  const auto words = ball(ab(), 4);
  const Rational delta = four_point_deficiency(standard(), words);
  o.require(delta == Rational(0), "delta = " + format_rational(delta));
  if (o.pass) o.detail = "delta=0 on " + std::to_string(words.size()) + " elements";
  return o;
}

AuditOptions threaded(unsigned threads) {
  AuditOptions a;
  a.threads = threads;
  return a;
}

Outcome c3_inner_ceiling(unsigned threads) {
  Outcome o;
  const auto f = frontier(inner(W("a b")), {Rational(1)}, upto(8), standard(), threaded(threads));
  Rational worst(0);
  for (std::size_t r = 0; r < f.radii.size(); ++r) worst = std::max(worst, f.q_min(r, 0));
  o.require(worst <= Rational(6), "Q_min(1,R) reached " + format_rational(worst));
  o.detail = "max Q_min(1,R<=8) = " + format_rational(worst) + " <= 6";
  o.output = f.to_csv();
  return o;
}

Outcome c4_classifier(unsigned) {
  Outcome o;
  std::mt19937_64 rng(4004);
  std::ostringstream out;
  int misses = 0;
  for (int i = 0; i < 200; ++i) {
    const auto pi = random_permutation(rng);
    const Word z = fmtest::random_word_upto(rng, 8);
    const auto phi = compose(perm_auto(pi), inner(z));
    const auto c = classify_per_inn(phi);
    bool ok = c.in_per_inn();
    if (ok) {
      const auto& v = std::get<InPerInn>(c.verdict);
      ok = v.verified && compose(perm_auto(v.pi), inner(v.z)) == phi;
    }
    misses += !ok;
    out << format_classification(c, *ab());
  }
  const auto mu = nielsen_generators(ab()).multiply;
  for (int i = 0; i < 200; ++i) {
    auto phi = compose(compose(inner(fmtest::random_word_upto(rng, 6)), mu),
                       inner(fmtest::random_word_upto(rng, 6)));
    if (rng() % 2) phi = compose(perm_auto(random_permutation(rng)), phi);
    const auto c = classify_per_inn(phi);
    misses += c.in_per_inn();
    out << format_classification(c, *ab());
  }
  o.require(misses == 0, std::to_string(misses) + " misclassifications");
  o.detail = "400 automorphisms, " + std::to_string(misses) + " misclassified";
  o.output = out.str();
  return o;
}

Outcome c5_fexp(unsigned) {
  Outcome o;
  const auto mu = nielsen_generators(ab()).multiply;
  const auto g = fexp_counterexample(mu, 2);
  o.require(g.has_value(), "no witness for mu at radius 2");
  if (g) {
    o.require(cyclic_length(*g) == 2 && cyclic_length(mu.apply(*g)) == 1,
              "witness " + format_word(*g) + " does not drop 2 -> 1");
    o.output = format_word(*g) + "\n";
  }
  std::mt19937_64 rng(5005);
  const auto words = ball(ab(), 4);
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    const auto phi = random_per_inn(rng, 8);
    for (unsigned r = 0; r <= 4; ++r) bad += fexp_counterexample(phi, r).has_value();
    for (const auto& w : words) bad += cyclic_length(phi.apply(w)) != cyclic_length(w);
  }
  o.require(bad == 0, std::to_string(bad) + " cyclic length changes under Per*Inn");
  o.detail = "witness " + (g ? format_word(*g) : std::string("none")) + ", 50 automorphisms clean";
  return o;
}

void add_case(Outcome& o, const CaseReport& rep) {
  o.require(rep.pass(), rep.to_line());
  o.output += rep.to_line() + "\n";
}

std::string value_of(const CaseReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c.computed;
  for (const auto& [k, v] : rep.values)
    if (k == name) return v;
  return "";
}

bool g_extended = false;

Outcome c6_fauind(unsigned) {
  Outcome o;
  std::string ds;
  for (unsigned n = 1; n <= (g_extended ? 3u : 2u); ++n) {
    const auto rep = fauind_case(n, g_extended);
    add_case(o, rep);
    o.require(value_of(rep, "d") == std::to_string(5 * n), "d != 5n at n=" + std::to_string(n));
    o.require(std::stoul(value_of(rep, "eps_dist")) <= 4 * n, "eps bound fails");
    ds += (ds.empty() ? "" : ",") + value_of(rep, "d");
  }
  if (o.pass) o.detail = "d=" + ds;
  return o;
}

Outcome c7_hnn(unsigned) {
  Outcome o;
  std::string lengths;
  for (unsigned n = 0; n <= (g_extended ? 3u : 2u); ++n) {
    const auto rep = hnn_case(n, g_extended);
    add_case(o, rep);
    lengths += (lengths.empty() ? "" : ",") + value_of(rep, "length");
  }
  const auto piece = hnn_longest_piece();
  o.require(piece == 38 && 6 * piece < 233, "longest piece " + std::to_string(piece));
  if (o.pass) o.detail = "lengths " + lengths + ", piece 38 < 233/6";
  return o;
}

Outcome c8_revcon(unsigned threads) {
  Outcome o;
  const auto rep = revcon_case(8, threads);
  add_case(o, rep);
  if (o.pass)
    o.detail = value_of(rep, "primitives") + " primitives, 0 violations, abc and aba^2b^2 detected";
  return o;
}

Outcome c9_noten(unsigned) {
  Outcome o;
  add_case(o, noten_case());
  const auto w = noten_violation(Rational(1), Rational(4));
  o.require(w.m == 5 && w.n == 11 && w.verified, "noten_violation(1,4) != (5,11)");
  for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 8)})
    o.require(noten_uc_scan(eps, 200), "uc_scan fails at eps=" + format_rational(eps));
  if (o.pass) o.detail = "(m,n)=(5,11), uc holds for eps 1..1/8";
  return o;
}

Outcome c10_collapse(unsigned threads) {
  Outcome o;
  const auto phi = fmtest::M({"a", "a"});
  const std::vector<Rational> grid{Rational(1), Rational(2), Rational(4)};
  const auto f = frontier(phi, grid, upto(5), standard(), threaded(threads));
  for (std::size_t r = 2; r < 5; ++r)
    for (std::size_t p = 0; p < grid.size(); ++p)
      o.require(f.q_min(r, p) >= Rational(static_cast<long>(f.radii[r]) - 1),
                "Q_min below R-1 at R=" + std::to_string(f.radii[r]));
  const auto est = estimate_seminorm(phi, upto(5), standard(), default_grid(), threaded(threads));
  o.require(est.divergent, "estimate not divergent");
  o.output = f.to_csv() + est.to_text();
  if (o.pass) o.detail = "Q_min >= R-1, seminorm Divergent";
  return o;
}

Outcome c11_doubling(unsigned threads) {
  Outcome o;
  const auto phi = fmtest::M({"a^2", "b^2"});
  const std::vector<Rational> grid{Rational(1, 2)};
  const auto f = frontier(phi, grid, upto(8), standard(), threaded(threads));
  const auto q = qie_frontier(phi, grid, upto(8), threaded(threads));
  for (std::size_t r = 0; r < 8; ++r) {
    o.require(f.q_min(r, 0) == Rational(0), "gromov frontier nonzero");
    o.require(q.q_min(r, 0) == Rational(0), "qie frontier nonzero");
  }
  o.output = f.to_csv() + q.to_csv();
  if (o.pass) o.detail = "Q_min(1/2,R)=0 for R<=8, both frontiers";
  return o;
}

Outcome c12_inversion(unsigned) {
  Outcome o;
  std::mt19937_64 rng(1212);
  const auto id = Endomorphism::identity(ab());
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto phi = fmtest::random_automorphism(rng, 1 + rng() % 12);
    const auto inv = invert_automorphism(phi);
    bad += !(compose(phi, inv) == id && compose(inv, phi) == id);
  }
  o.require(bad == 0, std::to_string(bad) + " failed round trips");
  if (o.pass) o.detail = "100 round trips";
  return o;
}

Outcome c13_twobasis(unsigned) {
  Outcome o;
  const auto r = twobasis_relations(ab());
  o.require(r.swap, "swap relation");
  o.require(r.invert_first, "inversion relation");
  o.require(r.multiply, "multiplication relation");
  if (o.pass) o.detail = "3 identities";
  return o;
}

Outcome c14_inner_seminorm(unsigned) {
  Outcome o;
  std::mt19937_64 rng(1414);
  const auto words = ball(ab(), 6);
  std::uniform_int_distribution<std::size_t> pick(1, words.size() - 1);
  int nonzero = 0;
  std::string worst;
  for (int i = 0; i < 20; ++i) {
    const Word& x = words[pick(rng)];
    // Q_min keeps growing until about R = 2|x| + 2 before it settles.
    const unsigned rmax = std::max(8u, 2 * static_cast<unsigned>(x.size()) + 4);
    const auto est = estimate_seminorm(inner(x), upto(rmax), standard());
    if (est.divergent || est.value != 0.0) {
      ++nonzero;
      if (worst.empty()) worst = format_word(x);
    }
  }
  o.require(nonzero == 0, std::to_string(nonzero) + " nonzero estimates, first x = " + worst);
  if (o.pass) o.detail = "20 inner automorphisms, all 0";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(unsigned)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--extended") == 0) {
      g_extended = true;
    } else {
      only.push_back(std::atoi(argv[i]));
    }
  }
  const std::vector<Criterion> criteria{
      {1, "prefix metric identity", c1_prefix_metric},
      {2, "tree hyperbolicity", c2_four_point},
      {3, "inner ceiling", c3_inner_ceiling},
      {4, "Per*Inn classifier", c4_classifier},
      {5, "cyclic length witness", c5_fexp},
      {6, "fauind distances", c6_fauind},
      {7, "hnn distortion", c7_hnn},
      {8, "reversal of primitives", c8_revcon},
      {9, "noten", c9_noten},
      {10, "divergence detection", c10_collapse},
      {11, "doubling is Lipschitz", c11_doubling},
      {12, "inversion round trip", c12_inversion},
      {13, "two-basis relations", c13_twobasis},
      {14, "inner seminorm", c14_inner_seminorm},
  };
  auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  int failed = 0;
  std::vector<std::string> single(16);
  auto report = [&](int id, const char* name, const Outcome& o, double secs) {
    std::printf("%s %2d %-24s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  auto timed = [](const std::function<Outcome(unsigned)>& f, unsigned threads, double& secs) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f(threads);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return o;
  };

  for (const auto& c : criteria) {
    if (!wanted(c.id)) continue;
    double secs = 0;
    const Outcome o = timed(c.run, 1, secs);
    single[c.id] = o.output + o.detail;
    report(c.id, c.name, o, secs);
  }

  if (wanted(15)) {
    Outcome o;
    double total = 0;
    for (const auto& c : criteria) {
      if (c.id < 3 || c.id > 11) continue;
      std::string base = single[c.id];
      if (base.empty()) {
        double s = 0;
        const Outcome one = timed(c.run, 1, s);
        base = one.output + one.detail;
        total += s;
      }
      for (unsigned threads : {2u, 8u}) {
        double s = 0;
        const Outcome again = timed(c.run, threads, s);
        total += s;
        o.require(again.output + again.detail == base,
                  "criterion " + std::to_string(c.id) + " differs at " + std::to_string(threads) + " threads");
      }
    }
    if (o.pass) o.detail = "criteria 3-11 identical at 1, 2, 8 threads";
    report(15, "determinism", o, total);
  }
  return failed ? 1 : 0;
}
