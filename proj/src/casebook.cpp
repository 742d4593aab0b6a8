#include "freemetric/casebook.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>

#include "freemetric/errors.hpp"
#include "freemetric/metric.hpp"
#include "freemetric/morphism.hpp"

namespace fm {

namespace {

using boost::multiprecision::cpp_int;

std::string bool_text(bool b) { return b ? "true" : "false"; }

CaseCheck check_eq(std::string name, const std::string& computed, const std::string& expected) {
  return {std::move(name), computed, expected, computed == expected};
}

long long isqrt(long long n) {
  auto s = static_cast<long long>(std::sqrt(static_cast<long double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s;
}

long long noten_exponent(long long n) { return n >= 0 ? isqrt(n) : n; }

// d(a^m, a^n) = 2^-j in the prefix metric of F({a}); nullopt when m = n.
std::optional<long long> prefix_exponent(long long m, long long n) {
  if (m == n) return std::nullopt;
  if ((m > 0 && n > 0) || (m < 0 && n < 0)) return std::min(std::llabs(m), std::llabs(n));
  return 0;
}

// 2^(e/q) > kn/kd for positive kn, kd.
bool pow2_root_greater(long long e, long long q, const cpp_int& kn, const cpp_int& kd) {
  cpp_int lhs = boost::multiprecision::pow(kd, static_cast<unsigned>(q));
  cpp_int rhs = boost::multiprecision::pow(kn, static_cast<unsigned>(q));
  if (e >= 0) {
    lhs <<= static_cast<unsigned>(e);
  } else {
    rhs <<= static_cast<unsigned>(-e);
  }
  return lhs > rhs;
}

// 2^-a > K * 2^(-r b), exactly.
bool dyadic_greater(long long a, long long b, const Rational& r, const Rational& K) {
  const long long p = r.numerator();
  const long long q = r.denominator();
  return pow2_root_greater(p * b - q * a, q, cpp_int(K.numerator()), cpp_int(K.denominator()));
}

// eps = 2^-k.
long long dyadic_log(const Rational& eps) {
  auto log2_exact = [](long long v) -> std::optional<long long> {
    if (v <= 0 || (v & (v - 1))) return std::nullopt;
    long long k = 0;
    while (v > 1) {
      v >>= 1;
      ++k;
    }
    return k;
  };
  if (eps.numerator() == 1) {
    if (auto k = log2_exact(eps.denominator())) return *k;
  } else if (eps.denominator() == 1) {
    if (auto k = log2_exact(eps.numerator())) return -*k;
  }
  throw DomainError("epsilon must be a power of two, got " + format_rational(eps));
}

std::string line_value(std::string v) {
  std::replace(v.begin(), v.end(), ' ', '*');
  return v;
}

}  // namespace

bool CaseReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CaseCheck& c) { return c.pass; });
}

std::string CaseReport::to_line() const {
  std::string out = "case=" + id;
  for (const auto& [k, v] : inputs) out += " " + k + "=" + line_value(v);
  for (const CaseCheck& c : checks) {
    out += " " + c.name + "=" + line_value(c.computed);
    out += " " + c.name + "_expected=" + line_value(c.expected);
  }
  for (const auto& [k, v] : values) out += " " + k + "=" + line_value(v);
  out += " pass=" + bool_text(pass());
  return out;
}

BasisPtr noten_basis() {
  static const BasisPtr basis = Basis::make({"a"});
  return basis;
}

Word noten_apply(long long n) { return power(Word::generator(noten_basis(), 0), noten_exponent(n)); }

NotenWitness noten_violation(const Rational& r, const Rational& K) {
  if (r <= 0 || K <= 0) throw DomainError("r and K must be positive");
  const cpp_int kn(K.numerator());
  const cpp_int kd(K.denominator());
  const long long p = r.numerator();
  const long long q = r.denominator();
  constexpr long long kLimit = 100'000'000;
  for (long long m = 1; m <= kLimit; ++m) {
    // r m - floor(sqrt m) > log2 K  <=>  2^(p m - q s) > K^q
    if (!pow2_root_greater(p * m - q * isqrt(m), q, kn, kd)) continue;
    NotenWitness w;
    w.m = m;
    w.n = m + 2 + isqrt(4 * m);  // floor((sqrt m + 1)^2) + 1
    const auto image = prefix_exponent(noten_exponent(w.m), noten_exponent(w.n));
    const auto domain = prefix_exponent(w.m, w.n);
    w.verified = image && domain && dyadic_greater(*image, *domain, r, K);
    return w;
  }
  throw ResourceError("no witness with m <= " + std::to_string(kLimit));
}

bool noten_uc_scan(const Rational& eps, long long bound) {
  if (bound < 0) throw DomainError("bound must be non-negative");
  const long long k = dyadic_log(eps);
  // min(1/2, eps^(2 + k) / 2) = 2^-t
  const long long t = std::max(1LL, 1 + k * (k + 2));
  for (long long m = -bound; m <= bound; ++m) {
    for (long long n = -bound; n <= bound; ++n) {
      const auto j = prefix_exponent(m, n);
      if (j && *j <= t) continue;  // premise fails
      const auto j2 = prefix_exponent(noten_exponent(m), noten_exponent(n));
      if (j2 && *j2 <= k) return false;
    }
  }
  return true;
}

CaseReport noten_case() {
  CaseReport rep;
  rep.id = "noten";
  rep.checks.push_back(check_eq("apply9", format_word(noten_apply(9)), "a^3"));
  rep.checks.push_back(check_eq("apply10", format_word(noten_apply(10)), "a^3"));
  rep.checks.push_back(check_eq("apply_neg5", format_word(noten_apply(-5)), "a^-5"));
  const NotenWitness w = noten_violation(Rational(1), Rational(4));
  rep.checks.push_back(
      check_eq("violation_r1_K4", std::to_string(w.m) + "," + std::to_string(w.n), "5,11"));
  rep.checks.push_back(check_eq("violation_verified", bool_text(w.verified), "true"));
  for (const Rational eps : {Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 8)}) {
    const std::string name = "uc_eps" + format_rational(eps);
    rep.checks.push_back(check_eq(name, bool_text(noten_uc_scan(eps, 200)), "true"));
  }
  rep.inputs.emplace_back("uc_bound", "200");
  return rep;
}

CaseReport fauind_case(unsigned n, bool extended) {
  if (n > 3) throw DomainError("fauind supports n <= 3");
  if (n == 3 && !extended) throw ResourceError("n = 3 needs the extended budget");
  const BasisPtr basis = Basis::make({"a", "b"});
  const auto P = [&](std::string_view s) { return parse_word(basis, s); };
  const Word u = P("a^2 b");
  const Word v = P("a^3 b");
  const GeneratingSet A2 = GeneratingSet::make(basis, {P("a"), P("b"), u, v});
  const Word w = P("a^-2 b^-1 a^-3 b^-1 a b");
  const Word wn = power(w, n);
  const Word one(basis);

  CaseReport rep;
  rep.id = "fauind";
  rep.inputs.emplace_back("n", std::to_string(n));
  rep.values.emplace_back("w", format_word(w));

  const auto d = dist_genset(A2, one, wn);
  rep.checks.push_back(check_eq("d", std::to_string(d), std::to_string(5 * n)));

  // w eps = u v a^-1 b^-1, so (w^n) eps is a product of 4n elements of A2.
  const Word target = epsilon(basis).apply(wn);
  const std::vector<Word> block{u, v, P("a^-1"), P("b^-1")};
  Word product(basis);
  std::size_t factors = 0;
  for (unsigned i = 0; i < n; ++i) {
    for (const Word& f : block) {
      product = product * f;
      ++factors;
    }
  }
  rep.checks.push_back(check_eq("factorization_ok", bool_text(product == target), "true"));
  rep.checks.push_back(CaseCheck{"eps_bound", std::to_string(factors), "<=" + std::to_string(4 * n),
                                 factors <= 4 * n});
  rep.values.emplace_back("factorization", n ? "(u v a^-1 b^-1)^" + std::to_string(n) : "1");
  rep.values.emplace_back("eps_dist", std::to_string(dist_genset(A2, one, target)));
  return rep;
}

std::pair<Word, Word> hnn_words() {
  const BasisPtr basis = Basis::make({"a", "b"});
  std::vector<Letter> u, v;
  const Letter a = Letter::make(0, 1);
  const Letter b = Letter::make(1, 1);
  for (int i = 1; i <= 20; ++i) {
    u.push_back(a);
    u.insert(u.end(), i, b);
    v.push_back(b);
    v.insert(v.end(), i, a);
  }
  return {Word::from_reduced(basis, std::move(u)), Word::from_reduced(basis, std::move(v))};
}

HnnExpansion hnn_expand(unsigned n, bool extended) {
  if (n > 3) throw ResourceError("hnn expansion is capped at n = 3");
  if (n == 3 && !extended) throw ResourceError("n = 3 needs the extended budget");
  const auto [u, v] = hnn_words();
  // Indexed by letter code: a, a^-1, b, b^-1.
  std::vector<std::vector<Letter>> blocks;
  for (const Word& w : {u, invert(u), v, invert(v)}) blocks.emplace_back(w.letters().begin(), w.letters().end());
  HnnExpansion out;
  out.letters = {Letter::make(0, 1)};
  out.cancellation_free = true;
  std::vector<Letter> next;
  for (unsigned step = 0; step < n; ++step) {
    next.clear();
    next.reserve(out.letters.size() * u.size());
    for (Letter c : out.letters) {
      const auto& blk = blocks[c.code];
      if (!next.empty() && next.back().cancels(blk.front())) out.cancellation_free = false;
      next.insert(next.end(), blk.begin(), blk.end());
    }
    out.letters.swap(next);
  }
  for (std::size_t i = 1; i < out.letters.size(); ++i) {
    if (out.letters[i - 1].cancels(out.letters[i])) out.cancellation_free = false;
  }
  return out;
}

namespace {

std::vector<std::vector<Letter>> hnn_relators() {
  const BasisPtr basis = Basis::make({"a", "b", "t"});
  const auto [u, v] = hnn_words();
  std::vector<std::vector<Letter>> rel;
  for (const auto& [gen, w] : {std::pair{0, u}, std::pair{1, v}}) {
    std::vector<Letter> r{Letter::make(2, -1), Letter::make(gen, 1), Letter::make(2, 1)};
    r.insert(r.end(), w.letters().begin(), w.letters().end());
    rel.push_back(std::move(r));
  }
  return rel;
}

}  // namespace

std::size_t hnn_longest_piece() {
  std::vector<std::vector<Letter>> all;
  for (const auto& r : hnn_relators()) {
    std::vector<Letter> inv;
    append_inverse_reduced(inv, r);
    for (const std::vector<Letter>* w : {&r, static_cast<const std::vector<Letter>*>(&inv)}) {
      for (std::size_t s = 0; s < w->size(); ++s) {
        std::vector<Letter> rot(w->begin() + s, w->end());
        rot.insert(rot.end(), w->begin(), w->begin() + s);
        all.push_back(std::move(rot));
      }
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  // In sorted order the longest common prefix is attained by neighbours.
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    best = std::max(best, common_prefix_length(all[i - 1], all[i]));
  }
  return best;
}

CaseReport hnn_case(unsigned n, bool extended) {
  const HnnExpansion e = hnn_expand(n, extended);
  CaseReport rep;
  rep.id = "hnn";
  rep.inputs.emplace_back("n", std::to_string(n));
  std::uint64_t expected = 1;
  for (unsigned i = 0; i < n; ++i) expected *= 230;
  rep.checks.push_back(check_eq("length", std::to_string(e.letters.size()), std::to_string(expected)));
  rep.checks.push_back(check_eq("cancellation_free", bool_text(e.cancellation_free), "true"));
  if (n == 1) {
    const auto u = hnn_words().first;
    const bool same = std::equal(e.letters.begin(), e.letters.end(), u.letters().begin(),
                                 u.letters().end());
    rep.checks.push_back(check_eq("equals_u", bool_text(same), "true"));
  }
  const auto rel = hnn_relators();
  const std::size_t piece = hnn_longest_piece();
  rep.checks.push_back(check_eq("relator_length", std::to_string(rel[0].size()), "233"));
  rep.checks.push_back(check_eq("relator2_length", std::to_string(rel[1].size()), "233"));
  rep.checks.push_back(check_eq("longest_piece", std::to_string(piece), "38"));
  rep.checks.push_back(check_eq("small_cancellation", bool_text(6 * piece < rel[0].size()), "true"));
  rep.values.emplace_back("piece_bound", std::to_string(piece) + "<233/6");
  return rep;
}

RevconResult revcon_scan(unsigned maxlen, unsigned threads) {
  const BasisPtr basis = Basis::make({"a", "b"});
  const std::vector<Word> words = ball(basis, maxlen);
  threads = std::max(1u, threads);

  struct Partial {
    std::uint64_t words = 0, primitives = 0;
    std::vector<std::size_t> violations, rotation_violations;
  };
  std::vector<Partial> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      Partial& p = parts[t];
      for (std::size_t i = 1 + t; i < words.size(); i += threads) {
        const Word& u = words[i];
        ++p.words;
        if (!is_primitive(u)) continue;
        ++p.primitives;
        const Word rev = reversal(u);
        if (!is_conjugate(u, rev)) p.violations.push_back(i);
        if (cyclic_length(u) == u.size()) {
          std::vector<Letter> twice(u.letters().begin(), u.letters().end());
          twice.insert(twice.end(), u.letters().begin(), u.letters().end());
          const auto r = rev.letters();
          if (std::search(twice.begin(), twice.end(), r.begin(), r.end()) == twice.end()) {
            p.rotation_violations.push_back(i);
          }
        }
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  RevconResult out;
  std::vector<std::size_t> bad, bad_rot;
  for (const Partial& p : parts) {
    out.words += p.words;
    out.primitives += p.primitives;
    bad.insert(bad.end(), p.violations.begin(), p.violations.end());
    bad_rot.insert(bad_rot.end(), p.rotation_violations.begin(), p.rotation_violations.end());
  }
  std::sort(bad.begin(), bad.end());
  std::sort(bad_rot.begin(), bad_rot.end());
  for (std::size_t i : bad) out.violations.push_back(words[i]);
  for (std::size_t i : bad_rot) out.rotation_violations.push_back(words[i]);
  return out;
}

CaseReport revcon_case(unsigned maxlen, unsigned threads) {
  const RevconResult r = revcon_scan(maxlen, threads);
  CaseReport rep;
  rep.id = "revcon";
  rep.inputs.emplace_back("maxlen", std::to_string(maxlen));
  rep.values.emplace_back("words", std::to_string(r.words));
  rep.values.emplace_back("primitives", std::to_string(r.primitives));
  rep.checks.push_back(check_eq("violations", std::to_string(r.violations.size()), "0"));
  rep.checks.push_back(
      check_eq("rotation_violations", std::to_string(r.rotation_violations.size()), "0"));

  const BasisPtr f3 = Basis::make({"a", "b", "c"});
  const Word abc = parse_word(f3, "a b c");
  rep.checks.push_back(
      check_eq("abc_violates", bool_text(!is_conjugate(abc, reversal(abc))), "true"));
  const BasisPtr f2 = Basis::make({"a", "b"});
  const Word nonprim = parse_word(f2, "a b a^2 b^2");
  rep.checks.push_back(
      check_eq("aba2b2_violates", bool_text(!is_conjugate(nonprim, reversal(nonprim))), "true"));
  rep.values.emplace_back("aba2b2_primitive", bool_text(is_primitive(nonprim)));
  return rep;
}

std::vector<std::string> case_ids() { return {"noten", "fauind", "hnn", "revcon"}; }

}  // namespace fm
