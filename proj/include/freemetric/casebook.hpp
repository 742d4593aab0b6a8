#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "freemetric/rational.hpp"
#include "freemetric/word.hpp"

namespace fm {

struct CaseCheck {
  std::string name;
  std::string computed;
  std::string expected;
  bool pass = false;
};

/// One worked computation: inputs, checked values against their expected
/// values, and extra computed values that are reported but not checked.
struct CaseReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<CaseCheck> checks;
  std::vector<std::pair<std::string, std::string>> values;

  bool pass() const;
  /// Single line: `case=ID k=v ... NAME=computed NAME_expected=... pass=true`.
  std::string to_line() const;
};

// -- noten: a^n -> a^floor(sqrt n) for n >= 0, a^n otherwise, on F({a}) --

/// Rank-1 basis {a}.
BasisPtr noten_basis();
Word noten_apply(long long n);

struct NotenWitness {
  long long m = 0;
  long long n = 0;
  bool verified = false;  ///< d(a^m phi, a^n phi) > K d(a^m, a^n)^r, exactly
};

/// Least m >= 1 with r m - floor(sqrt m) > log2 K, and n = floor((sqrt m + 1)^2) + 1.
NotenWitness noten_violation(const Rational& r, const Rational& K);

/// Checks d(a^m,a^n) < min(1/2, eps^(2 - log2 eps) / 2)  =>  d(a^m phi, a^n phi) < eps
/// for all |m|, |n| <= bound. eps must be a power of two.
bool noten_uc_scan(const Rational& eps, long long bound);

CaseReport noten_case();

// -- fauind: the generating set {a, b, a^2 b, a^3 b} --

/// n <= 2 by default; n = 3 needs `extended`.
CaseReport fauind_case(unsigned n, bool extended = false);

// -- hnn: iterated substitution a -> u, b -> v --

struct HnnExpansion {
  std::vector<Letter> letters;
  bool cancellation_free = false;
};

/// u = a b a b^2 ... a b^20 and v = b a b a^2 ... b a^20 on the basis {a, b}.
std::pair<Word, Word> hnn_words();
HnnExpansion hnn_expand(unsigned n, bool extended = false);
/// Longest piece of the two relators t^-1 a t u, t^-1 b t v, over all
/// cyclic conjugates and their inverses.
std::size_t hnn_longest_piece();
CaseReport hnn_case(unsigned n, bool extended = false);

// -- revcon: primitive words of F_2 and reversal --

struct RevconResult {
  std::uint64_t words = 0;
  std::uint64_t primitives = 0;
  std::vector<Word> violations;           ///< primitive u not conjugate to its reversal
  std::vector<Word> rotation_violations;  ///< cyclically reduced primitive u whose reversal is no rotation
};

RevconResult revcon_scan(unsigned maxlen, unsigned threads = 1);
CaseReport revcon_case(unsigned maxlen, unsigned threads = 1);

/// Case ids: noten, fauind, hnn, revcon.
std::vector<std::string> case_ids();

}  // namespace fm
