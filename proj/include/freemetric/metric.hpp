#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freemetric/rational.hpp"
#include "freemetric/word.hpp"
#include "freemetric/word_table.hpp"

namespace fm {

/// A finite generating set of F(basis), as a list of nontrivial reduced words.
class GeneratingSet {
 public:
  /// The basis letters themselves.
  static GeneratingSet from_basis(BasisPtr basis);
  /// Throws DomainError on a trivial or repeated member, or when the members
  /// do not generate the whole group.
  static GeneratingSet make(BasisPtr basis, std::vector<Word> members);

  const BasisPtr& basis() const { return basis_; }
  const std::vector<Word>& members() const { return members_; }
  /// Members and their inverses without repetition.
  const std::vector<Word>& steps() const { return steps_; }
  /// True when the steps are exactly the basis letters and their inverses,
  /// so that the word metric is the free-group length metric.
  bool is_basis() const { return is_basis_; }

 private:
  GeneratingSet(BasisPtr basis, std::vector<Word> members);
  BasisPtr basis_;
  std::vector<Word> members_;
  std::vector<Word> steps_;
  bool is_basis_ = false;
};

/// File format: first line `basis: a b ...`, then one member per line in the
/// word grammar. Blank lines and lines starting with '#' are ignored.
GeneratingSet parse_genset(std::string_view text);
std::string format_genset(const GeneratingSet& s);

struct SearchBudget {
  std::uint64_t max_expansions = 100'000'000;
};

/// |g^-1 h|.
std::uint64_t dist_basis(const Word& g, const Word& h);

/// Exact word-metric distance over an arbitrary generating set, by
/// bidirectional breadth-first search in the Cayley graph. Throws
/// ResourceError when the budget runs out.
std::uint64_t dist_genset(const GeneratingSet& s, const Word& g, const Word& h,
                          SearchBudget budget = {});

/// Breadth-first ball around the identity in the Cayley graph of a
/// generating set, complete up to `radius()`.
class CayleyBall {
 public:
  CayleyBall(const GeneratingSet& s, std::size_t max_elements, unsigned max_radius = 64);

  unsigned radius() const { return static_cast<unsigned>(layer_starts_.size()) - 2; }
  std::size_t size() const { return table_.size(); }
  /// Distance from the identity if within the ball.
  std::optional<unsigned> depth(std::span<const Letter> x) const;

 private:
  WordTable table_;
  std::vector<std::uint32_t> layer_starts_;  // layer r occupies [starts[r], starts[r+1])
};

/// Memoising distance oracle: a shared forward ball plus a per-query
/// backward search that stops at the first layer touching the ball. Not
/// thread-safe; copies share the ball and keep separate memo tables.
class GensetDistanceOracle {
 public:
  explicit GensetDistanceOracle(const GeneratingSet& s, std::size_t ball_elements = 1u << 18,
                                SearchBudget budget = {});

  const GeneratingSet& genset() const { return genset_; }
  /// d_S(1, x).
  std::uint64_t norm(std::span<const Letter> x);
  std::uint64_t distance(const Word& g, const Word& h);

 private:
  std::uint64_t search(std::span<const Letter> x);

  GeneratingSet genset_;
  std::shared_ptr<const CayleyBall> ball_;
  SearchBudget budget_;
  WordTable memo_keys_;
  std::vector<std::uint64_t> memo_values_;
};

/// N = max(max_{a in A} d_{A2}(1,a), max_{a' in A2} d_A(1,a')).
std::uint64_t mutual_bound_N(const GeneratingSet& a, const GeneratingSet& a2,
                             SearchBudget budget = {});

/// Decay rate of a visual metric: either exactly ln 2 or a positive rational.
class Gamma {
 public:
  static Gamma ln2() { return Gamma(true, Rational(0)); }
  static Gamma rational(Rational value);
  /// "ln2" or a rational.
  static Gamma parse(std::string_view text);

  bool is_ln2() const { return ln2_; }
  const Rational& rational_value() const { return value_; }
  double value() const;
  std::string to_string() const;

 private:
  Gamma(bool ln2, Rational value) : ln2_(ln2), value_(value) {}
  bool ln2_;
  Rational value_;
};

struct VisualMetricSpec {
  GeneratingSet genset;
  Word basepoint;
  Gamma gamma = Gamma::ln2();
  double T = 4.0;

  /// Basis generating set, basepoint 1, gamma = ln 2, T = 4.
  static VisualMetricSpec standard(const BasisPtr& basis);
  void validate() const;
};

/// (g|h)_p = (d(p,g) + d(p,h) - d(g,h)) / 2, exact.
Rational gromov_product(const VisualMetricSpec& spec, const Word& g, const Word& h,
                        SearchBudget budget = {});

/// rho or sigma evaluated at a pair. `product` is the Gromov product used;
/// the value is exp(-gamma * product), or the bracket [rho/4, rho] when the
/// metric is only known up to bounds.
struct VisualValue {
  bool zero = false;
  bool exact = true;
  bool dyadic = false;  ///< gamma = ln 2: value is 2^-product
  Rational product;
  double lower = 0.0;
  double upper = 0.0;

  /// "0.5 2^-1", "[0.0625, 0.25] bounds 2^-2/4..2^-2", "0".
  std::string to_string() const;
};

VisualValue rho(const VisualMetricSpec& spec, const Word& g, const Word& h,
                SearchBudget budget = {});
/// Exact (= rho) when the generating set is the basis; otherwise certified
/// bounds rho/4 <= sigma <= rho.
VisualValue sigma(const VisualMetricSpec& spec, const Word& g, const Word& h,
                  SearchBudget budget = {});

/// Least delta >= 0 making the four-point condition hold on every ordered
/// triple of the sample.
Rational four_point_deficiency(const VisualMetricSpec& spec, std::span<const Word> sample,
                               SearchBudget budget = {});

struct QuasiGeodesicConstants {
  double lambda;
  double K;
};

/// lambda = max(1, L P), K = max(2L, (Q + 1) / P + L).
QuasiGeodesicConstants quasigeodesic_constants(double P, double Q, double L);

}  // namespace fm
