#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freemetric/metric.hpp"
#include "freemetric/morphism.hpp"
#include "freemetric/rational.hpp"

namespace fm {

enum class ScanMethod {
  Auto,      ///< subtree extremes when both sides are the basis metric at p = 1
  PairScan,  ///< enumerate unordered pairs
};

struct AuditOptions {
  unsigned threads = 1;
  ScanMethod method = ScanMethod::Auto;
  /// Above this many pairs the scan switches to seeded sampling.
  std::uint64_t max_pairs = 200'000'000;
  std::uint64_t sample_pairs = 20'000'000;
  std::uint64_t seed = 1;
  SearchBudget budget;
};

enum class FrontierKind {
  GromovProduct,      ///< (g|h)_p - P (g phi|h phi)_p
  WordMetric,         ///< d(g,h) - P d(g phi, h phi)
  MetricEquivalence,  ///< (g|h)^A_1 - P (g|h)^A2_1
};

std::string frontier_kind_name(FrontierKind kind);

/// Q_min(P, R): the least Q with  domain(g,h) <= P * image(g,h) + Q  over
/// unordered pairs of distinct g, h in the basis ball of radius R.
class HolderFrontier {
 public:
  FrontierKind kind = FrontierKind::GromovProduct;
  std::vector<unsigned> radii;
  std::vector<Rational> grid;
  /// table[r][p] for radii[r], grid[p].
  std::vector<std::vector<Rational>> table;
  /// A pair attaining each entry.
  std::vector<std::vector<std::pair<Word, Word>>> witnesses;
  bool sampled = false;
  std::uint64_t seed = 0;

  const Rational& q_min(std::size_t radius_index, std::size_t grid_index) const {
    return table.at(radius_index).at(grid_index);
  }
  /// Lines `R,P_num,P_den,Qmin_num,Qmin_den` under a header.
  std::string to_csv() const;
  std::string to_text() const;
};

/// {1/4, 1/3, 1/2, 2/3, 1, 3/2, 2, 3, 4}.
std::vector<Rational> default_grid();

HolderFrontier frontier(const Endomorphism& phi, std::vector<Rational> grid,
                        std::vector<unsigned> radii, const VisualMetricSpec& spec,
                        const AuditOptions& options = {});

Rational q_min(const Endomorphism& phi, const Rational& P, unsigned radius,
               const VisualMetricSpec& spec, const AuditOptions& options = {});

/// Word-metric analogue, basis metric on both sides.
HolderFrontier qie_frontier(const Endomorphism& phi, std::vector<Rational> grid,
                            std::vector<unsigned> radii, const AuditOptions& options = {});

/// Identity map compared across two generating sets, basepoint 1 on both.
HolderFrontier metric_equiv_audit(const GeneratingSet& a, const GeneratingSet& a2,
                                  std::vector<Rational> grid, std::vector<unsigned> radii,
                                  const AuditOptions& options = {});

/// Finite-radius estimate of ||phi|| = ln inf{ r >= 1 : phi is Hoelder of
/// exponent 1/r }. P_hat(R) is the least grid value whose Q_min did not grow
/// from the previous radius. An estimate, never a proof.
struct SeminormEstimate {
  bool divergent = false;
  bool stabilized = false;
  double value = 0.0;
  std::optional<Rational> p_hat;
  /// (R, P_hat(R)) for every radius after the first.
  std::vector<std::pair<unsigned, std::optional<Rational>>> evidence;
  HolderFrontier frontier;

  std::string to_text() const;
};

SeminormEstimate estimate_seminorm(const Endomorphism& phi, std::vector<unsigned> radii,
                                   const VisualMetricSpec& spec,
                                   std::vector<Rational> grid = default_grid(),
                                   const AuditOptions& options = {});

/// max(||phi^-1 psi||, ||psi^-1 phi||); both must be automorphisms.
struct DbarEstimate {
  bool divergent = false;
  double value = 0.0;
  SeminormEstimate forward;   ///< phi^-1 psi
  SeminormEstimate backward;  ///< psi^-1 phi

  std::string to_text() const;
};

DbarEstimate pseudometric_dbar(const Endomorphism& phi, const Endomorphism& psi,
                               std::vector<unsigned> radii, const VisualMetricSpec& spec,
                               std::vector<Rational> grid = default_grid(),
                               const AuditOptions& options = {});

}  // namespace fm
