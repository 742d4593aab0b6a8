#include "freemetric/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "freemetric/errors.hpp"
#include "freemetric/stallings.hpp"

namespace fm {

GeneratingSet::GeneratingSet(BasisPtr basis, std::vector<Word> members)
    : basis_(std::move(basis)), members_(std::move(members)) {
  for (const Word& m : members_) {
    for (const Word& candidate : {m, invert(m)}) {
      if (std::find(steps_.begin(), steps_.end(), candidate) == steps_.end()) {
        steps_.push_back(candidate);
      }
    }
  }
  std::vector<Letter> letters;
  for (const Word& s : steps_) {
    if (s.size() != 1) break;
    letters.push_back(s[0]);
  }
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  is_basis_ = letters.size() == steps_.size() && letters.size() == 2 * basis_->rank();
}

GeneratingSet GeneratingSet::from_basis(BasisPtr basis) {
  std::vector<Word> members;
  for (std::size_t g = 0; g < basis->rank(); ++g) members.push_back(Word::generator(basis, g));
  return GeneratingSet(std::move(basis), std::move(members));
}

GeneratingSet GeneratingSet::make(BasisPtr basis, std::vector<Word> members) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!same_basis(basis, members[i].basis())) throw DomainError("basis mismatch");
    if (members[i].empty()) throw DomainError("generating set contains the identity");
    for (std::size_t j = 0; j < i; ++j) {
      if (members[i] == members[j]) {
        throw DomainError("generating set repeats '" + format_word(members[i]) + "'");
      }
    }
  }
  const StallingsGraph graph = StallingsGraph::fold(basis, members);
  for (std::size_t g = 0; g < basis->rank(); ++g) {
    if (!graph.contains(Word::generator(basis, g))) {
      throw DomainError("set does not generate: '" + basis->name(g) + "' is not in the subgroup");
    }
  }
  return GeneratingSet(std::move(basis), std::move(members));
}

GeneratingSet parse_genset(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  BasisPtr basis;
  std::vector<Word> members;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!basis) {
      constexpr std::string_view key = "basis:";
      if (line.compare(first, key.size(), key) != 0) {
        throw ParseError("generating set file must start with 'basis:'");
      }
      basis = Basis::parse(std::string_view(line).substr(first + key.size()));
      continue;
    }
    members.push_back(parse_word(basis, line));
  }
  if (!basis) throw ParseError("generating set file has no 'basis:' line");
  if (members.empty()) return GeneratingSet::from_basis(basis);
  return GeneratingSet::make(basis, std::move(members));
}

std::string format_genset(const GeneratingSet& s) {
  std::string out = "basis:";
  for (const auto& n : s.basis()->names()) out += " " + n;
  out += "\n";
  for (const Word& m : s.members()) out += format_word(m) + "\n";
  return out;
}

std::uint64_t dist_basis(const Word& g, const Word& h) {
  if (!same_basis(g.basis(), h.basis())) throw DomainError("basis mismatch");
  const std::size_t k = common_prefix_length(g.letters(), h.letters());
  return g.size() + h.size() - 2 * k;
}

namespace {

std::vector<Letter> quotient(const Word& g, const Word& h) {
  if (!same_basis(g.basis(), h.basis())) throw DomainError("basis mismatch");
  std::vector<Letter> x;
  append_inverse_reduced(x, g.letters());
  append_reduced(x, h.letters());
  return x;
}

std::vector<std::vector<Letter>> step_letters(const GeneratingSet& s) {
  std::vector<std::vector<Letter>> out;
  for (const Word& w : s.steps()) out.emplace_back(w.letters().begin(), w.letters().end());
  return out;
}

[[noreturn]] void out_of_budget(std::uint64_t budget) {
  throw ResourceError("word-metric search exceeded budget of " + std::to_string(budget) +
                      " node expansions");
}

struct Frontier {
  WordTable table;
  std::uint32_t begin = 0;
  std::uint32_t end = 1;
  std::uint64_t depth = 0;
};

}  // namespace

std::uint64_t dist_genset(const GeneratingSet& s, const Word& g, const Word& h,
                          SearchBudget budget) {
  if (!same_basis(s.basis(), g.basis())) throw DomainError("basis mismatch");
  const std::vector<Letter> x = quotient(g, h);
  if (x.empty()) return 0;

  const auto steps = step_letters(s);
  Frontier fwd;
  Frontier bwd;
  fwd.table.insert({});
  bwd.table.insert(x);
  std::uint64_t expansions = 0;
  std::vector<Letter> w;
  std::vector<Letter> next;

  // Invariant: the two visited sets are disjoint, so the distance exceeds
  // fwd.depth + bwd.depth; the first collision settles it.
  while (true) {
    const bool forward = (fwd.end - fwd.begin) <= (bwd.end - bwd.begin);
    Frontier& side = forward ? fwd : bwd;
    const Frontier& other = forward ? bwd : fwd;
    if (side.begin == side.end) throw DomainError("generating set does not reach the target");
    const auto new_begin = static_cast<std::uint32_t>(side.table.size());
    for (std::uint32_t i = side.begin; i < side.end; ++i) {
      const auto stored = side.table.at(i);
      w.assign(stored.begin(), stored.end());
      for (const auto& step : steps) {
        if (++expansions > budget.max_expansions) out_of_budget(budget.max_expansions);
        next = w;
        append_reduced(next, step);
        if (other.table.find(next)) return side.depth + 1 + other.depth;
        side.table.insert(next);
      }
    }
    side.begin = new_begin;
    side.end = static_cast<std::uint32_t>(side.table.size());
    ++side.depth;
  }
}

CayleyBall::CayleyBall(const GeneratingSet& s, std::size_t max_elements, unsigned max_radius) {
  const auto steps = step_letters(s);
  table_.insert({});
  layer_starts_ = {0, 1};
  std::vector<Letter> w;
  std::vector<Letter> next;
  while (radius() < max_radius) {
    const std::uint32_t begin = layer_starts_[layer_starts_.size() - 2];
    const std::uint32_t end = layer_starts_.back();
    if (table_.size() + static_cast<std::size_t>(end - begin) * steps.size() > max_elements) break;
    for (std::uint32_t i = begin; i < end; ++i) {
      const auto stored = table_.at(i);
      w.assign(stored.begin(), stored.end());
      for (const auto& step : steps) {
        next = w;
        append_reduced(next, step);
        table_.insert(next);
      }
    }
    layer_starts_.push_back(static_cast<std::uint32_t>(table_.size()));
  }
}

std::optional<unsigned> CayleyBall::depth(std::span<const Letter> x) const {
  auto index = table_.find(x);
  if (!index) return std::nullopt;
  auto it = std::upper_bound(layer_starts_.begin(), layer_starts_.end(), *index);
  return static_cast<unsigned>(it - layer_starts_.begin()) - 1;
}

GensetDistanceOracle::GensetDistanceOracle(const GeneratingSet& s, std::size_t ball_elements,
                                           SearchBudget budget)
    : genset_(s), budget_(budget) {
  if (!s.is_basis()) ball_ = std::make_shared<const CayleyBall>(s, ball_elements);
}

std::uint64_t GensetDistanceOracle::norm(std::span<const Letter> x) {
  if (!ball_) return x.size();
  if (auto d = ball_->depth(x)) return *d;
  if (auto hit = memo_keys_.find(x)) return memo_values_[*hit];
  const std::uint64_t d = search(x);
  memo_keys_.insert(x);
  memo_values_.push_back(d);
  return d;
}

std::uint64_t GensetDistanceOracle::search(std::span<const Letter> x) {
  // x lies outside the ball. Expand backward layers from x; the first layer
  // meeting the ball sits at distance radius() from the identity.
  const auto steps = step_letters(genset_);
  WordTable visited;
  visited.insert(x);
  std::uint32_t begin = 0;
  std::uint32_t end = 1;
  std::uint64_t expansions = 0;
  std::vector<Letter> w;
  std::vector<Letter> next;
  for (std::uint64_t k = 1;; ++k) {
    for (std::uint32_t i = begin; i < end; ++i) {
      const auto stored = visited.at(i);
      w.assign(stored.begin(), stored.end());
      for (const auto& step : steps) {
        if (++expansions > budget_.max_expansions) out_of_budget(budget_.max_expansions);
        next = w;
        append_reduced(next, step);
        if (ball_->depth(next)) return k + ball_->radius();
        visited.insert(next);
      }
    }
    begin = end;
    end = static_cast<std::uint32_t>(visited.size());
  }
}

std::uint64_t GensetDistanceOracle::distance(const Word& g, const Word& h) {
  return norm(quotient(g, h));
}

std::uint64_t mutual_bound_N(const GeneratingSet& a, const GeneratingSet& a2, SearchBudget budget) {
  if (!same_basis(a.basis(), a2.basis())) throw DomainError("basis mismatch");
  const Word one(a.basis());
  std::uint64_t n = 0;
  for (const Word& m : a.members()) n = std::max(n, dist_genset(a2, one, m, budget));
  for (const Word& m : a2.members()) n = std::max(n, dist_genset(a, one, m, budget));
  return n;
}

Gamma Gamma::rational(Rational value) {
  if (value <= 0) throw DomainError("gamma must be positive");
  return Gamma(false, value);
}

Gamma Gamma::parse(std::string_view text) {
  if (text == "ln2") return ln2();
  return rational(parse_rational(text));
}

double Gamma::value() const { return ln2_ ? std::log(2.0) : to_double(value_); }

std::string Gamma::to_string() const { return ln2_ ? "ln2" : format_rational(value_); }

VisualMetricSpec VisualMetricSpec::standard(const BasisPtr& basis) {
  return {GeneratingSet::from_basis(basis), Word(basis), Gamma::ln2(), 4.0};
}

void VisualMetricSpec::validate() const {
  if (!same_basis(genset.basis(), basepoint.basis())) throw DomainError("basis mismatch");
  if (!(T >= 1.0)) throw DomainError("T must be at least 1");
}

Rational gromov_product(const VisualMetricSpec& spec, const Word& g, const Word& h,
                        SearchBudget budget) {
  spec.validate();
  const Word& p = spec.basepoint;
  auto d = [&](const Word& x, const Word& y) {
    return static_cast<std::int64_t>(spec.genset.is_basis() ? dist_basis(x, y)
                                                            : dist_genset(spec.genset, x, y, budget));
  };
  const std::int64_t dpg = d(p, g);
  const std::int64_t dph = d(p, h);
  const std::int64_t dgh = d(g, h);
  return Rational(dpg + dph - dgh, 2);
}

namespace {

std::string decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string power_of_two(const Rational& exponent) {
  return "2^" + format_rational(-exponent);
}

VisualValue visual_value(const VisualMetricSpec& spec, const Word& g, const Word& h,
                         SearchBudget budget) {
  VisualValue out;
  out.dyadic = spec.gamma.is_ln2();
  if (g == h) {
    out.zero = true;
    out.product = Rational(0);
    return out;
  }
  out.product = gromov_product(spec, g, h, budget);
  const double q = to_double(out.product);
  out.upper = out.dyadic ? std::exp2(-q) : std::exp(-spec.gamma.value() * q);
  out.lower = out.upper;
  return out;
}

}  // namespace

std::string VisualValue::to_string() const {
  if (zero) return "0";
  if (exact) {
    return dyadic ? decimal(upper) + " " + power_of_two(product) : decimal(upper);
  }
  std::string out = "[" + decimal(lower) + ", " + decimal(upper) + "] bounds";
  if (dyadic) out += " " + power_of_two(product) + "/4.." + power_of_two(product);
  return out;
}

VisualValue rho(const VisualMetricSpec& spec, const Word& g, const Word& h, SearchBudget budget) {
  return visual_value(spec, g, h, budget);
}

VisualValue sigma(const VisualMetricSpec& spec, const Word& g, const Word& h,
                  SearchBudget budget) {
  VisualValue out = visual_value(spec, g, h, budget);
  if (!spec.genset.is_basis() && !out.zero) {
    out.exact = false;
    out.lower = out.upper / 4.0;
  }
  return out;
}

Rational four_point_deficiency(const VisualMetricSpec& spec, std::span<const Word> sample,
                               SearchBudget budget) {
  spec.validate();
  const std::size_t n = sample.size();
  if (n < 3) return Rational(0);
  GensetDistanceOracle oracle(spec.genset, 1u << 18, budget);
  std::vector<std::int64_t> from_p(n);
  for (std::size_t i = 0; i < n; ++i) {
    from_p[i] = static_cast<std::int64_t>(oracle.distance(spec.basepoint, sample[i]));
  }
  // Doubled products keep everything integral.
  std::vector<std::int64_t> twice(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto dij = static_cast<std::int64_t>(oracle.distance(sample[i], sample[j]));
      twice[i * n + j] = twice[j * n + i] = from_p[i] + from_p[j] - dij;
    }
  }
  std::int64_t worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t ij = twice[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        worst = std::max(worst, std::min(ij, twice[j * n + k]) - twice[i * n + k]);
      }
    }
  }
  return Rational(worst, 2);
}

QuasiGeodesicConstants quasigeodesic_constants(double P, double Q, double L) {
  if (!(P > 0.0)) throw DomainError("P must be positive");
  if (!(L > 0.0)) throw DomainError("L must be positive");
  if (!(Q >= 0.0)) throw DomainError("Q must be non-negative");
  return {std::max(1.0, L * P), std::max(2.0 * L, (Q + 1.0) / P + L)};
}

}  // namespace fm
