#include "freemetric/audit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "freemetric/errors.hpp"

namespace fm {

namespace {

constexpr std::uint64_t kMaxBallElements = 4'000'000;
constexpr std::uint64_t kSampleShards = 64;
constexpr std::uint64_t kMaxWalkNodes = 400'000'000;

// Words stored back to back.
class FlatWords {
 public:
  void push(std::span<const Letter> w) {
    arena_.insert(arena_.end(), w.begin(), w.end());
    offsets_.push_back(arena_.size());
  }
  std::span<const Letter> at(std::size_t i) const {
    return {arena_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t size() const { return offsets_.size() - 1; }

 private:
  std::vector<Letter> arena_;
  std::vector<std::size_t> offsets_{0};
};

// Twice a Gromov product or twice a distance between elements i and j of a
// fixed list. One instance per worker.
class Side {
 public:
  virtual ~Side() = default;
  virtual std::unique_ptr<Side> clone() const = 0;
  virtual std::int64_t twice_value(std::size_t i, std::size_t j) = 0;
};

// Tree Gromov product: words are stored already translated by p^-1.
class BasisProductSide final : public Side {
 public:
  explicit BasisProductSide(std::shared_ptr<const FlatWords> words) : words_(std::move(words)) {}
  std::unique_ptr<Side> clone() const override { return std::make_unique<BasisProductSide>(*this); }
  std::int64_t twice_value(std::size_t i, std::size_t j) override {
    return 2 * static_cast<std::int64_t>(common_prefix_length(words_->at(i), words_->at(j)));
  }

 private:
  std::shared_ptr<const FlatWords> words_;
};

class BasisDistanceSide final : public Side {
 public:
  explicit BasisDistanceSide(std::shared_ptr<const FlatWords> words) : words_(std::move(words)) {}
  std::unique_ptr<Side> clone() const override { return std::make_unique<BasisDistanceSide>(*this); }
  std::int64_t twice_value(std::size_t i, std::size_t j) override {
    const auto u = words_->at(i);
    const auto v = words_->at(j);
    const auto d = u.size() + v.size() - 2 * common_prefix_length(u, v);
    return 2 * static_cast<std::int64_t>(d);
  }

 private:
  std::shared_ptr<const FlatWords> words_;
};

// d_S(p,g) + d_S(p,h) - d_S(g,h) through a distance oracle.
class GensetProductSide final : public Side {
 public:
  GensetProductSide(std::shared_ptr<const FlatWords> words,
                    std::shared_ptr<const std::vector<std::int64_t>> from_p,
                    GensetDistanceOracle oracle)
      : words_(std::move(words)), from_p_(std::move(from_p)), oracle_(std::move(oracle)) {}
  std::unique_ptr<Side> clone() const override { return std::make_unique<GensetProductSide>(*this); }
  std::int64_t twice_value(std::size_t i, std::size_t j) override {
    scratch_.clear();
    append_inverse_reduced(scratch_, words_->at(i));
    append_reduced(scratch_, words_->at(j));
    const auto d = static_cast<std::int64_t>(oracle_.norm(scratch_));
    return (*from_p_)[i] + (*from_p_)[j] - d;
  }

 private:
  std::shared_ptr<const FlatWords> words_;
  std::shared_ptr<const std::vector<std::int64_t>> from_p_;
  GensetDistanceOracle oracle_;
  std::vector<Letter> scratch_;
};

std::unique_ptr<Side> product_side(const GeneratingSet& s, const Word& p,
                                   const std::vector<Word>& elements, const SearchBudget& budget) {
  auto words = std::make_shared<FlatWords>();
  std::vector<Letter> scratch;
  if (s.is_basis()) {
    for (const Word& g : elements) {
      scratch.clear();
      append_inverse_reduced(scratch, p.letters());
      append_reduced(scratch, g.letters());
      words->push(scratch);
    }
    return std::make_unique<BasisProductSide>(std::move(words));
  }
  GensetDistanceOracle oracle(s, 1u << 18, budget);
  auto from_p = std::make_shared<std::vector<std::int64_t>>();
  from_p->reserve(elements.size());
  for (const Word& g : elements) {
    words->push(g.letters());
    scratch.clear();
    append_inverse_reduced(scratch, p.letters());
    append_reduced(scratch, g.letters());
    from_p->push_back(static_cast<std::int64_t>(oracle.norm(scratch)));
  }
  return std::make_unique<GensetProductSide>(std::move(words), std::move(from_p), std::move(oracle));
}

std::unique_ptr<Side> distance_side(const std::vector<Word>& elements) {
  auto words = std::make_shared<FlatWords>();
  for (const Word& g : elements) words->push(g.letters());
  return std::make_unique<BasisDistanceSide>(std::move(words));
}

// For one level (= length of the longer element of the pair) and one domain
// value x, the least image value y seen, with the pair that produced it.
struct Cell {
  std::int64_t y = std::numeric_limits<std::int64_t>::max();
  std::uint32_t i = 0;
  std::uint32_t j = 0;

  bool present() const { return y != std::numeric_limits<std::int64_t>::max(); }
  bool better_than(const Cell& o) const {
    if (y != o.y) return y < o.y;
    if (j != o.j) return j < o.j;
    return i < o.i;
  }
};

class Profile {
 public:
  explicit Profile(std::size_t levels) : cells_(levels) {}

  void offer(std::size_t level, std::int64_t x, const Cell& c) {
    auto& row = cells_[level];
    const auto xi = static_cast<std::size_t>(x);
    if (xi >= row.size()) row.resize(xi + 1);
    if (c.better_than(row[xi])) row[xi] = c;
  }
  void merge(const Profile& other) {
    for (std::size_t l = 0; l < other.cells_.size(); ++l) {
      for (std::size_t x = 0; x < other.cells_[l].size(); ++x) {
        if (other.cells_[l][x].present()) offer(l, static_cast<std::int64_t>(x), other.cells_[l][x]);
      }
    }
  }
  const std::vector<std::vector<Cell>>& cells() const { return cells_; }

 private:
  std::vector<std::vector<Cell>> cells_;
};

struct ScanResult {
  Profile profile;
  bool sampled;
};

void check_radii(std::vector<unsigned>& radii) {
  if (radii.empty()) throw DomainError("at least one radius is required");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] == 0) throw DomainError("radii must be at least 1");
    if (k && radii[k] <= radii[k - 1]) throw DomainError("radii must be strictly increasing");
  }
}

void check_grid(const std::vector<Rational>& grid) {
  if (grid.empty()) throw DomainError("the P grid is empty");
  for (const Rational& p : grid) {
    if (p <= 0) throw DomainError("grid values must be positive, got " + format_rational(p));
  }
}

std::vector<Word> audit_ball(const BasisPtr& basis, unsigned radius) {
  if (ball_size(basis->rank(), radius) > kMaxBallElements) {
    throw ResourceError("ball of radius " + std::to_string(radius) + " exceeds " +
                        std::to_string(kMaxBallElements) + " elements");
  }
  return ball(basis, radius);
}

// Scans pairs i < j of `elements` (shortlex, so the level of the pair is
// |elements[j]|). Pairs are sharded by j modulo the worker count. Over
// budget, the longest run of whole levels that fits is still scanned
// exactly and the remaining pairs are sampled in a fixed number of seeded
// shards. Per-worker profiles are merged with an order-insensitive minimum.
ScanResult scan_pairs(const std::vector<Word>& elements, const Side& domain, const Side& image,
                      const AuditOptions& options) {
  const std::size_t n = elements.size();
  const std::size_t levels = elements.empty() ? 1 : elements.back().size() + 1;
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const bool sampled = total > options.max_pairs;
  const unsigned threads = std::max(1u, options.threads);
  std::size_t exact = n;
  if (sampled) {
    exact = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const bool level_end = k == n || elements[k].size() != elements[k - 1].size();
      if (!level_end) continue;
      if (static_cast<std::uint64_t>(k) * (k - 1) / 2 > options.max_pairs) break;
      exact = k;
    }
  }

  std::vector<Profile> partial(threads, Profile(levels));
  std::vector<std::exception_ptr> errors(threads);

  auto visit = [&](Side& dom, Side& img, Profile& out, std::size_t i, std::size_t j) {
    const std::int64_t x = dom.twice_value(i, j);
    const std::int64_t y = img.twice_value(i, j);
    out.offer(elements[j].size(), x,
              Cell{y, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  };

  auto work = [&](unsigned t) {
    try {
      auto dom = domain.clone();
      auto img = image.clone();
      for (std::size_t j = t; j < exact; j += threads) {
        for (std::size_t i = 0; i < j; ++i) visit(*dom, *img, partial[t], i, j);
      }
      if (!sampled) return;
      const std::uint64_t per_shard = options.sample_pairs / kSampleShards + 1;
      for (std::uint64_t s = t; s < kSampleShards; s += threads) {
        std::seed_seq seq{options.seed, s};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::uint64_t k = 0; k < per_shard; ++k) {
          std::size_t i = pick(rng);
          std::size_t j = pick(rng);
          if (i > j) std::swap(i, j);
          if (i == j || j < exact) continue;
          visit(*dom, *img, partial[t], i, j);
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
  for (unsigned t = 1; t < threads; ++t) partial[0].merge(partial[t]);
  return {std::move(partial[0]), sampled};
}

// Same shape as Profile, with the witness pair spelled out.
struct WitnessCell {
  std::int64_t y = std::numeric_limits<std::int64_t>::max();
  std::vector<Letter> g, h;

  bool present() const { return y != std::numeric_limits<std::int64_t>::max(); }
};
using Cells = std::vector<std::vector<WitnessCell>>;

Cells to_cells(const Profile& profile, const std::vector<Word>& elements) {
  Cells out(profile.cells().size());
  for (std::size_t l = 0; l < out.size(); ++l) {
    const auto& row = profile.cells()[l];
    out[l].resize(row.size());
    for (std::size_t x = 0; x < row.size(); ++x) {
      if (!row[x].present()) continue;
      const auto g = elements[row[x].i].letters();
      const auto h = elements[row[x].j].letters();
      out[l][x] = WitnessCell{row[x].y, {g.begin(), g.end()}, {h.begin(), h.end()}};
    }
  }
  return out;
}

// Exact Q_min for the basis metric at p = 1 without enumerating pairs.
// Group the pairs by their meet c = g ^ h. Among the elements of the subtree
// below c (restricted to the ball), any two taken from different branches at
// c have image product at least the common prefix m of the lexicographically
// least and greatest images, and some such pair attains m. So each c and
// radius R contributes the single candidate (|c|, m), and a depth-first walk
// only needs the extreme images of each subtree, per depth.
class TreeWalker {
 public:
  struct Extreme {
    std::vector<Letter> img, dom;
    bool set = false;
  };
  struct Frame {
    std::vector<Extreme> mn, mx;  // index: depth below the frame's node
  };

  TreeWalker(const Endomorphism& phi, unsigned rmax)
      : n_(phi.rank()), rmax_(rmax), frames_(rmax + 1), imgs_(rmax + 1),
        cells_(rmax + 1, std::vector<WitnessCell>(2 * rmax + 1)) {
    for (std::size_t code = 0; code < 2 * n_; ++code) {
      const Letter l{static_cast<std::uint16_t>(code)};
      const Word& w = phi.image(l.gen());
      letter_images_.push_back(l.sign() > 0 ? w : invert(w));
    }
    for (unsigned k = 0; k <= rmax; ++k) {
      frames_[k].mn.resize(rmax - k + 1);
      frames_[k].mx.resize(rmax - k + 1);
    }
  }

  // Walks the subtree of the one-letter word `first` (rmax >= 1).
  void walk_branch(Letter first) {
    path_.assign(1, first);
    imgs_[1].assign(letter_images_[first.code].letters().begin(),
                    letter_images_[first.code].letters().end());
    visit(1);
  }

  // Root step: own extremes, then the finished branches in letter order.
  void finish_root(std::vector<TreeWalker>& branches) {
    path_.clear();
    imgs_[0].clear();
    Frame& f = frames_[0];
    reset(f);
    assign(f.mn[0], imgs_[0], path_);
    assign(f.mx[0], imgs_[0], path_);
    for (TreeWalker& b : branches) {
      merge(f, b.frames_[1]);
      for (std::size_t l = 0; l < cells_.size(); ++l) {
        for (std::size_t x = 0; x < cells_[l].size(); ++x) {
          if (b.cells_[l][x].y < cells_[l][x].y) cells_[l][x] = std::move(b.cells_[l][x]);
        }
      }
    }
    emit(0, f);
  }

  Cells& cells() { return cells_; }

 private:
  static bool less(const std::vector<Letter>& u, const std::vector<Letter>& v) {
    return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
  }
  static void assign(Extreme& e, const std::vector<Letter>& img, const std::vector<Letter>& dom) {
    e.img.assign(img.begin(), img.end());
    e.dom.assign(dom.begin(), dom.end());
    e.set = true;
  }
  void reset(Frame& f) const {
    for (auto& e : f.mn) e.set = false;
    for (auto& e : f.mx) e.set = false;
  }
  static void offer_min(Extreme& e, const std::vector<Letter>& img, const std::vector<Letter>& dom) {
    if (!e.set || less(img, e.img)) assign(e, img, dom);
  }
  static void offer_max(Extreme& e, const std::vector<Letter>& img, const std::vector<Letter>& dom) {
    if (!e.set || less(e.img, img)) assign(e, img, dom);
  }
  // Child frame contents are dead after this, so swap instead of copying.
  static void merge(Frame& f, Frame& child) {
    for (std::size_t d = 0; d + 1 < f.mn.size(); ++d) {
      Extreme& cm = child.mn[d];
      if (cm.set && (!f.mn[d + 1].set || less(cm.img, f.mn[d + 1].img))) {
        std::swap(f.mn[d + 1], cm);
      }
      Extreme& cx = child.mx[d];
      if (cx.set && (!f.mx[d + 1].set || less(f.mx[d + 1].img, cx.img))) {
        std::swap(f.mx[d + 1], cx);
      }
    }
  }

  void visit(unsigned k) {
    Frame& f = frames_[k];
    reset(f);
    assign(f.mn[0], imgs_[k], path_);
    assign(f.mx[0], imgs_[k], path_);
    if (k == rmax_) return;
    const Letter last = path_.back();
    for (std::size_t code = 0; code < 2 * n_; ++code) {
      const Letter l{static_cast<std::uint16_t>(code)};
      if (l.cancels(last)) continue;
      auto& img = imgs_[k + 1];
      img.assign(imgs_[k].begin(), imgs_[k].end());
      append_reduced(img, letter_images_[code].letters());
      path_.push_back(l);
      if (k + 1 == rmax_) {
        offer_min(f.mn[1], img, path_);
        offer_max(f.mx[1], img, path_);
      } else {
        visit(k + 1);
        merge(f, frames_[k + 1]);
      }
      path_.pop_back();
    }
    emit(k, f);
  }

  // Branch of c (length k) that a word below c lies in; k itself for c.
  static std::size_t branch(const std::vector<Letter>& w, unsigned k) {
    return w.size() == k ? std::size_t(-1) : w[k].code;
  }

  void emit(unsigned k, const Frame& f) {
    const Extreme* lo = &f.mn[0];
    const Extreme* hi = &f.mx[0];
    const auto x = static_cast<std::size_t>(2 * k);
    for (unsigned d = 1; d <= rmax_ - k; ++d) {
      if (f.mn[d].set && less(f.mn[d].img, lo->img)) lo = &f.mn[d];
      if (f.mx[d].set && less(hi->img, f.mx[d].img)) hi = &f.mx[d];
      const std::size_t m = common_prefix_length(lo->img, hi->img);
      WitnessCell& cell = cells_[k + d][x];
      const auto y = static_cast<std::int64_t>(2 * m);
      if (y >= cell.y) continue;
      cell.y = y;
      if (branch(lo->dom, k) != branch(hi->dom, k)) {
        cell.g = lo->dom;
        cell.h = hi->dom;
        continue;
      }
      // Same branch: some z outside it has cp(lo, z) = m or cp(z, hi) = m.
      // If lo = hi = c, every image in the subtree is the same.
      const Extreme& z = lo->dom.size() == k ? f.mn[1] : f.mn[0];
      if (common_prefix_length(lo->img, z.img) == m) {
        cell.g = lo->dom;
        cell.h = z.dom;
      } else {
        cell.g = z.dom;
        cell.h = hi->dom;
      }
    }
  }

  std::size_t n_;
  unsigned rmax_;
  std::vector<Word> letter_images_;
  std::vector<Frame> frames_;
  std::vector<std::vector<Letter>> imgs_;  // imgs_[k]: image of path_[0..k)
  std::vector<Letter> path_;
  Cells cells_;
};

Cells walk_tree(const Endomorphism& phi, unsigned rmax, unsigned threads) {
  const std::size_t branches = 2 * phi.rank();
  std::vector<TreeWalker> walkers(branches, TreeWalker(phi, rmax));
  std::vector<std::exception_ptr> errors(branches);
  auto work = [&](std::size_t t) {
    for (std::size_t b = t; b < branches; b += threads) {
      try {
        walkers[b].walk_branch(Letter{static_cast<std::uint16_t>(b)});
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(branches)));
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
  TreeWalker root(phi, rmax);
  root.finish_root(walkers);
  return std::move(root.cells());
}

HolderFrontier tabulate(FrontierKind kind, const Cells& cells, const BasisPtr& basis,
                        std::vector<Rational> grid, std::vector<unsigned> radii, bool sampled,
                        std::uint64_t seed) {
  HolderFrontier f;
  f.kind = kind;
  f.sampled = sampled;
  f.seed = sampled ? seed : 0;
  for (unsigned r : radii) {
    std::vector<Rational> row;
    std::vector<std::pair<Word, Word>> wrow;
    for (const Rational& P : grid) {
      std::optional<Rational> best;
      const WitnessCell* arg = nullptr;
      for (std::size_t l = 0; l <= r && l < cells.size(); ++l) {
        for (std::size_t x = 0; x < cells[l].size(); ++x) {
          const WitnessCell& c = cells[l][x];
          if (!c.present()) continue;
          const Rational q = (Rational(static_cast<std::int64_t>(x)) - P * Rational(c.y)) / 2;
          if (!best || q > *best) {
            best = q;
            arg = &c;
          }
        }
      }
      if (!best) throw DomainError("no pairs at radius " + std::to_string(r));
      row.push_back(*best);
      wrow.emplace_back(Word(basis, arg->g), Word(basis, arg->h));
    }
    f.table.push_back(std::move(row));
    f.witnesses.push_back(std::move(wrow));
  }
  f.radii = std::move(radii);
  f.grid = std::move(grid);

  // Monotone by construction; a violation here is a bug.
  for (std::size_t r = 0; r < f.table.size(); ++r) {
    for (std::size_t p = 0; p < f.grid.size(); ++p) {
      if (r && f.table[r][p] < f.table[r - 1][p]) throw std::logic_error("frontier not monotone in R");
      for (std::size_t p2 = 0; p2 < f.grid.size(); ++p2) {
        if (f.grid[p2] > f.grid[p] && f.table[r][p2] > f.table[r][p]) {
          throw std::logic_error("frontier not monotone in P");
        }
      }
    }
  }
  return f;
}

std::vector<Word> images_of(const Endomorphism& phi, const std::vector<Word>& elements) {
  std::vector<Word> out;
  out.reserve(elements.size());
  for (const Word& g : elements) out.push_back(phi.apply(g));
  return out;
}

SeminormEstimate estimate_from(HolderFrontier f) {
  SeminormEstimate e;
  const auto& T = f.table;
  for (std::size_t r = 1; r < f.radii.size(); ++r) {
    std::optional<Rational> hat;
    for (std::size_t p = 0; p < f.grid.size(); ++p) {
      if (T[r][p] == T[r - 1][p] && (!hat || f.grid[p] < *hat)) hat = f.grid[p];
    }
    e.evidence.emplace_back(f.radii[r], hat);
  }
  if (!e.evidence.empty()) {
    const std::size_t last = T.size() - 1;
    const std::size_t top =
        std::max_element(f.grid.begin(), f.grid.end()) - f.grid.begin();
    e.divergent = T[last][top] > T[last - 1][top];
    e.p_hat = e.evidence.back().second;
    e.stabilized = e.evidence.size() >= 2 && e.p_hat &&
                   e.evidence[e.evidence.size() - 2].second == e.p_hat;
    if (!e.divergent && e.p_hat) e.value = std::log(std::max(1.0, to_double(*e.p_hat)));
  }
  e.frontier = std::move(f);
  return e;
}

}  // namespace

std::string frontier_kind_name(FrontierKind kind) {
  switch (kind) {
    case FrontierKind::GromovProduct: return "gromov";
    case FrontierKind::WordMetric: return "qie";
    case FrontierKind::MetricEquivalence: return "metric-equiv";
  }
  return "unknown";
}

std::vector<Rational> default_grid() {
  return {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1),
          Rational(3, 2), Rational(2), Rational(3), Rational(4)};
}

std::string HolderFrontier::to_csv() const {
  std::ostringstream out;
  if (sampled) out << "# sampled seed=" << seed << '\n';
  out << "R,P_num,P_den,Qmin_num,Qmin_den\n";
  for (std::size_t r = 0; r < radii.size(); ++r) {
    for (std::size_t p = 0; p < grid.size(); ++p) {
      out << radii[r] << ',' << grid[p].numerator() << ',' << grid[p].denominator() << ','
          << table[r][p].numerator() << ',' << table[r][p].denominator() << '\n';
    }
  }
  return out.str();
}

std::string HolderFrontier::to_text() const {
  std::ostringstream out;
  out << "kind=" << frontier_kind_name(kind) << '\n';
  out << "sampled=" << (sampled ? "true" : "false") << '\n';
  if (sampled) out << "seed=" << seed << '\n';
  for (std::size_t r = 0; r < radii.size(); ++r) {
    for (std::size_t p = 0; p < grid.size(); ++p) {
      out << "R=" << radii[r] << " P=" << format_rational(grid[p])
          << " Qmin=" << format_rational(table[r][p]) << " witness=" << format_word(witnesses[r][p].first)
          << " | " << format_word(witnesses[r][p].second) << '\n';
    }
  }
  return out.str();
}

HolderFrontier frontier(const Endomorphism& phi, std::vector<Rational> grid,
                        std::vector<unsigned> radii, const VisualMetricSpec& spec,
                        const AuditOptions& options) {
  spec.validate();
  if (!same_basis(phi.basis(), spec.genset.basis())) throw DomainError("basis mismatch");
  check_grid(grid);
  check_radii(radii);
  if (options.method == ScanMethod::Auto && spec.genset.is_basis() && spec.basepoint.empty()) {
    if (ball_size(phi.rank(), radii.back()) > kMaxWalkNodes) {
      throw ResourceError("ball of radius " + std::to_string(radii.back()) + " exceeds " +
                          std::to_string(kMaxWalkNodes) + " elements");
    }
    const Cells cells = walk_tree(phi, radii.back(), std::max(1u, options.threads));
    return tabulate(FrontierKind::GromovProduct, cells, phi.basis(), std::move(grid),
                    std::move(radii), false, options.seed);
  }
  const auto elements = audit_ball(phi.basis(), radii.back());
  const auto images = images_of(phi, elements);
  auto dom = product_side(spec.genset, spec.basepoint, elements, options.budget);
  auto img = product_side(spec.genset, spec.basepoint, images, options.budget);
  auto scan = scan_pairs(elements, *dom, *img, options);
  return tabulate(FrontierKind::GromovProduct, to_cells(scan.profile, elements), phi.basis(),
                  std::move(grid), std::move(radii), scan.sampled, options.seed);
}

Rational q_min(const Endomorphism& phi, const Rational& P, unsigned radius,
               const VisualMetricSpec& spec, const AuditOptions& options) {
  return frontier(phi, {P}, {radius}, spec, options).q_min(0, 0);
}

HolderFrontier qie_frontier(const Endomorphism& phi, std::vector<Rational> grid,
                            std::vector<unsigned> radii, const AuditOptions& options) {
  check_grid(grid);
  check_radii(radii);
  const auto elements = audit_ball(phi.basis(), radii.back());
  const auto images = images_of(phi, elements);
  auto dom = distance_side(elements);
  auto img = distance_side(images);
  auto scan = scan_pairs(elements, *dom, *img, options);
  return tabulate(FrontierKind::WordMetric, to_cells(scan.profile, elements), phi.basis(),
                  std::move(grid), std::move(radii), scan.sampled, options.seed);
}

HolderFrontier metric_equiv_audit(const GeneratingSet& a, const GeneratingSet& a2,
                                  std::vector<Rational> grid, std::vector<unsigned> radii,
                                  const AuditOptions& options) {
  if (!same_basis(a.basis(), a2.basis())) throw DomainError("basis mismatch");
  check_grid(grid);
  check_radii(radii);
  const auto elements = audit_ball(a.basis(), radii.back());
  const Word one(a.basis());
  auto dom = product_side(a, one, elements, options.budget);
  auto img = product_side(a2, one, elements, options.budget);
  auto scan = scan_pairs(elements, *dom, *img, options);
  return tabulate(FrontierKind::MetricEquivalence, to_cells(scan.profile, elements), a.basis(),
                  std::move(grid), std::move(radii), scan.sampled, options.seed);
}

SeminormEstimate estimate_seminorm(const Endomorphism& phi, std::vector<unsigned> radii,
                                   const VisualMetricSpec& spec, std::vector<Rational> grid,
                                   const AuditOptions& options) {
  if (radii.size() < 2) throw DomainError("the seminorm estimate needs at least two radii");
  return estimate_from(frontier(phi, std::move(grid), std::move(radii), spec, options));
}

std::string SeminormEstimate::to_text() const {
  std::ostringstream out;
  out << "estimate=finite-radius (heuristic stabilization rule)\n";
  if (divergent) {
    out << "value=Divergent\n";
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    out << "value=" << buf << '\n';
  }
  out << "p_hat=" << (p_hat ? format_rational(*p_hat) : std::string("none")) << '\n';
  out << "stabilized=" << (stabilized ? "true" : "false") << '\n';
  out << "sampled=" << (frontier.sampled ? "true" : "false") << '\n';
  for (const auto& [r, hat] : evidence) {
    out << "evidence R=" << r << " p_hat=" << (hat ? format_rational(*hat) : std::string("none"))
        << '\n';
  }
  return out.str();
}

DbarEstimate pseudometric_dbar(const Endomorphism& phi, const Endomorphism& psi,
                               std::vector<unsigned> radii, const VisualMetricSpec& spec,
                               std::vector<Rational> grid, const AuditOptions& options) {
  if (!is_automorphism(phi) || !is_automorphism(psi)) {
    throw DomainError("pseudometric_dbar needs two automorphisms");
  }
  DbarEstimate d;
  d.forward = estimate_seminorm(compose(invert_automorphism(phi), psi), radii, spec, grid, options);
  d.backward = estimate_seminorm(compose(invert_automorphism(psi), phi), radii, spec, grid, options);
  d.divergent = d.forward.divergent || d.backward.divergent;
  if (!d.divergent) d.value = std::max(d.forward.value, d.backward.value);
  return d;
}

std::string DbarEstimate::to_text() const {
  std::ostringstream out;
  out << "estimate=finite-radius (heuristic stabilization rule)\n";
  if (divergent) {
    out << "value=Divergent\n";
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    out << "value=" << buf << '\n';
  }
  auto section = [&](const char* name, const SeminormEstimate& e) {
    std::istringstream in(e.to_text());
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("estimate=", 0) == 0) continue;
      out << name << '.' << line << '\n';
    }
  };
  section("forward", forward);
  section("backward", backward);
  return out.str();
}

}  // namespace fm
