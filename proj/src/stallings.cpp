#include "freemetric/stallings.hpp"

#include <deque>
#include <utility>

#include "freemetric/errors.hpp"

namespace fm {

namespace {

using Adjacency = std::map<std::uint16_t, std::uint32_t>;

class Folder {
 public:
  std::uint32_t add_vertex() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    adjacency_.emplace_back();
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void link(std::uint32_t u, Letter label, std::uint32_t v) {
    attach(u, label.code, v);
    attach(v, label.inverse().code, u);
    drain();
  }

  /// Root vertices with targets normalised through find().
  std::vector<std::pair<std::uint32_t, Adjacency>> roots() {
    std::vector<std::pair<std::uint32_t, Adjacency>> out;
    for (std::uint32_t v = 0; v < parent_.size(); ++v) {
      if (find(v) != v) continue;
      Adjacency adj;
      for (auto [code, t] : adjacency_[v]) adj.emplace(code, find(t));
      out.emplace_back(v, std::move(adj));
    }
    return out;
  }

 private:
  void attach(std::uint32_t u, std::uint16_t code, std::uint32_t v) {
    u = find(u);
    v = find(v);
    auto [it, inserted] = adjacency_[u].emplace(code, v);
    if (!inserted) {
      const std::uint32_t existing = find(it->second);
      if (existing != v) pending_.emplace_back(existing, v);
    }
  }

  void merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    Adjacency moved = std::move(adjacency_[b]);
    adjacency_[b].clear();
    for (auto [code, t] : moved) attach(a, code, t);
  }

  void drain() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.front();
      pending_.pop_front();
      merge(a, b);
    }
  }

  std::vector<std::uint32_t> parent_;
  std::vector<Adjacency> adjacency_;
  std::deque<std::pair<std::uint32_t, std::uint32_t>> pending_;
};

}  // namespace

StallingsGraph StallingsGraph::fold(const BasisPtr& basis, std::span<const Word> generators) {
  Folder folder;
  const std::uint32_t base = folder.add_vertex();
  for (const Word& w : generators) {
    if (!same_basis(basis, w.basis())) throw DomainError("basis mismatch");
    if (w.empty()) continue;
    std::uint32_t v = base;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const std::uint32_t next = folder.add_vertex();
      folder.link(v, w[i], next);
      v = next;
    }
    folder.link(v, w[w.size() - 1], base);
  }

  // Trim hanging trees, keeping the base.
  auto roots = folder.roots();
  std::map<std::uint32_t, Adjacency> graph(std::make_move_iterator(roots.begin()),
                                           std::make_move_iterator(roots.end()));
  std::deque<std::uint32_t> queue;
  for (auto& [v, adj] : graph) {
    if (v != base && adj.size() <= 1) queue.push_back(v);
  }
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    auto it = graph.find(v);
    if (it == graph.end() || it->second.size() > 1) continue;
    for (auto [code, t] : it->second) {
      auto& neighbour = graph.at(t);
      neighbour.erase(static_cast<std::uint16_t>(code ^ 1));
      if (t != base && neighbour.size() <= 1) queue.push_back(t);
    }
    graph.erase(it);
  }

  // Deterministic numbering: breadth-first from the base in letter order.
  std::map<std::uint32_t, std::uint32_t> number;
  std::vector<std::uint32_t> order{base};
  number.emplace(base, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto [code, t] : graph.at(order[i])) {
      if (number.emplace(t, static_cast<std::uint32_t>(order.size())).second) order.push_back(t);
    }
  }

  StallingsGraph out;
  out.basis_ = basis;
  out.adjacency_.resize(order.size());
  std::size_t degree_sum = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto [code, t] : graph.at(order[i])) out.adjacency_[i].emplace(code, number.at(t));
    degree_sum += out.adjacency_[i].size();
  }
  out.edge_count_ = degree_sum / 2;
  return out;
}

bool StallingsGraph::contains(const Word& w) const {
  if (!same_basis(basis_, w.basis())) throw DomainError("basis mismatch");
  std::uint32_t v = 0;
  for (Letter l : w.letters()) {
    auto it = adjacency_[v].find(l.code);
    if (it == adjacency_[v].end()) return false;
    v = it->second;
  }
  return v == 0;
}

std::vector<StallingsGraph::Edge> StallingsGraph::edges() const {
  std::vector<Edge> out;
  for (std::uint32_t v = 0; v < adjacency_.size(); ++v) {
    for (auto [code, t] : adjacency_[v]) {
      if (code & 1) continue;
      out.push_back({v, Letter{code}, t});
    }
  }
  return out;
}

}  // namespace fm
