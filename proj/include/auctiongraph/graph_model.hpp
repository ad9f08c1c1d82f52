#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace auctiongraph {

using NodeId = std::int32_t;

struct Edge {
  NodeId src;
  NodeId dst;
  double weight;

  friend bool operator==(const Edge &, const Edge &) = default;
};

struct Neighbor {
  NodeId node;
  double weight;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Static weighted graph over dense node ids [0, n).
///
/// Undirected graphs store each edge once under its (min, max) key; the
/// neighbor index lists both directions. Weights are finite and non-negative,
/// self-loops and duplicate edges are rejected at construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(NodeId node_count, std::vector<Edge> edges, bool directed);

  NodeId node_count() const noexcept { return node_count_; }
  bool directed() const noexcept { return directed_; }

  /// Canonical stored edges, sorted by (src, dst).
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Nonzeros of the adjacency matrix: every undirected edge counts twice.
  std::size_t directed_edge_count() const noexcept {
    return directed_ ? edges_.size() : 2 * edges_.size();
  }

  /// Out-neighbors (all neighbors when undirected), sorted by node id.
  std::span<const Neighbor> neighbors(NodeId node) const;
  std::size_t degree(NodeId node) const { return neighbors(node).size(); }

  std::optional<double> weight(NodeId src, NodeId dst) const;
  double max_weight() const noexcept { return max_weight_; }
  double total_weight() const noexcept;

  friend bool operator==(const WeightedGraph &a, const WeightedGraph &b) {
    return a.node_count_ == b.node_count_ && a.directed_ == b.directed_ &&
           a.edges_ == b.edges_;
  }

 private:
  NodeId node_count_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  double max_weight_ = 0.0;
};

/// Symmetric closure of a directed graph; reciprocal pairs keep the larger
/// weight. Undirected inputs are returned unchanged.
WeightedGraph make_undirected(const WeightedGraph &graph);

/// Marks a bipartite problem as the shadow of a unipartite graph: buyer i is
/// node i, object j is the shadow copy j' of node j.
struct ShadowOrigin {
  NodeId node_count;
  bool directed;
};

/// Buyers × objects weighted bipartite graph, the auction's operand.
/// Edge src is the buyer, dst the object; ids live in separate spaces.
class BipartiteProblem {
 public:
  BipartiteProblem() = default;
  BipartiteProblem(NodeId buyer_count, NodeId object_count,
                   std::vector<Edge> edges,
                   std::optional<ShadowOrigin> shadow = std::nullopt);

  NodeId buyer_count() const noexcept { return buyer_count_; }
  NodeId object_count() const noexcept { return object_count_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Adjacent objects of a buyer, sorted by object id.
  std::span<const Neighbor> adjacency(NodeId buyer) const;
  /// Index of the buyer's first edge in edges(); edges of a buyer range are
  /// contiguous.
  std::size_t edge_offset(NodeId buyer) const { return offsets_[buyer]; }

  std::optional<double> weight(NodeId buyer, NodeId object) const;
  double max_weight() const noexcept { return max_weight_; }

  const std::optional<ShadowOrigin> &shadow() const noexcept { return shadow_; }
  bool is_shadow() const noexcept { return shadow_.has_value(); }

  /// Source edge (i, j) of shadow edge (i, j'). Throws for non-shadow problems.
  std::pair<NodeId, NodeId> origin(NodeId buyer, NodeId object) const;

  /// Copy keeping only edges for which keep(buyer, object) is true.
  template <class Pred>
  BipartiteProblem filtered(Pred keep) const {
    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (const Edge &e : edges_) {
      if (keep(e.src, e.dst)) kept.push_back(e);
    }
    return BipartiteProblem(buyer_count_, object_count_, std::move(kept), shadow_);
  }

 private:
  NodeId buyer_count_ = 0;
  NodeId object_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  double max_weight_ = 0.0;
  std::optional<ShadowOrigin> shadow_;
};

struct Pair {
  NodeId buyer;
  NodeId object;

  friend auto operator<=>(const Pair &, const Pair &) = default;
};

/// Selected (buyer, object) pairs with per-side degree counters capped at
/// degree_cap.
class EdgeSelection {
 public:
  EdgeSelection() = default;
  EdgeSelection(NodeId buyer_count, NodeId object_count, int degree_cap);

  /// Returns false when the pair is already selected. Throws GraphError when
  /// either endpoint is already at the cap.
  bool insert(Pair pair);
  bool erase(Pair pair);
  bool contains(Pair pair) const { return pairs_.contains(pair); }

  int buyer_degree(NodeId buyer) const { return buyer_degree_.at(buyer); }
  int object_degree(NodeId object) const { return object_degree_.at(object); }
  int degree_cap() const noexcept { return degree_cap_; }
  NodeId buyer_count() const noexcept { return static_cast<NodeId>(buyer_degree_.size()); }
  NodeId object_count() const noexcept { return static_cast<NodeId>(object_degree_.size()); }

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  /// Recomputes degrees from the pair set and compares with the counters.
  bool audit() const;

  friend bool operator==(const EdgeSelection &a, const EdgeSelection &b) {
    return a.pairs_ == b.pairs_ && a.degree_cap_ == b.degree_cap_ &&
           a.buyer_degree_.size() == b.buyer_degree_.size() &&
           a.object_degree_.size() == b.object_degree_.size();
  }

 private:
  std::set<Pair> pairs_;
  std::vector<int> buyer_degree_;
  std::vector<int> object_degree_;
  int degree_cap_ = 1;
};

/// Buyer i ↔ object j' for every source edge (i, j); undirected sources emit
/// both directions.
BipartiteProblem to_bipartite_shadow(const WeightedGraph &graph);

/// W = B ∘ A: keeps exactly the selected edges with their source weights.
/// Shadow pairs map back through their origin; for undirected sources the two
/// directions of an edge collapse onto the single stored edge.
WeightedGraph apply_selection(const WeightedGraph &graph,
                              const EdgeSelection &selection);

/// Undirected projection of a shadow selection: distinct {min, max} node
/// pairs, sorted.
std::vector<std::pair<NodeId, NodeId>> project_undirected(const EdgeSelection &selection);

/// Degree of every node in the undirected projection; an edge selected in
/// both shadow directions counts once per endpoint.
std::vector<int> projected_degrees(const EdgeSelection &selection, NodeId node_count);

/// (i, j) selected ⇔ (j, i) selected.
bool is_symmetric(const EdgeSelection &selection);

}  // namespace auctiongraph
