#include "auctiongraph/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace auctiongraph {

namespace {

// Builds a CSR index (offsets + neighbor list sorted by id) from
// (row, col, weight) triples.
void build_csr(NodeId rows, const std::vector<Edge> &entries, bool mirror,
               std::vector<std::size_t> &offsets, std::vector<Neighbor> &adjacency) {
  offsets.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (const Edge &e : entries) {
    ++offsets[e.src + 1];
    if (mirror) ++offsets[e.dst + 1];
  }
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  adjacency.assign(offsets.back(), Neighbor{});
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge &e : entries) {
    adjacency[cursor[e.src]++] = {e.dst, e.weight};
    if (mirror) adjacency[cursor[e.dst]++] = {e.src, e.weight};
  }
  for (NodeId i = 0; i < rows; ++i) {
    std::sort(adjacency.begin() + offsets[i], adjacency.begin() + offsets[i + 1],
              [](const Neighbor &a, const Neighbor &b) { return a.node < b.node; });
  }
}

std::optional<double> find_weight(std::span<const Neighbor> row, NodeId target) {
  auto it = std::lower_bound(row.begin(), row.end(), target,
                             [](const Neighbor &n, NodeId id) { return n.node < id; });
  if (it == row.end() || it->node != target) return std::nullopt;
  return it->weight;
}

void check_weight(double w, NodeId src, NodeId dst) {
  if (!std::isfinite(w) || w < 0.0) {
    throw GraphError("edge (" + std::to_string(src) + ", " + std::to_string(dst) +
                     ") has invalid weight " + std::to_string(w));
  }
}

}  // namespace

WeightedGraph::WeightedGraph(NodeId node_count, std::vector<Edge> edges, bool directed)
    : node_count_(node_count), directed_(directed), edges_(std::move(edges)) {
  if (node_count < 0) throw GraphError("negative node count");
  for (Edge &e : edges_) {
    if (e.src < 0 || e.src >= node_count || e.dst < 0 || e.dst >= node_count) {
      throw GraphError("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                       ") outside node range [0, " + std::to_string(node_count) + ")");
    }
    if (e.src == e.dst) throw GraphError("self-loop at node " + std::to_string(e.src));
    check_weight(e.weight, e.src, e.dst);
    if (!directed_ && e.src > e.dst) std::swap(e.src, e.dst);
    max_weight_ = std::max(max_weight_, e.weight);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
    return a.src == b.src && a.dst == b.dst;
  });
  if (dup != edges_.end()) {
    throw GraphError("duplicate edge (" + std::to_string(dup->src) + ", " +
                     std::to_string(dup->dst) + ")");
  }
  build_csr(node_count_, edges_, !directed_, offsets_, adjacency_);
}

std::span<const Neighbor> WeightedGraph::neighbors(NodeId node) const {
  if (node < 0 || node >= node_count_) throw GraphError("node id out of range");
  return {adjacency_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
}

std::optional<double> WeightedGraph::weight(NodeId src, NodeId dst) const {
  if (src < 0 || src >= node_count_ || dst < 0 || dst >= node_count_) return std::nullopt;
  return find_weight(neighbors(src), dst);
}

double WeightedGraph::total_weight() const noexcept {
  double total = 0.0;
  for (const Edge &e : edges_) total += e.weight;
  return total;
}

WeightedGraph make_undirected(const WeightedGraph &graph) {
  if (!graph.directed()) return graph;
  std::map<std::pair<NodeId, NodeId>, double> merged;
  for (const Edge &e : graph.edges()) {
    auto key = std::minmax(e.src, e.dst);
    auto [it, inserted] = merged.emplace(key, e.weight);
    if (!inserted) it->second = std::max(it->second, e.weight);
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto &[key, w] : merged) edges.push_back({key.first, key.second, w});
  return WeightedGraph(graph.node_count(), std::move(edges), false);
}

BipartiteProblem::BipartiteProblem(NodeId buyer_count, NodeId object_count,
                                   std::vector<Edge> edges,
                                   std::optional<ShadowOrigin> shadow)
    : buyer_count_(buyer_count), object_count_(object_count), edges_(std::move(edges)),
      shadow_(shadow) {
  if (buyer_count < 0 || object_count < 0) throw GraphError("negative side size");
  if (shadow_ && (shadow_->node_count != buyer_count || shadow_->node_count != object_count)) {
    throw GraphError("shadow problem must have buyer_count == object_count == n");
  }
  for (const Edge &e : edges_) {
    if (e.src < 0 || e.src >= buyer_count || e.dst < 0 || e.dst >= object_count) {
      throw GraphError("bipartite edge (" + std::to_string(e.src) + ", " +
                       std::to_string(e.dst) + ") outside buyer/object range");
    }
    if (shadow_ && e.src == e.dst) {
      throw GraphError("shadow edge (" + std::to_string(e.src) + ", " +
                       std::to_string(e.dst) + "') would map to a self-loop");
    }
    check_weight(e.weight, e.src, e.dst);
    max_weight_ = std::max(max_weight_, e.weight);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge &a, const Edge &b) {
    return a.src == b.src && a.dst == b.dst;
  });
  if (dup != edges_.end()) {
    throw GraphError("duplicate bipartite edge (" + std::to_string(dup->src) + ", " +
                     std::to_string(dup->dst) + ")");
  }
  build_csr(buyer_count_, edges_, false, offsets_, adjacency_);
}

std::span<const Neighbor> BipartiteProblem::adjacency(NodeId buyer) const {
  return {adjacency_.data() + offsets_[buyer], offsets_[buyer + 1] - offsets_[buyer]};
}

std::optional<double> BipartiteProblem::weight(NodeId buyer, NodeId object) const {
  if (buyer < 0 || buyer >= buyer_count_) return std::nullopt;
  return find_weight(adjacency(buyer), object);
}

std::pair<NodeId, NodeId> BipartiteProblem::origin(NodeId buyer, NodeId object) const {
  if (!shadow_) throw GraphError("problem has no shadow origin");
  return {buyer, object};
}

EdgeSelection::EdgeSelection(NodeId buyer_count, NodeId object_count, int degree_cap)
    : buyer_degree_(static_cast<std::size_t>(buyer_count), 0),
      object_degree_(static_cast<std::size_t>(object_count), 0),
      degree_cap_(degree_cap) {
  if (degree_cap < 1) throw GraphError("degree cap must be at least 1");
}

bool EdgeSelection::insert(Pair pair) {
  if (pair.buyer < 0 || pair.buyer >= buyer_count() || pair.object < 0 ||
      pair.object >= object_count()) {
    throw GraphError("selected pair outside buyer/object range");
  }
  if (pairs_.contains(pair)) return false;
  if (buyer_degree_[pair.buyer] >= degree_cap_ || object_degree_[pair.object] >= degree_cap_) {
    throw GraphError("selecting (" + std::to_string(pair.buyer) + ", " +
                     std::to_string(pair.object) + ") exceeds degree cap " +
                     std::to_string(degree_cap_));
  }
  pairs_.insert(pair);
  ++buyer_degree_[pair.buyer];
  ++object_degree_[pair.object];
  return true;
}

bool EdgeSelection::erase(Pair pair) {
  if (pairs_.erase(pair) == 0) return false;
  --buyer_degree_[pair.buyer];
  --object_degree_[pair.object];
  return true;
}

bool EdgeSelection::audit() const {
  std::vector<int> buyers(buyer_degree_.size(), 0);
  std::vector<int> objects(object_degree_.size(), 0);
  for (const Pair &p : pairs_) {
    ++buyers[p.buyer];
    ++objects[p.object];
  }
  if (buyers != buyer_degree_ || objects != object_degree_) return false;
  auto over = [&](int d) { return d > degree_cap_; };
  return std::none_of(buyers.begin(), buyers.end(), over) &&
         std::none_of(objects.begin(), objects.end(), over);
}

BipartiteProblem to_bipartite_shadow(const WeightedGraph &graph) {
  const NodeId n = graph.node_count();
  if (n < 1) throw GraphError("shadow conversion needs at least one node");
  std::vector<Edge> edges;
  edges.reserve(graph.directed_edge_count());
  for (const Edge &e : graph.edges()) {
    edges.push_back(e);
    if (!graph.directed()) edges.push_back({e.dst, e.src, e.weight});
  }
  return BipartiteProblem(n, n, std::move(edges), ShadowOrigin{n, graph.directed()});
}

WeightedGraph apply_selection(const WeightedGraph &graph, const EdgeSelection &selection) {
  std::vector<Edge> kept;
  kept.reserve(selection.size());
  for (const Pair &p : selection) {
    auto w = graph.weight(p.buyer, p.object);
    if (!w) {
      throw GraphError("selected pair (" + std::to_string(p.buyer) + ", " +
                       std::to_string(p.object) + ") has no source edge");
    }
    NodeId src = p.buyer, dst = p.object;
    if (!graph.directed() && src > dst) std::swap(src, dst);
    kept.push_back({src, dst, *w});
  }
  std::sort(kept.begin(), kept.end(), [](const Edge &a, const Edge &b) {
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  kept.erase(std::unique(kept.begin(), kept.end(),
                         [](const Edge &a, const Edge &b) {
                           return a.src == b.src && a.dst == b.dst;
                         }),
             kept.end());
  return WeightedGraph(graph.node_count(), std::move(kept), graph.directed());
}

std::vector<std::pair<NodeId, NodeId>> project_undirected(const EdgeSelection &selection) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(selection.size());
  for (const Pair &p : selection) edges.push_back(std::minmax(p.buyer, p.object));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<int> projected_degrees(const EdgeSelection &selection, NodeId node_count) {
  std::vector<int> degree(static_cast<std::size_t>(node_count), 0);
  for (auto [u, v] : project_undirected(selection)) {
    ++degree[u];
    ++degree[v];
  }
  return degree;
}

bool is_symmetric(const EdgeSelection &selection) {
  return std::all_of(selection.begin(), selection.end(), [&](const Pair &p) {
    return selection.contains({p.object, p.buyer});
  });
}

}  // namespace auctiongraph
