#include "auctiongraph/oracle_verify.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace auctiongraph {

namespace {

struct Value {
  int count = -1;  // -1: unreachable
  double weight = 0.0;
};

bool improves(const Value &a, const Value &b) {
  return a.count > b.count || (a.count == b.count && a.weight > b.weight);
}

}  // namespace

AssignmentOptimum exact_assignment(const BipartiteProblem &problem) {
  const NodeId buyers = problem.buyer_count();
  const NodeId objects = problem.object_count();
  if (objects > 20 || (std::int64_t{buyers} + 1) << objects > (std::int64_t{1} << 26)) {
    throw OracleTooLarge("exact_assignment: instance too large");
  }
  const std::size_t masks = std::size_t{1} << objects;
  // table[i][mask]: best over buyers < i using exactly the objects in mask.
  std::vector<std::vector<Value>> table(static_cast<std::size_t>(buyers) + 1,
                                        std::vector<Value>(masks));
  table[0][0] = {0, 0.0};
  for (NodeId i = 0; i < buyers; ++i) {
    const auto &cur = table[i];
    auto &next = table[i + 1];
    for (std::size_t mask = 0; mask < masks; ++mask) {
      if (cur[mask].count < 0) continue;
      if (improves(cur[mask], next[mask])) next[mask] = cur[mask];
      for (const Neighbor &nb : problem.adjacency(i)) {
        const std::size_t bit = std::size_t{1} << nb.node;
        if (mask & bit) continue;
        const Value v{cur[mask].count + 1, cur[mask].weight + nb.weight};
        if (improves(v, next[mask | bit])) next[mask | bit] = v;
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    if (improves(table[buyers][mask], table[buyers][best])) best = mask;
  }
  AssignmentOptimum out;
  out.weight = table[buyers][best].weight;
  std::size_t mask = best;
  for (NodeId i = buyers; i > 0; --i) {
    const Value &here = table[i][mask];
    const Value &skip = table[i - 1][mask];
    if (skip.count == here.count && skip.weight == here.weight) continue;
    for (const Neighbor &nb : problem.adjacency(i - 1)) {
      const std::size_t bit = std::size_t{1} << nb.node;
      if (!(mask & bit)) continue;
      const Value &prev = table[i - 1][mask ^ bit];
      if (prev.count + 1 == here.count && prev.weight + nb.weight == here.weight) {
        out.matching.push_back({i - 1, nb.node});
        mask ^= bit;
        break;
      }
    }
  }
  std::reverse(out.matching.begin(), out.matching.end());
  return out;
}

AssignmentOptimum exact_assignment_enumerate(const BipartiteProblem &problem) {
  const NodeId buyers = problem.buyer_count();
  if (buyers > 10) throw OracleTooLarge("exact_assignment_enumerate: more than 10 buyers");
  std::vector<char> used(static_cast<std::size_t>(problem.object_count()), 0);
  std::vector<Pair> current;
  Value best{0, 0.0};
  std::vector<Pair> best_matching;
  auto dfs = [&](auto &&self, NodeId i, Value acc) -> void {
    if (i == buyers) {
      if (improves(acc, best)) {
        best = acc;
        best_matching = current;
      }
      return;
    }
    self(self, i + 1, acc);
    for (const Neighbor &nb : problem.adjacency(i)) {
      if (used[nb.node]) continue;
      used[nb.node] = 1;
      current.push_back({i, nb.node});
      self(self, i + 1, Value{acc.count + 1, acc.weight + nb.weight});
      current.pop_back();
      used[nb.node] = 0;
    }
  };
  dfs(dfs, 0, Value{0, 0.0});
  return {best.weight, best_matching};
}

double exact_bmatching(const WeightedGraph &graph, int b) {
  if (b < 1) throw GraphError("b must be at least 1");
  if (graph.directed()) throw GraphError("exact_bmatching needs an undirected graph");
  const NodeId n = graph.node_count();
  const auto &edges = graph.edges();
  int cap = 0;
  for (NodeId v = 0; v < n; ++v) cap = std::max(cap, std::min(b, static_cast<int>(graph.degree(v))));
  const int radix = cap + 1;
  // Mixed-radix key must fit in 64 bits.
  double span = 1.0;
  for (NodeId v = 0; v < n; ++v) span *= radix;
  if (span > 1.8e19) throw OracleTooLarge("exact_bmatching: instance too large");
  std::vector<std::uint64_t> place(static_cast<std::size_t>(n), 1);
  for (NodeId v = 1; v < n; ++v) place[v] = place[v - 1] * static_cast<std::uint64_t>(radix);
  std::vector<std::size_t> last(static_cast<std::size_t>(n), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    last[edges[e].src] = e;
    last[edges[e].dst] = e;
  }

  constexpr std::size_t kMaxStates = 4'000'000;
  std::unordered_map<std::uint64_t, double> states{{0, 0.0}}, next;
  auto digit = [&](std::uint64_t key, NodeId v) {
    return static_cast<int>(key / place[v] % static_cast<std::uint64_t>(radix));
  };
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [u, v, w] = edges[e];
    next.clear();
    auto offer = [&](std::uint64_t key, double value) {
      // Nodes whose edges are all decided no longer matter.
      if (last[u] == e) key -= place[u] * static_cast<std::uint64_t>(digit(key, u));
      if (last[v] == e) key -= place[v] * static_cast<std::uint64_t>(digit(key, v));
      auto [it, fresh] = next.try_emplace(key, value);
      if (!fresh && value > it->second) it->second = value;
    };
    for (const auto &[key, value] : states) {
      offer(key, value);
      if (digit(key, u) < b && digit(key, v) < b) offer(key + place[u] + place[v], value + w);
    }
    if (next.size() > kMaxStates) throw OracleTooLarge("exact_bmatching: too many states");
    states.swap(next);
  }
  double best = 0.0;
  for (const auto &[key, value] : states) best = std::max(best, value);
  return best;
}

double exact_bmatching_enumerate(const WeightedGraph &graph, int b) {
  if (b < 1) throw GraphError("b must be at least 1");
  if (graph.directed()) throw GraphError("exact_bmatching needs an undirected graph");
  const auto &edges = graph.edges();
  if (edges.size() > 20) throw OracleTooLarge("exact_bmatching_enumerate: more than 20 edges");
  std::vector<int> degree(static_cast<std::size_t>(graph.node_count()));
  double best = 0.0;
  for (std::uint32_t subset = 0; subset < (std::uint32_t{1} << edges.size()); ++subset) {
    std::fill(degree.begin(), degree.end(), 0);
    double total = 0.0;
    bool ok = true;
    for (std::size_t e = 0; e < edges.size() && ok; ++e) {
      if (!(subset >> e & 1U)) continue;
      total += edges[e].weight;
      ok = ++degree[edges[e].src] <= b && ++degree[edges[e].dst] <= b;
    }
    if (ok) best = std::max(best, total);
  }
  return best;
}

}  // namespace auctiongraph
