#pragma once

// Test-side reference solvers, written independently of the library's
// oracle module, plus small helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "auctiongraph/graph_model.hpp"

namespace testref {

using auctiongraph::BipartiteProblem;
using auctiongraph::EdgeSelection;
using auctiongraph::WeightedGraph;

/// Best total over permutations of the objects of a complete square problem.
inline double permutation_optimum(const BipartiteProblem &problem) {
  const int n = problem.buyer_count();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const auto w = problem.weight(i, perm[i]);
      ok = w.has_value();
      if (ok) total += *w;
    }
    if (ok) best = std::max(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Best total over edge subsets with every degree <= b (recursive include /
/// exclude with degree pruning).
inline double subset_bmatching(const WeightedGraph &graph, int b) {
  const auto edges = graph.edges();
  std::vector<int> degree(static_cast<std::size_t>(graph.node_count()), 0);
  double best = 0.0;
  auto go = [&](auto &&self, std::size_t e, double total) -> void {
    if (e == edges.size()) {
      best = std::max(best, total);
      return;
    }
    const auto &edge = edges[e];
    if (degree[edge.src] < b && degree[edge.dst] < b) {
      ++degree[edge.src];
      ++degree[edge.dst];
      self(self, e + 1, total + edge.weight);
      --degree[edge.src];
      --degree[edge.dst];
    }
    self(self, e + 1, total);
  };
  go(go, 0, 0.0);
  return best;
}

/// Best total over edge subsets where every node has degree exactly
/// min(b, degree in graph); -infinity when no such subset exists.
inline double exact_degree_bmatching(const WeightedGraph &graph, int b) {
  const auto edges = graph.edges();
  const auto n = static_cast<std::size_t>(graph.node_count());
  std::vector<int> degree(n, 0), target(n, 0), remaining(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    target[v] = std::min<int>(b, static_cast<int>(graph.degree(static_cast<auctiongraph::NodeId>(v))));
    remaining[v] = static_cast<int>(graph.degree(static_cast<auctiongraph::NodeId>(v)));
  }
  double best = -std::numeric_limits<double>::infinity();
  auto go = [&](auto &&self, std::size_t e, double total) -> void {
    if (e == edges.size()) {
      if (degree == target) best = std::max(best, total);
      return;
    }
    const auto &edge = edges[e];
    --remaining[edge.src];
    --remaining[edge.dst];
    if (degree[edge.src] < target[edge.src] && degree[edge.dst] < target[edge.dst]) {
      ++degree[edge.src];
      ++degree[edge.dst];
      self(self, e + 1, total + edge.weight);
      --degree[edge.src];
      --degree[edge.dst];
    }
    // Skipping is only useful while both endpoints can still reach their target.
    if (degree[edge.src] + remaining[edge.src] >= target[edge.src] &&
        degree[edge.dst] + remaining[edge.dst] >= target[edge.dst]) {
      self(self, e + 1, total);
    }
    ++remaining[edge.src];
    ++remaining[edge.dst];
  };
  go(go, 0, 0.0);
  return best;
}

/// Sum of weights over the undirected projection of a shadow selection.
inline double projected_weight(const WeightedGraph &graph, const EdgeSelection &selection) {
  double total = 0.0;
  for (const auto &p : selection) {
    if (p.buyer < p.object || !selection.contains({p.object, p.buyer})) {
      total += *graph.weight(p.buyer, p.object);
    }
  }
  return total;
}

/// Sum of weights of a bipartite selection.
inline double selection_weight(const BipartiteProblem &problem, const EdgeSelection &selection) {
  double total = 0.0;
  for (const auto &p : selection) total += *problem.weight(p.buyer, p.object);
  return total;
}

/// Complete square problem with integer weights drawn from [lo, hi].
inline BipartiteProblem random_integer_problem(int n, int lo, int hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<auctiongraph::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) edges.push_back({i, j, static_cast<double>(dist(rng))});
  }
  return BipartiteProblem(n, n, std::move(edges));
}

/// Complete square problem with U(0, 1) weights.
inline BipartiteProblem random_real_problem(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<auctiongraph::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) edges.push_back({i, j, dist(rng)});
  }
  return BipartiteProblem(n, n, std::move(edges));
}

/// Random undirected graph with edge probability `density`.
inline WeightedGraph random_graph(int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<auctiongraph::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dist(rng) < density) edges.push_back({i, j, dist(rng)});
    }
  }
  return WeightedGraph(n, std::move(edges), false);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("auctiongraph_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testref
