#include "auctiongraph/metrics.hpp"

#include <algorithm>
#include <limits>

namespace auctiongraph {

double cs_residual_max(const BipartiteProblem &problem, const EdgeSelection &selection,
                       const PriceState &prices) {
  if (prices.prices.size() != static_cast<std::size_t>(problem.object_count())) {
    throw GraphError("price vector does not match the problem");
  }
  double worst = 0.0;
  for (const Award &award : prices.awards) {
    if (!selection.contains({award.buyer, award.object})) {
      throw GraphError("award is not part of the selection");
    }
    const auto w = problem.weight(award.buyer, award.object);
    if (!w) throw GraphError("award on a missing edge");
    double alternative = -std::numeric_limits<double>::infinity();
    for (const Neighbor &nb : problem.adjacency(award.buyer)) {
      if (selection.contains({award.buyer, nb.node})) continue;
      alternative = std::max(alternative, nb.weight - prices.prices[nb.node]);
    }
    worst = std::max(worst, alternative - (*w - award.price));
  }
  return worst;
}

namespace {

void fill_degrees(MetricsReport &report, const std::vector<int> &degree,
                  const std::vector<int> &available, const RunInfo &run) {
  report.node_count = degree.size();
  double sum = 0.0;
  for (int d : degree) {
    ++report.degree_histogram[d];
    sum += d;
  }
  const double n = static_cast<double>(std::max<std::size_t>(degree.size(), 1));
  report.degree_mean = sum / n;
  double squares = 0.0;
  for (int d : degree) squares += (d - report.degree_mean) * (d - report.degree_mean);
  report.degree_variance = squares / n;

  report.iterations = run.iterations;
  report.wall_time_seconds = run.wall_time_seconds;
  report.epsilon_used = run.epsilon;
  report.cs_residual_max = run.cs_residual_max;
  report.degree_target = run.degree_target;
  if (run.degree_target) {
    for (std::size_t v = 0; v < degree.size(); ++v) {
      const int want = std::min(*run.degree_target, available[v]);
      if (degree[v] < want) {
        ++report.deficit_nodes;
        report.deficit_total += static_cast<std::size_t>(want - degree[v]);
      }
    }
  }
}

}  // namespace

MetricsReport evaluate(const WeightedGraph &graph, const EdgeSelection &selection,
                       const RunInfo &run) {
  if (graph.directed()) throw GraphError("evaluate needs an undirected graph");
  const NodeId n = graph.node_count();
  if (selection.buyer_count() != n || selection.object_count() != n) {
    throw GraphError("selection does not match graph size");
  }
  MetricsReport report;
  const auto edges = project_undirected(selection);
  for (auto [u, v] : edges) {
    const auto w = graph.weight(u, v);
    if (!w) throw GraphError("selected pair has no source edge");
    report.total_selected_weight += *w;
  }
  report.selected_edge_count = edges.size();
  report.is_symmetric = is_symmetric(selection);
  std::vector<int> available(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) available[v] = static_cast<int>(graph.degree(v));
  fill_degrees(report, projected_degrees(selection, n), available, run);
  return report;
}

MetricsReport evaluate(const WeightedGraph &graph, const EdgeSelection &selection,
                       const PriceState &prices, RunInfo run) {
  run.cs_residual_max = cs_residual_max(to_bipartite_shadow(graph), selection, prices);
  return evaluate(graph, selection, run);
}

MetricsReport evaluate(const BipartiteProblem &problem, const EdgeSelection &selection,
                       const RunInfo &run) {
  const NodeId buyers = problem.buyer_count();
  const NodeId objects = problem.object_count();
  if (selection.buyer_count() != buyers || selection.object_count() != objects) {
    throw GraphError("selection does not match problem size");
  }
  MetricsReport report;
  std::vector<int> degree(static_cast<std::size_t>(buyers + objects), 0);
  std::vector<int> available(degree.size(), 0);
  for (const Pair &p : selection) {
    const auto w = problem.weight(p.buyer, p.object);
    if (!w) throw GraphError("selected pair has no source edge");
    report.total_selected_weight += *w;
    ++degree[p.buyer];
    ++degree[buyers + p.object];
  }
  for (const Edge &e : problem.edges()) {
    ++available[e.src];
    ++available[buyers + e.dst];
  }
  report.selected_edge_count = selection.size();
  report.is_symmetric = false;
  report.degree_convention = "bipartite, buyers then objects";
  fill_degrees(report, degree, available, run);
  return report;
}

}  // namespace auctiongraph
