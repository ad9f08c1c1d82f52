#pragma once

#include <cstdint>
#include <optional>

#include "auctiongraph/auction_core.hpp"
#include "auctiongraph/graph_model.hpp"
#include "auctiongraph/ingest_io.hpp"

namespace auctiongraph {

/// Largest violation of epsilon-complementary slackness over the awards:
///   max(0, max_{k in adj(i), k not held by i} (a_ik - p_k) - (a_ij - paid_ij))
/// where paid_ij is the award's bid price. 0 when there are no awards.
double cs_residual_max(const BipartiteProblem &problem, const EdgeSelection &selection,
                       const PriceState &prices);

/// Run facts copied into the report as given.
struct RunInfo {
  std::int64_t iterations = 0;
  double wall_time_seconds = 0.0;
  double epsilon = 0.0;
  std::optional<double> cs_residual_max;
  std::optional<int> degree_target;  // enables deficit counting
};

/// Report for a shadow selection over an undirected graph. Degrees are those
/// of the undirected projection; variance divides by n.
MetricsReport evaluate(const WeightedGraph &graph, const EdgeSelection &selection,
                       const RunInfo &run = {});

/// As above with the residual computed from `prices` on the shadow problem.
MetricsReport evaluate(const WeightedGraph &graph, const EdgeSelection &selection,
                       const PriceState &prices, RunInfo run);

/// Report for a native buyers x objects selection. Nodes are the buyers
/// followed by the objects; the deficit target of a node is min(b, degree).
MetricsReport evaluate(const BipartiteProblem &problem, const EdgeSelection &selection,
                       const RunInfo &run = {});

}  // namespace auctiongraph
