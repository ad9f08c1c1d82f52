#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auctiongraph/auction_core.hpp"
#include "auctiongraph/graph_model.hpp"

namespace auctiongraph {

enum class Method { kAuctionRounds, kAuctionMultibid, kKnn };
enum class Symmetrize { kPercentile, kMax, kMin, kNone };

const char *to_string(Method method);
const char *to_string(Symmetrize mode);
std::optional<Method> parse_method(const std::string &name);
std::optional<Symmetrize> parse_symmetrize(const std::string &name);

struct SparsifyConfig {
  int b = 1;
  std::optional<double> epsilon;  // nullopt: auto, max a_ij / (4 n)
  Method method = Method::kAuctionMultibid;
  Symmetrize symmetrize = Symmetrize::kPercentile;
  int partitions = 1;
  std::int64_t max_rounds = 0;  // 0: b * default_max_rounds (times L in the engine)
  std::optional<double> profit_floor;  // nullopt: buyers always bid
  int threads = 0;  // worker threads for the partitions; 0: min(L, hardware)

  void validate() const;
};

double resolve_epsilon(const BipartiteProblem &problem, const SparsifyConfig &config);

/// Each node keeps its min(k, degree) heaviest incident edges, ties to the
/// lowest neighbor id. Pairs are (node, neighbor) over the shadow problem; the
/// selection's cap is raised to the largest in-degree since kNN does not bound
/// it.
EdgeSelection knn_select(const WeightedGraph &graph, int k);

/// Union of a square selection with its transpose.
EdgeSelection symmetrize_max(const EdgeSelection &selection);
/// Intersection of a square selection with its transpose.
EdgeSelection symmetrize_min(const EdgeSelection &selection);

struct RoundsResult {
  EdgeSelection selection;
  std::vector<AuctionResult> rounds;
  std::vector<BipartiteProblem> round_problems;  // operand of each round
  std::int64_t iterations = 0;
  bool converged = true;
};

/// Repeated single-edge auctions, removing the selected edges after each.
/// Shadow problems run ceil(b/2) rounds and accumulate undirected
/// projections (both directions end up selected), then at most b rounds in
/// total restricted to edges between nodes still below b. A node pushed past
/// b drops its lightest edges. Native bipartite problems run b rounds.
RoundsResult auction_b_rounds(const BipartiteProblem &problem, const SparsifyConfig &config);

/// Serial reference of the multi-edge auction: every buyer short of
/// min(b, degree) objects bids on its best unheld objects at once, each object
/// keeps its b highest bids. An object's price is what a newcomer has to beat:
/// its lowest held bid once all b slots are taken, 0 before. Sweeps repeat
/// until one places no bid.
AuctionResult auction_multibid(const BipartiteProblem &problem, const SparsifyConfig &config);

/// Makes a shadow selection symmetric. Edges picked in both directions are
/// kept; a one-directional pick (i, j) competes through its percentile, the
/// rank of j among i's neighbors by (weight desc, id asc). Picks are accepted
/// in ascending percentile (ties: smaller (min, max) pair first) while both
/// endpoints are below the cap. No replacement edges are searched for.
EdgeSelection percentile_repair(const WeightedGraph &graph, const EdgeSelection &selection,
                                std::optional<int> cap = std::nullopt);

/// Rank of `neighbor` in the descending-weight order of `node`'s edges.
std::size_t edge_percentile(const WeightedGraph &graph, NodeId node, NodeId neighbor);

struct SparsifyResult {
  EdgeSelection raw;        // method output
  EdgeSelection selection;  // after symmetrization
  std::int64_t iterations = 0;
  bool converged = true;
  double epsilon = 0.0;
  std::optional<double> cs_residual_max;  // max over every auction run
};

/// Full pipeline on an undirected graph: shadow conversion, method,
/// symmetrization.
SparsifyResult sparsify_graph(const WeightedGraph &graph, const SparsifyConfig &config);

/// Pipeline on a native buyers × objects problem (no symmetrization).
SparsifyResult sparsify_bipartite(const BipartiteProblem &problem, const SparsifyConfig &config);

}  // namespace auctiongraph
