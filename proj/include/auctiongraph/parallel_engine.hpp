#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "auctiongraph/auction_core.hpp"
#include "auctiongraph/graph_model.hpp"
#include "auctiongraph/sparsify.hpp"

namespace auctiongraph {

/// Contiguous buyer ranges, sizes differ by at most one (larger ones first).
class PartitionPlan {
 public:
  PartitionPlan(const BipartiteProblem &problem, int parts);

  int parts() const noexcept { return static_cast<int>(bounds_.size()) - 1; }
  NodeId begin(int part) const { return bounds_[part]; }
  NodeId end(int part) const { return bounds_[part + 1]; }
  NodeId size(int part) const { return end(part) - begin(part); }
  int owner(NodeId buyer) const;
  /// Edges of the part's buyers: the row block A_l.
  std::span<const Edge> edges(int part) const;

 private:
  const BipartiteProblem *problem_;
  std::vector<NodeId> bounds_;
};

PartitionPlan partition_rows(const BipartiteProblem &problem, int parts);

/// State visible to tests right after a barrier.
struct BarrierSnapshot {
  std::int64_t iteration;
  std::span<const double> prices;
  const EdgeSelection &selection;
};

using BarrierHook = std::function<void(const BarrierSnapshot &)>;

/// Row-partitioned multi-edge auction with bulk-synchronous barriers.
///
/// Each iteration every partition sweeps its active buyers against a private
/// copy of the prices. At the barrier a single reducer takes the element-wise
/// max of the partition prices and lets each touched object keep its b best
/// bids (bid desc, buyer id asc); evicted buyers bid again next iteration.
/// Stops when an iteration leaves the global prices unchanged. For L = 1 the
/// result matches auction_multibid bit for bit.
AuctionResult run_parallel_auction(const BipartiteProblem &problem, const SparsifyConfig &config,
                                   const BarrierHook &hook = {});

}  // namespace auctiongraph
