#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "auctiongraph/graph_model.hpp"

namespace auctiongraph {

/// A won (buyer, object) slot and the price the buyer bid for it.
struct Award {
  NodeId buyer;
  NodeId object;
  double price;
};

/// Dual state of an auction: object prices (start at 0, never decrease) and
/// the bid price of every current award. Buyer profits are implicit:
/// a_ij - price of the award.
struct PriceState {
  std::vector<double> prices;
  double epsilon = 0.0;
  std::vector<Award> awards;  // sorted by (buyer, object)
};

struct Bid {
  NodeId buyer;
  NodeId object;
  double increment;
};

/// Best adjacent object for `buyer` at the given prices and the price
/// increment it bids: (best profit - second best profit) + epsilon.
///
/// Ties go to the lowest object id. A buyer with a single adjacent object
/// takes the second best profit as 0. With a profit floor the second best is
/// raised to the floor (the value of staying unassigned) and no bid is made
/// when the best profit is below it. Returns nothing for an isolated buyer.
std::optional<Bid> compute_bid(NodeId buyer, const BipartiteProblem &problem,
                               std::span<const double> prices, double epsilon,
                               std::optional<double> profit_floor = std::nullopt);

inline std::optional<Bid> compute_bid(NodeId buyer, const BipartiteProblem &problem,
                                      const PriceState &state,
                                      std::optional<double> profit_floor = std::nullopt) {
  return compute_bid(buyer, problem, state.prices, state.epsilon, profit_floor);
}

struct AuctionOptions {
  double epsilon = 0.0;         // must be > 0
  std::int64_t max_rounds = 0;  // 0 selects default_max_rounds
  std::optional<double> profit_floor;  // nullopt: no floor
  /// Called after every round with the current price vector.
  std::function<void(std::span<const double>)> on_round;
};

struct AuctionResult {
  EdgeSelection selection;
  PriceState prices;
  std::int64_t rounds = 0;
  bool converged = false;
  /// Number of times each object was won during the run.
  std::vector<std::int64_t> assignment_events;
};

/// max_ij a_ij / (4 n) with n = max(buyers, objects); 1 / (4 n) when every
/// weight is 0.
double default_epsilon(const BipartiteProblem &problem);

/// 10 * (1 + ceil(max_weight / epsilon)).
std::int64_t default_max_rounds(double max_weight, double epsilon);

/// Single-edge auction (Gauss-Seidel, buyers in ascending id each round).
/// Stops when no unassigned buyer can bid, when a round changes nothing, or
/// at max_rounds (converged = false, partial assignment kept).
AuctionResult auction_assign(const BipartiteProblem &problem, const AuctionOptions &options);

}  // namespace auctiongraph
