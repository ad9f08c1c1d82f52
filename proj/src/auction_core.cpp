#include "auctiongraph/auction_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace auctiongraph {

std::optional<Bid> compute_bid(NodeId buyer, const BipartiteProblem &problem,
                               std::span<const double> prices, double epsilon,
                               std::optional<double> profit_floor) {
  const auto adj = problem.adjacency(buyer);
  if (adj.empty()) return std::nullopt;

  constexpr double kNone = -std::numeric_limits<double>::infinity();
  double best = kNone, second = kNone;
  NodeId best_object = -1;
  for (const Neighbor &nb : adj) {
    const double profit = nb.weight - prices[nb.node];
    if (profit > best) {
      second = best;
      best = profit;
      best_object = nb.node;
    } else if (profit > second) {
      second = profit;
    }
  }
  if (adj.size() == 1) second = 0.0;
  if (profit_floor) {
    if (best < *profit_floor) return std::nullopt;
    second = std::max(second, *profit_floor);
  }
  const double increment = std::max(best - second, 0.0) + epsilon;
  return Bid{buyer, best_object, increment};
}

double default_epsilon(const BipartiteProblem &problem) {
  const double n = std::max<double>({1.0, static_cast<double>(problem.buyer_count()),
                                     static_cast<double>(problem.object_count())});
  const double top = problem.max_weight() > 0.0 ? problem.max_weight() : 1.0;
  return top / (4.0 * n);
}

std::int64_t default_max_rounds(double max_weight, double epsilon) {
  const double steps = std::ceil(max_weight / epsilon);
  constexpr double kCap = 1e15;
  return 10 * (1 + static_cast<std::int64_t>(std::min(steps, kCap)));
}

AuctionResult auction_assign(const BipartiteProblem &problem, const AuctionOptions &options) {
  if (!(options.epsilon > 0.0) || !std::isfinite(options.epsilon)) {
    throw GraphError("auction epsilon must be positive and finite");
  }
  const NodeId buyers = problem.buyer_count();
  const NodeId objects = problem.object_count();
  const std::int64_t max_rounds = options.max_rounds > 0
                                      ? options.max_rounds
                                      : default_max_rounds(problem.max_weight(), options.epsilon);

  std::vector<double> prices(static_cast<std::size_t>(objects), 0.0);
  std::vector<double> paid(static_cast<std::size_t>(objects), 0.0);
  std::vector<NodeId> owner(static_cast<std::size_t>(objects), -1);
  std::vector<NodeId> assigned(static_cast<std::size_t>(buyers), -1);
  std::vector<char> blocked(static_cast<std::size_t>(buyers), 0);
  std::vector<std::int64_t> events(static_cast<std::size_t>(objects), 0);

  auto can_bid = [&](NodeId i) {
    return assigned[i] < 0 && !blocked[i] && !problem.adjacency(i).empty();
  };

  AuctionResult result;
  bool pending = false;
  for (NodeId i = 0; i < buyers && !pending; ++i) pending = can_bid(i);
  result.converged = !pending;

  while (pending && result.rounds < max_rounds) {
    bool changed = false;
    for (NodeId i = 0; i < buyers; ++i) {
      if (!can_bid(i)) continue;
      auto bid = compute_bid(i, problem, prices, options.epsilon, options.profit_floor);
      if (!bid) {
        // Prices only rise, so a buyer priced out stays priced out.
        blocked[i] = 1;
        continue;
      }
      const NodeId j = bid->object;
      prices[j] += bid->increment;
      paid[j] = prices[j];
      ++events[j];
      if (owner[j] >= 0) assigned[owner[j]] = -1;
      owner[j] = i;
      assigned[i] = j;
      changed = true;
    }
    ++result.rounds;
    if (options.on_round) options.on_round(prices);

    pending = false;
    for (NodeId i = 0; i < buyers && !pending; ++i) pending = can_bid(i);
    if (!changed || !pending) {
      result.converged = true;
      break;
    }
  }

  result.selection = EdgeSelection(buyers, objects, 1);
  for (NodeId i = 0; i < buyers; ++i) {
    if (assigned[i] < 0) continue;
    result.selection.insert({i, assigned[i]});
    result.prices.awards.push_back({i, assigned[i], paid[assigned[i]]});
  }
  result.prices.prices = std::move(prices);
  result.prices.epsilon = options.epsilon;
  result.assignment_events = std::move(events);
  return result;
}

}  // namespace auctiongraph
