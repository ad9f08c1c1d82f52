#pragma once

// Per-buyer bidding step shared by the serial and the partitioned multi-edge
// auctions.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "auctiongraph/graph_model.hpp"

namespace auctiongraph::detail {

struct Candidate {
  NodeId object;
  double price;
  double profit;
};

inline bool better(const Candidate &a, const Candidate &b) {
  return a.profit > b.profit || (a.profit == b.profit && a.object < b.object);
}

/// Best `want` objects of `adj` not marked with `stamp`, by profit desc then
/// object id asc. `top` is overwritten.
inline void top_candidates(std::span<const Neighbor> adj, std::span<const double> prices,
                           std::span<const int> mark, int stamp, std::size_t want,
                           std::vector<Candidate> &top) {
  top.clear();
  for (const Neighbor &nb : adj) {
    if (mark[nb.node] == stamp) continue;
    Candidate c{nb.node, prices[nb.node], nb.weight - prices[nb.node]};
    if (top.size() == want && !better(c, top.back())) continue;
    if (top.size() < want) top.push_back(c);
    else top.back() = c;
    // Adjacency is scanned in id order, so equal profits never move ahead.
    for (std::size_t k = top.size() - 1; k > 0 && better(top[k], top[k - 1]); --k) {
      std::swap(top[k], top[k - 1]);
    }
  }
}

/// Bid prices for the first `count` entries of `top`, where `top` holds up to
/// demand + 1 ranked candidates. Object j_t is priced
///   a_{j_t} - profit(j_{t+1}) + epsilon,   t = 1 .. count,
/// with profits taken before any update. A missing j_{t+1} has profit 0 and,
/// with a floor, profits below the floor are raised to it. Only candidates
/// whose profit reaches the floor are bid on. Returns count.
inline std::size_t cascade_prices(std::span<const Candidate> top, std::size_t demand,
                                  std::optional<double> floor, double epsilon,
                                  std::vector<double> &bid_prices) {
  std::size_t count = std::min(demand, top.size());
  if (floor) {
    std::size_t willing = 0;
    while (willing < count && top[willing].profit >= *floor) ++willing;
    count = willing;
  }
  bid_prices.resize(count);
  for (std::size_t t = 0; t < count; ++t) {
    double next = t + 1 < top.size() ? top[t + 1].profit : 0.0;
    if (floor) next = std::max(next, *floor);
    // Without a floor a lone negative candidate would otherwise bid below its
    // current price.
    const double gap = std::max(top[t].profit - next, 0.0);
    bid_prices[t] = top[t].price + (gap + epsilon);
  }
  return count;
}

}  // namespace auctiongraph::detail
