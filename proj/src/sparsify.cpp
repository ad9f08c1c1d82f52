#include "auctiongraph/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

#include "auctiongraph/metrics.hpp"
#include "auctiongraph/parallel_engine.hpp"
#include "bid_kernel.hpp"

namespace auctiongraph {

const char *to_string(Method method) {
  switch (method) {
    case Method::kAuctionRounds: return "auction_rounds";
    case Method::kAuctionMultibid: return "auction_multibid";
    case Method::kKnn: return "knn";
  }
  return "unknown";
}

const char *to_string(Symmetrize mode) {
  switch (mode) {
    case Symmetrize::kPercentile: return "percentile";
    case Symmetrize::kMax: return "max";
    case Symmetrize::kMin: return "min";
    case Symmetrize::kNone: return "none";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string &name) {
  for (Method m : {Method::kAuctionRounds, Method::kAuctionMultibid, Method::kKnn}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<Symmetrize> parse_symmetrize(const std::string &name) {
  for (Symmetrize s : {Symmetrize::kPercentile, Symmetrize::kMax, Symmetrize::kMin, Symmetrize::kNone}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

void SparsifyConfig::validate() const {
  if (b < 1) throw GraphError("b must be at least 1");
  if (partitions < 1) throw GraphError("partition count must be at least 1");
  if (epsilon && (!(*epsilon > 0.0) || !std::isfinite(*epsilon))) {
    throw GraphError("epsilon must be positive and finite");
  }
  if (max_rounds < 0) throw GraphError("max_rounds must be non-negative");
  if (threads < 0) throw GraphError("thread count must be non-negative");
}

double resolve_epsilon(const BipartiteProblem &problem, const SparsifyConfig &config) {
  return config.epsilon ? *config.epsilon : default_epsilon(problem);
}

EdgeSelection knn_select(const WeightedGraph &graph, int k) {
  if (k < 1) throw GraphError("k must be at least 1");
  const NodeId n = graph.node_count();
  std::vector<Pair> pairs;
  std::vector<int> in_degree(static_cast<std::size_t>(n), 0);
  std::vector<Neighbor> row;
  for (NodeId i = 0; i < n; ++i) {
    auto nbrs = graph.neighbors(i);
    row.assign(nbrs.begin(), nbrs.end());
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), row.size());
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), row.end(),
                      [](const Neighbor &a, const Neighbor &b) {
                        return a.weight > b.weight || (a.weight == b.weight && a.node < b.node);
                      });
    for (std::size_t t = 0; t < keep; ++t) {
      pairs.push_back({i, row[t].node});
      ++in_degree[row[t].node];
    }
  }
  const int cap = std::max(k, n > 0 ? *std::max_element(in_degree.begin(), in_degree.end()) : 0);
  EdgeSelection selection(n, n, cap);
  for (const Pair &p : pairs) selection.insert(p);
  return selection;
}

namespace {

void require_square(const EdgeSelection &selection) {
  if (selection.buyer_count() != selection.object_count()) {
    throw GraphError("symmetrization needs a square (shadow) selection");
  }
}

EdgeSelection symmetric_from_edges(NodeId n, const std::vector<std::pair<NodeId, NodeId>> &edges,
                                   int min_cap) {
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (auto [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }
  int cap = min_cap;
  for (int d : degree) cap = std::max(cap, d);
  EdgeSelection out(n, n, cap);
  for (auto [u, v] : edges) {
    out.insert({u, v});
    out.insert({v, u});
  }
  return out;
}

}  // namespace

EdgeSelection symmetrize_max(const EdgeSelection &selection) {
  require_square(selection);
  return symmetric_from_edges(selection.buyer_count(), project_undirected(selection),
                              selection.degree_cap());
}

EdgeSelection symmetrize_min(const EdgeSelection &selection) {
  require_square(selection);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const Pair &p : selection) {
    if (p.buyer < p.object && selection.contains({p.object, p.buyer})) {
      edges.emplace_back(p.buyer, p.object);
    }
  }
  return symmetric_from_edges(selection.buyer_count(), edges, selection.degree_cap());
}

RoundsResult auction_b_rounds(const BipartiteProblem &problem, const SparsifyConfig &config) {
  config.validate();
  const bool shadow = problem.is_shadow();
  if (shadow && problem.shadow()->directed) {
    throw GraphError("auction_b_rounds needs the shadow of an undirected graph");
  }
  const int rounds = shadow ? (config.b + 1) / 2 : config.b;
  const double epsilon = resolve_epsilon(problem, config);

  SparsifyConfig round_config = config;
  round_config.b = 1;
  round_config.epsilon = epsilon;
  AuctionOptions options;
  options.epsilon = epsilon;
  options.max_rounds = config.max_rounds;
  options.profit_floor = config.profit_floor;

  RoundsResult result;
  auto run_round = [&](const BipartiteProblem &current) -> const AuctionResult & {
    AuctionResult run = config.partitions > 1 ? run_parallel_auction(current, round_config)
                                              : auction_assign(current, options);
    result.iterations += run.rounds;
    result.converged = result.converged && run.converged;
    result.rounds.push_back(std::move(run));
    result.round_problems.push_back(current);
    return result.rounds.back();
  };

  if (!shadow) {
    result.selection = EdgeSelection(problem.buyer_count(), problem.object_count(), config.b);
    BipartiteProblem current = problem;
    for (int r = 0; r < rounds; ++r) {
      const AuctionResult &run = run_round(current);
      for (const Pair &p : run.selection) result.selection.insert(p);
      if (!run.converged || run.selection.empty()) break;
      current = current.filtered(
          [&](NodeId buyer, NodeId object) { return !result.selection.contains({buyer, object}); });
    }
    return result;
  }

  const NodeId n = problem.buyer_count();
  std::set<std::pair<NodeId, NodeId>> chosen, dropped;
  std::vector<std::vector<NodeId>> incident(static_cast<std::size_t>(n));
  auto key = [](NodeId u, NodeId v) { return std::pair(std::min(u, v), std::max(u, v)); };
  auto short_of_b = [&](NodeId v) { return static_cast<int>(incident[v].size()) < config.b; };

  // Adds a round's projected edges, then lets every node past b (ascending
  // id) drop its lightest edges. Returns the net number of edges gained.
  auto absorb_round = [&](const EdgeSelection &selection) {
    const std::size_t before = chosen.size();
    for (const Pair &p : selection) {
      if (!chosen.insert(key(p.buyer, p.object)).second) continue;
      incident[p.buyer].push_back(p.object);
      incident[p.object].push_back(p.buyer);
    }
    for (NodeId v = 0; v < n; ++v) {
      auto &list = incident[v];
      if (static_cast<int>(list.size()) <= config.b) continue;
      std::sort(list.begin(), list.end(), [&](NodeId a, NodeId c) {
        const double wa = *problem.weight(v, a), wc = *problem.weight(v, c);
        return wa < wc || (wa == wc && a > c);
      });
      const std::size_t excess = list.size() - static_cast<std::size_t>(config.b);
      for (std::size_t k = 0; k < excess; ++k) {
        const NodeId u = list[k];
        chosen.erase(key(u, v));
        dropped.insert(key(u, v));
        auto &other = incident[u];
        other.erase(std::find(other.begin(), other.end(), v));
      }
      list.erase(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(excess));
    }
    return static_cast<std::ptrdiff_t>(chosen.size()) - static_cast<std::ptrdiff_t>(before);
  };
  auto unused = [&](NodeId u, NodeId v) {
    return !chosen.contains(key(u, v)) && !dropped.contains(key(u, v));
  };

  BipartiteProblem current = problem;
  for (int r = 0; r < rounds; ++r) {
    const AuctionResult &run = run_round(current);
    absorb_round(run.selection);
    if (!run.converged || run.selection.empty()) break;
    current = current.filtered(unused);
  }
  // Symmetric weights often make the optimal shadow assignment a union of
  // 2-cycles, which adds one edge per node instead of two. Further rounds run
  // on the unused edges between nodes still short of b; their projected edges
  // are accepted heaviest first while both endpoints stay within b. The
  // heaviest one always fits, so every round gains an edge.
  std::vector<std::pair<NodeId, NodeId>> offered;
  while (result.converged) {
    current = problem.filtered(
        [&](NodeId u, NodeId v) { return unused(u, v) && short_of_b(u) && short_of_b(v); });
    if (current.edge_count() == 0) break;
    const AuctionResult &run = run_round(current);
    offered = project_undirected(run.selection);
    if (offered.empty()) break;
    std::sort(offered.begin(), offered.end(), [&](const auto &a, const auto &c) {
      const double wa = *problem.weight(a.first, a.second);
      const double wc = *problem.weight(c.first, c.second);
      return wa > wc || (wa == wc && a < c);
    });
    for (auto [u, v] : offered) {
      if (!short_of_b(u) || !short_of_b(v)) continue;
      chosen.insert(key(u, v));
      incident[u].push_back(v);
      incident[v].push_back(u);
    }
  }

  result.selection = EdgeSelection(n, n, config.b);
  for (auto [u, v] : chosen) {
    result.selection.insert({u, v});
    result.selection.insert({v, u});
  }
  return result;
}

AuctionResult auction_multibid(const BipartiteProblem &problem, const SparsifyConfig &config) {
  config.validate();
  const double epsilon = resolve_epsilon(problem, config);
  const int b = config.b;
  const NodeId buyers = problem.buyer_count();
  const NodeId objects = problem.object_count();
  const std::int64_t max_rounds =
      config.max_rounds > 0 ? config.max_rounds
                            : b * default_max_rounds(problem.max_weight(), epsilon);
  const auto bsz = static_cast<std::size_t>(b);

  std::vector<double> prices(static_cast<std::size_t>(objects), 0.0);
  std::vector<NodeId> slot_buyer(static_cast<std::size_t>(objects) * bsz, -1);
  std::vector<double> slot_bid(static_cast<std::size_t>(objects) * bsz, 0.0);
  std::vector<int> slot_count(static_cast<std::size_t>(objects), 0);
  std::vector<NodeId> held(static_cast<std::size_t>(buyers) * bsz, -1);
  std::vector<int> held_count(static_cast<std::size_t>(buyers), 0);
  std::vector<int> quota(static_cast<std::size_t>(buyers), 0);
  std::vector<char> blocked(static_cast<std::size_t>(buyers), 0);
  std::vector<std::int64_t> events(static_cast<std::size_t>(objects), 0);
  std::vector<int> mark(static_cast<std::size_t>(objects), 0);
  int stamp = 0;
  for (NodeId i = 0; i < buyers; ++i) {
    quota[i] = static_cast<int>(std::min(bsz, problem.adjacency(i).size()));
  }

  auto drop_held = [&](NodeId buyer, NodeId object) {
    NodeId *row = &held[static_cast<std::size_t>(buyer) * bsz];
    int &count = held_count[buyer];
    for (int s = 0; s < count; ++s) {
      if (row[s] == object) {
        row[s] = row[count - 1];
        --count;
        return;
      }
    }
  };

  std::vector<detail::Candidate> top;
  std::vector<double> bid_prices;
  AuctionResult result;
  result.converged = false;
  while (result.rounds < max_rounds) {
    bool any_bid = false;
    for (NodeId i = 0; i < buyers; ++i) {
      if (held_count[i] >= quota[i] || blocked[i]) continue;
      const auto demand = static_cast<std::size_t>(quota[i] - held_count[i]);
      ++stamp;
      for (int s = 0; s < held_count[i]; ++s) mark[held[static_cast<std::size_t>(i) * bsz + s]] = stamp;
      detail::top_candidates(problem.adjacency(i), prices, mark, stamp, demand + 1, top);
      const std::size_t count =
          detail::cascade_prices(top, demand, config.profit_floor, epsilon, bid_prices);
      if (count == 0) {
        blocked[i] = 1;
        continue;
      }
      any_bid = true;
      for (std::size_t t = 0; t < count; ++t) {
        const NodeId j = top[t].object;
        const double bid = bid_prices[t];
        ++events[j];
        held[static_cast<std::size_t>(i) * bsz + held_count[i]++] = j;
        const std::size_t base = static_cast<std::size_t>(j) * bsz;
        if (slot_count[j] < b) {
          slot_buyer[base + slot_count[j]] = i;
          slot_bid[base + slot_count[j]] = bid;
          ++slot_count[j];
        } else {
          // The new bid beats the lowest holder, which leaves.
          std::size_t victim = base;
          for (std::size_t s = base + 1; s < base + bsz; ++s) {
            if (slot_bid[s] < slot_bid[victim] ||
                (slot_bid[s] == slot_bid[victim] && slot_buyer[s] > slot_buyer[victim])) {
              victim = s;
            }
          }
          drop_held(slot_buyer[victim], j);
          blocked[slot_buyer[victim]] = 0;
          slot_buyer[victim] = i;
          slot_bid[victim] = bid;
        }
        if (slot_count[j] == b) {
          prices[j] = *std::min_element(slot_bid.begin() + static_cast<std::ptrdiff_t>(base),
                                        slot_bid.begin() + static_cast<std::ptrdiff_t>(base + bsz));
        }
      }
    }
    ++result.rounds;
    if (!any_bid) {
      result.converged = true;
      break;
    }
  }

  result.selection = EdgeSelection(buyers, objects, b);
  for (NodeId j = 0; j < objects; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * bsz;
    for (int s = 0; s < slot_count[j]; ++s) {
      result.selection.insert({slot_buyer[base + s], j});
      result.prices.awards.push_back({slot_buyer[base + s], j, slot_bid[base + s]});
    }
  }
  std::sort(result.prices.awards.begin(), result.prices.awards.end(),
            [](const Award &a, const Award &c) {
              return std::pair(a.buyer, a.object) < std::pair(c.buyer, c.object);
            });
  result.prices.prices = std::move(prices);
  result.prices.epsilon = epsilon;
  result.assignment_events = std::move(events);
  return result;
}

std::size_t edge_percentile(const WeightedGraph &graph, NodeId node, NodeId neighbor) {
  const auto w = graph.weight(node, neighbor);
  if (!w) throw GraphError("percentile of a missing edge");
  std::size_t rank = 0;
  for (const Neighbor &nb : graph.neighbors(node)) {
    if (nb.weight > *w || (nb.weight == *w && nb.node < neighbor)) ++rank;
  }
  return rank;
}

EdgeSelection percentile_repair(const WeightedGraph &graph, const EdgeSelection &selection,
                                std::optional<int> cap) {
  require_square(selection);
  const NodeId n = graph.node_count();
  if (selection.buyer_count() != n) throw GraphError("selection does not match graph size");
  const int limit = cap.value_or(selection.degree_cap());
  if (limit < 1) throw GraphError("degree cap must be at least 1");

  // (class, rank, min, max): mutual picks first, then one-directional picks.
  using Key = std::tuple<int, std::size_t, NodeId, NodeId>;
  std::vector<Key> order;
  for (const Pair &p : selection) {
    if (!graph.weight(p.buyer, p.object)) throw GraphError("selected pair has no source edge");
    const auto [lo, hi] = std::minmax(p.buyer, p.object);
    if (selection.contains({p.object, p.buyer})) {
      if (p.buyer < p.object) {
        const std::size_t rank = std::max(edge_percentile(graph, p.buyer, p.object),
                                          edge_percentile(graph, p.object, p.buyer));
        order.emplace_back(0, rank, lo, hi);
      }
    } else {
      order.emplace_back(1, edge_percentile(graph, p.buyer, p.object), lo, hi);
    }
  }
  std::sort(order.begin(), order.end());

  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<NodeId, NodeId>> kept;
  for (const auto &[cls, rank, lo, hi] : order) {
    if (degree[lo] >= limit || degree[hi] >= limit) continue;
    ++degree[lo];
    ++degree[hi];
    kept.emplace_back(lo, hi);
  }
  EdgeSelection out(n, n, limit);
  for (auto [u, v] : kept) {
    out.insert({u, v});
    out.insert({v, u});
  }
  return out;
}

namespace {

EdgeSelection symmetrize(const WeightedGraph &graph, const EdgeSelection &raw, Symmetrize mode,
                         int b) {
  switch (mode) {
    case Symmetrize::kPercentile: return percentile_repair(graph, raw, b);
    case Symmetrize::kMax: return symmetrize_max(raw);
    case Symmetrize::kMin: return symmetrize_min(raw);
    case Symmetrize::kNone: return raw;
  }
  return raw;
}

void absorb(SparsifyResult &out, const BipartiteProblem &problem, const AuctionResult &run) {
  out.iterations += run.rounds;
  out.converged = out.converged && run.converged;
  const double residual = cs_residual_max(problem, run.selection, run.prices);
  out.cs_residual_max = std::max(out.cs_residual_max.value_or(0.0), residual);
}

}  // namespace

SparsifyResult sparsify_graph(const WeightedGraph &graph, const SparsifyConfig &config) {
  config.validate();
  if (graph.directed()) throw GraphError("sparsify_graph needs an undirected graph");
  SparsifyResult out;
  if (config.method == Method::kKnn) {
    out.raw = knn_select(graph, config.b);
    out.selection = symmetrize(graph, out.raw, config.symmetrize, config.b);
    return out;
  }
  const BipartiteProblem problem = to_bipartite_shadow(graph);
  out.epsilon = resolve_epsilon(problem, config);
  SparsifyConfig resolved = config;
  resolved.epsilon = out.epsilon;
  if (config.method == Method::kAuctionRounds) {
    RoundsResult rounds = auction_b_rounds(problem, resolved);
    for (std::size_t r = 0; r < rounds.rounds.size(); ++r) {
      absorb(out, rounds.round_problems[r], rounds.rounds[r]);
    }
    out.raw = std::move(rounds.selection);
  } else {
    AuctionResult run = config.partitions > 1 ? run_parallel_auction(problem, resolved)
                                              : auction_multibid(problem, resolved);
    absorb(out, problem, run);
    out.raw = std::move(run.selection);
  }
  out.selection = symmetrize(graph, out.raw, config.symmetrize, config.b);
  return out;
}

SparsifyResult sparsify_bipartite(const BipartiteProblem &problem, const SparsifyConfig &config) {
  config.validate();
  SparsifyResult out;
  if (config.method == Method::kKnn) {
    // Each buyer keeps its k heaviest objects.
    std::vector<Pair> pairs;
    std::vector<int> in_degree(static_cast<std::size_t>(problem.object_count()), 0);
    std::vector<Neighbor> row;
    for (NodeId i = 0; i < problem.buyer_count(); ++i) {
      auto adj = problem.adjacency(i);
      row.assign(adj.begin(), adj.end());
      const auto keep = std::min<std::size_t>(static_cast<std::size_t>(config.b), row.size());
      std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(keep), row.end(),
                        [](const Neighbor &a, const Neighbor &c) {
                          return a.weight > c.weight || (a.weight == c.weight && a.node < c.node);
                        });
      for (std::size_t t = 0; t < keep; ++t) {
        pairs.push_back({i, row[t].node});
        ++in_degree[row[t].node];
      }
    }
    int cap = config.b;
    for (int d : in_degree) cap = std::max(cap, d);
    out.raw = EdgeSelection(problem.buyer_count(), problem.object_count(), cap);
    for (const Pair &p : pairs) out.raw.insert(p);
    out.selection = out.raw;
    return out;
  }
  out.epsilon = resolve_epsilon(problem, config);
  SparsifyConfig resolved = config;
  resolved.epsilon = out.epsilon;
  if (config.method == Method::kAuctionRounds) {
    RoundsResult rounds = auction_b_rounds(problem, resolved);
    for (std::size_t r = 0; r < rounds.rounds.size(); ++r) {
      absorb(out, rounds.round_problems[r], rounds.rounds[r]);
    }
    out.raw = std::move(rounds.selection);
  } else {
    AuctionResult run = config.partitions > 1 ? run_parallel_auction(problem, resolved)
                                              : auction_multibid(problem, resolved);
    absorb(out, problem, run);
    out.raw = std::move(run.selection);
  }
  out.selection = out.raw;
  return out;
}

}  // namespace auctiongraph
