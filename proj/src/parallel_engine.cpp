#include "auctiongraph/parallel_engine.hpp"

#include <omp.h>

#include <algorithm>

#include "bid_kernel.hpp"

namespace auctiongraph {

PartitionPlan::PartitionPlan(const BipartiteProblem &problem, int parts) : problem_(&problem) {
  const NodeId n = problem.buyer_count();
  if (parts < 1) throw GraphError("partition count must be at least 1");
  if (parts > std::max<NodeId>(n, 1)) throw GraphError("more partitions than buyers");
  const NodeId base = n / parts;
  const NodeId extra = n % parts;
  bounds_.assign(1, 0);
  for (int p = 0; p < parts; ++p) bounds_.push_back(bounds_.back() + base + (p < extra ? 1 : 0));
}

int PartitionPlan::owner(NodeId buyer) const {
  if (buyer < 0 || buyer >= bounds_.back()) throw GraphError("buyer out of range");
  const auto it = std::upper_bound(bounds_.begin(), bounds_.end(), buyer);
  return static_cast<int>(it - bounds_.begin()) - 1;
}

std::span<const Edge> PartitionPlan::edges(int part) const {
  const auto all = problem_->edges();
  const NodeId n = problem_->buyer_count();
  const std::size_t first = begin(part) < n ? problem_->edge_offset(begin(part)) : all.size();
  const std::size_t last = end(part) < n ? problem_->edge_offset(end(part)) : all.size();
  return all.subspan(first, last - first);
}

PartitionPlan partition_rows(const BipartiteProblem &problem, int parts) {
  return PartitionPlan(problem, parts);
}

namespace {

struct Holder {
  NodeId buyer;
  double bid;
};

// Partition-private scratch and the local view of prices and holders.
struct Worker {
  std::vector<double> prices;
  std::vector<std::vector<Holder>> overlay;
  std::vector<std::int64_t> touched_at;
  std::vector<NodeId> touched;
  std::vector<std::int64_t> events;
  std::vector<int> mark;
  int stamp = 0;
  std::vector<detail::Candidate> top;
  std::vector<double> bid_prices;
  bool any_bid = false;
};

// Price a newcomer has to beat: the lowest bid of a full object, else 0.
double entry_price_of(const std::vector<Holder> &slots, std::size_t b) {
  if (slots.size() < b) return 0.0;
  double low = slots.front().bid;
  for (const Holder &h : slots) low = std::min(low, h.bid);
  return low;
}

}  // namespace

AuctionResult run_parallel_auction(const BipartiteProblem &problem, const SparsifyConfig &config,
                                   const BarrierHook &hook) {
  config.validate();
  const PartitionPlan plan(problem, config.partitions);
  const int parts = plan.parts();
  const double epsilon = resolve_epsilon(problem, config);
  const int b = config.b;
  const auto bsz = static_cast<std::size_t>(b);
  const NodeId buyers = problem.buyer_count();
  const NodeId objects = problem.object_count();
  const auto nobj = static_cast<std::size_t>(objects);
  // Bulk-synchronous sweeps see stale prices, so the cutoff also scales with L.
  const std::int64_t max_rounds =
      config.max_rounds > 0 ? config.max_rounds
                            : std::int64_t{b} * parts * default_max_rounds(problem.max_weight(), epsilon);

  std::vector<double> prices(nobj, 0.0);
  std::vector<std::vector<Holder>> holders(nobj);
  std::vector<NodeId> held(static_cast<std::size_t>(buyers) * bsz, -1);
  std::vector<int> held_count(static_cast<std::size_t>(buyers), 0);
  std::vector<int> quota(static_cast<std::size_t>(buyers), 0);
  std::vector<char> blocked(static_cast<std::size_t>(buyers), 0);
  for (NodeId i = 0; i < buyers; ++i) {
    quota[i] = static_cast<int>(std::min(bsz, problem.adjacency(i).size()));
  }
  std::vector<int> owner(static_cast<std::size_t>(buyers), 0);
  for (int p = 0; p < parts; ++p) {
    for (NodeId i = plan.begin(p); i < plan.end(p); ++i) owner[i] = p;
  }

  std::vector<Worker> workers(static_cast<std::size_t>(parts));
  for (Worker &w : workers) {
    w.prices = prices;
    w.overlay.resize(nobj);
    w.touched_at.assign(nobj, -1);
    w.events.assign(nobj, 0);
    w.mark.assign(nobj, 0);
  }

  auto entry_price = [bsz](const std::vector<Holder> &slots) { return entry_price_of(slots, bsz); };

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

  // Each worker writes only its own buyers' held lists and blocked flags and
  // reads the global holders, which stay fixed until the barrier.
  auto sweep = [&](int p, std::int64_t iteration) {
    Worker &w = workers[static_cast<std::size_t>(p)];
    w.any_bid = false;
    w.touched.clear();
    for (NodeId i = plan.begin(p); i < plan.end(p); ++i) {
      if (held_count[i] >= quota[i] || blocked[i]) continue;
      const auto demand = static_cast<std::size_t>(quota[i] - held_count[i]);
      ++w.stamp;
      for (int s = 0; s < held_count[i]; ++s) w.mark[held[static_cast<std::size_t>(i) * bsz + s]] = w.stamp;
      detail::top_candidates(problem.adjacency(i), w.prices, w.mark, w.stamp, demand + 1, w.top);
      const std::size_t count =
          detail::cascade_prices(w.top, demand, config.profit_floor, epsilon, w.bid_prices);
      if (count == 0) {
        blocked[i] = 1;
        continue;
      }
      w.any_bid = true;
      for (std::size_t t = 0; t < count; ++t) {
        const NodeId j = w.top[t].object;
        const double bid = w.bid_prices[t];
        ++w.events[j];
        if (w.touched_at[j] != iteration) {
          w.touched_at[j] = iteration;
          w.touched.push_back(j);
          w.overlay[j] = holders[j];
        }
        held[static_cast<std::size_t>(i) * bsz + held_count[i]++] = j;
        auto &slots = w.overlay[j];
        if (slots.size() < bsz) {
          slots.push_back({i, bid});
        } else {
          auto victim = slots.begin();
          for (auto s = slots.begin() + 1; s != slots.end(); ++s) {
            if (s->bid < victim->bid || (s->bid == victim->bid && s->buyer > victim->buyer)) victim = s;
          }
          if (owner[victim->buyer] == p) {
            drop_held(victim->buyer, j);
            blocked[victim->buyer] = 0;
          }
          *victim = {i, bid};
        }
        w.prices[j] = entry_price(slots);
      }
    }
  };

  const int hardware = std::max(1, omp_get_num_procs());
  const int threads = std::min(parts, config.threads > 0 ? config.threads : hardware);

  AuctionResult result;
  result.converged = false;
  std::vector<NodeId> touched;
  std::vector<char> in_touched(nobj, 0);
  std::vector<Holder> candidates;
  while (result.rounds < max_rounds) {
    const std::int64_t iteration = result.rounds;
#pragma omp parallel for schedule(static, 1) num_threads(threads)
    for (int p = 0; p < parts; ++p) sweep(p, iteration);
    ++result.rounds;

    bool any_bid = false;
    touched.clear();
    for (const Worker &w : workers) {
      any_bid = any_bid || w.any_bid;
      for (NodeId j : w.touched) {
        if (!in_touched[j]) {
          in_touched[j] = 1;
          touched.push_back(j);
        }
      }
    }
    if (!any_bid) {
      result.converged = true;
      break;
    }

    std::sort(touched.begin(), touched.end());
    for (NodeId j : touched) {
      in_touched[j] = 0;
      candidates.clear();
      for (const Holder &h : holders[j]) {
        // A worker that touched j already holds the current state of its own buyers.
        if (workers[static_cast<std::size_t>(owner[h.buyer])].touched_at[j] != iteration) {
          candidates.push_back(h);
        }
      }
      double price = prices[j];
      for (int p = 0; p < parts; ++p) {
        const Worker &w = workers[static_cast<std::size_t>(p)];
        if (w.touched_at[j] != iteration) continue;
        price = std::max(price, w.prices[j]);
        for (const Holder &h : w.overlay[j]) {
          if (owner[h.buyer] == p) candidates.push_back(h);
        }
      }
      std::sort(candidates.begin(), candidates.end(), [](const Holder &a, const Holder &c) {
        return a.bid > c.bid || (a.bid == c.bid && a.buyer < c.buyer);
      });
      for (std::size_t k = bsz; k < candidates.size(); ++k) {
        drop_held(candidates[k].buyer, j);
        blocked[candidates[k].buyer] = 0;
      }
      if (candidates.size() > bsz) candidates.resize(bsz);
      holders[j] = candidates;
      // The resolved holders are a best-b subset of all bids, so their entry
      // price never falls below any partition's.
      prices[j] = std::max(price, entry_price(holders[j]));
    }
    for (Worker &w : workers) {
      for (NodeId j : touched) w.prices[j] = prices[j];
    }

    if (hook) {
      EdgeSelection snapshot(buyers, objects, b);
      for (NodeId j = 0; j < objects; ++j) {
        for (const Holder &h : holders[j]) snapshot.insert({h.buyer, j});
      }
      hook(BarrierSnapshot{result.rounds, prices, snapshot});
    }
  }

  result.selection = EdgeSelection(buyers, objects, b);
  for (NodeId j = 0; j < objects; ++j) {
    for (const Holder &h : holders[j]) {
      result.selection.insert({h.buyer, j});
      result.prices.awards.push_back({h.buyer, j, h.bid});
    }
  }
  std::sort(result.prices.awards.begin(), result.prices.awards.end(),
            [](const Award &a, const Award &c) {
              return std::pair(a.buyer, a.object) < std::pair(c.buyer, c.object);
            });
  result.prices.prices = std::move(prices);
  result.prices.epsilon = epsilon;
  result.assignment_events.assign(nobj, 0);
  for (const Worker &w : workers) {
    for (std::size_t j = 0; j < nobj; ++j) result.assignment_events[j] += w.events[j];
  }
  return result;
}

}  // namespace auctiongraph
