#include <vector>

#include "auctiongraph/oracle_verify.hpp"
#include "auctiongraph/parallel_engine.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace auctiongraph;

namespace {

SparsifyConfig engine_config(int b, std::optional<double> epsilon, int partitions) {
  SparsifyConfig c;
  c.method = Method::kAuctionMultibid;
  c.b = b;
  c.epsilon = epsilon;
  c.partitions = partitions;
  return c;
}

// Two decoupled blocks: buyers [0, 3) only see objects [0, 3), buyers
// [3, 6) only objects [3, 6).
BipartiteProblem block_problem(std::uint64_t seed) {
  const auto left = testref::random_real_problem(3, seed);
  const auto right = testref::random_real_problem(3, seed + 100);
  std::vector<Edge> edges(left.edges().begin(), left.edges().end());
  for (const Edge &e : right.edges()) edges.push_back({e.src + 3, e.dst + 3, e.weight});
  return BipartiteProblem(6, 6, std::move(edges));
}

}  // namespace

TEST_SUITE("parallel_engine") {
  TEST_CASE("row partitions split evenly with larger parts first") {
    const auto p = testref::random_real_problem(10, 1);
    const auto two = partition_rows(p, 2);
    CHECK(two.parts() == 2);
    CHECK(two.begin(0) == 0);
    CHECK(two.end(0) == 5);
    CHECK(two.begin(1) == 5);
    CHECK(two.end(1) == 10);
    const auto three = partition_rows(p, 3);
    CHECK(three.size(0) == 4);
    CHECK(three.size(1) == 3);
    CHECK(three.size(2) == 3);
    CHECK(three.owner(4) == 1);
    CHECK(three.edges(0).size() == 40);
    const auto one = partition_rows(p, 1);
    CHECK(one.parts() == 1);
    CHECK(one.size(0) == 10);
    CHECK(one.edges(0).size() == p.edge_count());
    CHECK_THROWS_AS(partition_rows(p, 11), GraphError);
    CHECK_THROWS_AS(partition_rows(p, 0), GraphError);
  }

  TEST_CASE("one partition is identical to the serial reference") {
    for (int b : {1, 2, 3}) {
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto shadow = to_bipartite_shadow(testref::random_graph(20, 0.5, seed));
        const auto cfg = engine_config(b, std::nullopt, 1);
        const auto serial = auction_multibid(shadow, cfg);
        const auto engine = run_parallel_auction(shadow, cfg);
        CHECK(serial.selection == engine.selection);
        CHECK(serial.prices.prices == engine.prices.prices);
        CHECK(serial.rounds == engine.rounds);
        CHECK(serial.assignment_events == engine.assignment_events);
      }
    }
  }

  TEST_CASE("disjoint object supports decouple the partitions") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto p = block_problem(seed);
      const auto cfg = engine_config(1, 0.01, 2);
      const auto engine = run_parallel_auction(p, cfg);
      const auto serial = auction_multibid(p, engine_config(1, 0.01, 1));
      CHECK(engine.selection == serial.selection);
      CHECK(engine.prices.prices == serial.prices.prices);
    }
  }

  TEST_CASE("12x12 integer instance is optimal for every partition count") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto p = testref::random_integer_problem(12, 1, 100, seed);
      const double optimum = exact_assignment(p).weight;
      for (int parts : {1, 2, 4}) {
        CAPTURE(seed);
        CAPTURE(parts);
        const auto r = run_parallel_auction(p, engine_config(1, 1.0 / 13.0, parts));
        CHECK(r.converged);
        CHECK(testref::selection_weight(p, r.selection) == optimum);
      }
    }
  }

  TEST_CASE("prices rise and caps hold after every barrier") {
    const auto shadow = to_bipartite_shadow(testref::random_graph(30, 0.5, 8));
    for (int parts : {2, 4}) {
      std::vector<double> last(30, 0.0);
      bool monotone = true, capped = true;
      int barriers = 0;
      const auto hook = [&](const BarrierSnapshot &snap) {
        ++barriers;
        for (std::size_t j = 0; j < snap.prices.size(); ++j) {
          monotone = monotone && snap.prices[j] >= last[j];
          last[j] = snap.prices[j];
        }
        capped = capped && snap.selection.audit();
        for (NodeId i = 0; i < 30; ++i) {
          capped = capped && snap.selection.buyer_degree(i) <= 3 && snap.selection.object_degree(i) <= 3;
        }
      };
      const auto r = run_parallel_auction(shadow, engine_config(3, std::nullopt, parts), hook);
      CHECK(r.converged);
      CHECK(barriers > 0);
      CHECK(monotone);
      CHECK(capped);
    }
  }

  TEST_CASE("partition counts agree within n b epsilon") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const auto g = testref::random_graph(40, 0.5, seed);
      const auto shadow = to_bipartite_shadow(g);
      const int b = 3;
      const double epsilon = default_epsilon(shadow);
      const double base =
          testref::selection_weight(shadow, run_parallel_auction(shadow, engine_config(b, epsilon, 1)).selection);
      for (int parts : {2, 4, 8}) {
        const auto r = run_parallel_auction(shadow, engine_config(b, epsilon, parts));
        CHECK(r.converged);
        CHECK(std::abs(testref::selection_weight(shadow, r.selection) - base) <= 40 * b * epsilon);
      }
    }
  }

  TEST_CASE("thread count does not change the result") {
    const auto shadow = to_bipartite_shadow(testref::random_graph(40, 0.5, 3));
    auto cfg = engine_config(2, std::nullopt, 4);
    cfg.threads = 1;
    const auto single = run_parallel_auction(shadow, cfg);
    cfg.threads = 4;
    const auto multi = run_parallel_auction(shadow, cfg);
    CHECK(single.selection == multi.selection);
    CHECK(single.prices.prices == multi.prices.prices);
    CHECK(single.rounds == multi.rounds);
  }

  TEST_CASE("engine runs are deterministic") {
    const auto shadow = to_bipartite_shadow(testref::random_graph(40, 0.5, 4));
    const auto cfg = engine_config(2, std::nullopt, 4);
    const auto a = run_parallel_auction(shadow, cfg);
    const auto b = run_parallel_auction(shadow, cfg);
    CHECK(a.selection == b.selection);
    CHECK(a.prices.prices == b.prices.prices);
  }

  TEST_CASE("max_rounds cutoff reports non-termination") {
    const BipartiteProblem p(4, 1, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}, {3, 0, 1}});
    auto cfg = engine_config(1, 0.1, 2);
    cfg.max_rounds = 30;
    const auto r = run_parallel_auction(p, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.rounds == 30);
    CHECK(r.selection.size() == 1);
  }
}
