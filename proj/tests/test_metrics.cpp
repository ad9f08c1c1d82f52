#include <numeric>

#include "auctiongraph/metrics.hpp"
#include "auctiongraph/sparsify.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace auctiongraph;

namespace {

WeightedGraph ring(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0 + i});
  return WeightedGraph(n, std::move(edges), false);
}

EdgeSelection all_edges(const WeightedGraph &g, int cap) {
  EdgeSelection s(g.node_count(), g.node_count(), cap);
  for (const Edge &e : g.edges()) {
    s.insert({e.src, e.dst});
    s.insert({e.dst, e.src});
  }
  return s;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("regular selection has zero variance") {
    const auto g = ring(6);
    const auto r = evaluate(g, all_edges(g, 2));
    CHECK(r.node_count == 6);
    CHECK(r.selected_edge_count == 6);
    CHECK(r.degree_mean == 2.0);
    CHECK(r.degree_variance == 0.0);
    CHECK(r.degree_histogram.at(2) == 6);
    CHECK(r.is_symmetric);
    CHECK(r.total_selected_weight == 21.0);
  }

  TEST_CASE("empty selection") {
    const auto g = ring(4);
    RunInfo info;
    info.degree_target = 2;
    const auto r = evaluate(g, EdgeSelection(4, 4, 2), info);
    CHECK(r.selected_edge_count == 0);
    CHECK(r.total_selected_weight == 0.0);
    CHECK(r.degree_histogram.at(0) == 4);
    CHECK(r.degree_variance == 0.0);
    CHECK(r.is_symmetric);
    CHECK(r.deficit_nodes == 4);
    CHECK(r.deficit_total == 8);
  }

  TEST_CASE("population variance and handshake identity") {
    // Star on 4 nodes: degrees (3, 1, 1, 1).
    const WeightedGraph star(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, false);
    const auto r = evaluate(star, all_edges(star, 3));
    CHECK(r.degree_mean == 1.5);
    CHECK(r.degree_variance == doctest::Approx(0.75));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = testref::random_graph(15, 0.4, seed);
      const auto rep = evaluate(g, knn_select(g, 3));
      std::size_t total = 0, count = 0;
      for (auto [d, c] : rep.degree_histogram) {
        total += static_cast<std::size_t>(d) * c;
        count += c;
      }
      CHECK(count == rep.node_count);
      CHECK(total == 2 * rep.selected_edge_count);
      CHECK(rep.degree_variance >= 0.0);
    }
  }

  TEST_CASE("one-way picks are reported as asymmetric") {
    const auto g = ring(4);
    EdgeSelection s(4, 4, 1);
    s.insert({0, 1});
    const auto r = evaluate(g, s);
    CHECK_FALSE(r.is_symmetric);
    CHECK(r.selected_edge_count == 1);
  }

  TEST_CASE("deficits count only what the graph can supply") {
    const WeightedGraph path(3, {{0, 1, 1}, {1, 2, 1}}, false);
    RunInfo info;
    info.degree_target = 2;
    EdgeSelection s(3, 3, 2);
    s.insert({0, 1});
    s.insert({1, 0});
    const auto r = evaluate(path, s, info);
    CHECK(r.deficit_nodes == 2);
    CHECK(r.deficit_total == 2);
  }

  TEST_CASE("complementary slackness residual") {
    const BipartiteProblem p(1, 2, {{0, 0, 5}, {0, 1, 3}});
    EdgeSelection s(1, 2, 1);
    s.insert({0, 0});
    PriceState prices;
    prices.prices = {2.0, 1.0};
    prices.epsilon = 0.1;
    prices.awards = {{0, 0, 2.0}};
    CHECK(cs_residual_max(p, s, prices) == 0.0);
    prices.awards = {{0, 0, 3.5}};
    CHECK(cs_residual_max(p, s, prices) == doctest::Approx(0.5));
    prices.awards = {{0, 1, 1.0}};
    CHECK_THROWS_AS(cs_residual_max(p, s, prices), GraphError);
  }

  TEST_CASE("auction runs satisfy the residual bound") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const auto g = testref::random_graph(20, 0.5, seed);
      SparsifyConfig c;
      c.b = 2;
      const auto shadow = to_bipartite_shadow(g);
      const auto run = auction_multibid(shadow, c);
      RunInfo info;
      info.epsilon = run.prices.epsilon;
      const auto r = evaluate(g, run.selection, run.prices, info);
      REQUIRE(r.cs_residual_max);
      CHECK(*r.cs_residual_max <= run.prices.epsilon * (1 + 1e-12));
    }
  }

  TEST_CASE("bipartite report counts buyers then objects") {
    const BipartiteProblem p(2, 3, {{0, 0, 1}, {0, 2, 2}, {1, 1, 4}});
    EdgeSelection s(2, 3, 1);
    s.insert({0, 2});
    s.insert({1, 1});
    RunInfo info;
    info.degree_target = 1;
    const auto r = evaluate(p, s, info);
    CHECK(r.node_count == 5);
    CHECK(r.selected_edge_count == 2);
    CHECK(r.total_selected_weight == 6.0);
    CHECK(r.degree_histogram.at(1) == 4);
    CHECK(r.degree_histogram.at(0) == 1);
    CHECK(r.deficit_nodes == 1);
    CHECK(r.degree_convention == "bipartite, buyers then objects");
  }

  TEST_CASE("mismatched sizes are rejected") {
    const auto g = ring(4);
    CHECK_THROWS_AS(evaluate(g, EdgeSelection(3, 3, 1)), GraphError);
    CHECK_THROWS_AS(evaluate(WeightedGraph(2, {{0, 1, 1}}, true), EdgeSelection(2, 2, 1)), GraphError);
  }
}
