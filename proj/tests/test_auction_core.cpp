#include <vector>

#include "auctiongraph/auction_core.hpp"
#include "auctiongraph/metrics.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace auctiongraph;

namespace {

AuctionOptions with_epsilon(double epsilon) {
  AuctionOptions options;
  options.epsilon = epsilon;
  return options;
}

}  // namespace

TEST_SUITE("auction_core") {
  TEST_CASE("bid on the best object with best minus second plus epsilon") {
    const BipartiteProblem p(1, 3, {{0, 0, 7}, {0, 1, 4}, {0, 2, 3}});
    const std::vector<double> prices{2, 1, 1};
    const auto bid = compute_bid(0, p, prices, 0.1);
    REQUIRE(bid);
    CHECK(bid->object == 0);
    CHECK(bid->increment == doctest::Approx(2.1));
  }

  TEST_CASE("equal profits go to the lowest object with increment epsilon") {
    const BipartiteProblem p(1, 2, {{0, 0, 1}, {0, 1, 1}});
    const std::vector<double> prices{0, 0};
    const auto bid = compute_bid(0, p, prices, 0.1);
    REQUIRE(bid);
    CHECK(bid->object == 0);
    CHECK(bid->increment == doctest::Approx(0.1));
  }

  TEST_CASE("isolated buyer makes no bid") {
    const BipartiteProblem p(2, 1, {{1, 0, 1}});
    const std::vector<double> prices{0};
    CHECK_FALSE(compute_bid(0, p, prices, 0.1).has_value());
  }

  TEST_CASE("single adjacent object bids best profit plus epsilon") {
    const BipartiteProblem p(1, 2, {{0, 1, 3}});
    const std::vector<double> prices{0, 1};
    const auto bid = compute_bid(0, p, prices, 0.5);
    REQUIRE(bid);
    CHECK(bid->object == 1);
    CHECK(bid->increment == doctest::Approx(2.5));
  }

  TEST_CASE("profit floor") {
    const BipartiteProblem p(1, 2, {{0, 0, 1}, {0, 1, 0.5}});
    const std::vector<double> prices{1.5, 1.0};
    CHECK_FALSE(compute_bid(0, p, prices, 0.1, 0.0).has_value());
    const auto bid = compute_bid(0, p, prices, 0.1);
    REQUIRE(bid);
    CHECK(bid->object == 0);
    CHECK(bid->increment == doctest::Approx(0.1));
    const std::vector<double> lower{0.5, 1.0};
    const auto floored = compute_bid(0, p, lower, 0.1, 0.0);
    REQUIRE(floored);
    CHECK(floored->increment == doctest::Approx(0.5 + 0.1));
  }

  TEST_CASE("2x2 assignment reaches weight 4") {
    const BipartiteProblem p(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
    const auto r = auction_assign(p, with_epsilon(0.01));
    CHECK(r.converged);
    CHECK(r.selection.contains({0, 0}));
    CHECK(r.selection.contains({1, 1}));
    CHECK(testref::selection_weight(p, r.selection) == 4.0);
  }

  TEST_CASE("diagonal problem gives the identity matching") {
    const BipartiteProblem p(3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
    const auto r = auction_assign(p, with_epsilon(0.1));
    CHECK(r.selection.size() == 3);
    for (NodeId i = 0; i < 3; ++i) CHECK(r.selection.contains({i, i}));
  }

  TEST_CASE("integer weights with epsilon below 1/n are optimal") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      const auto p = testref::random_integer_problem(8, 1, 100, seed);
      const auto r = auction_assign(p, with_epsilon(1.0 / 9.0));
      CHECK(r.converged);
      CHECK(testref::selection_weight(p, r.selection) == testref::permutation_optimum(p));
    }
  }

  TEST_CASE("real weights are within n epsilon of the optimum") {
    for (std::uint64_t seed = 1; seed <= 24; ++seed) {
      CAPTURE(seed);
      const int n = 4 + static_cast<int>(seed % 5);
      const auto p = testref::random_real_problem(n, seed);
      const double epsilon = 0.05;
      const auto r = auction_assign(p, with_epsilon(epsilon));
      REQUIRE(r.converged);
      CHECK(r.selection.size() == static_cast<std::size_t>(n));
      CHECK(testref::selection_weight(p, r.selection) >=
            testref::permutation_optimum(p) - n * epsilon - 1e-12);
    }
  }

  TEST_CASE("complementary slackness holds at termination") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto p = testref::random_real_problem(7, seed);
      const auto r = auction_assign(p, with_epsilon(0.02));
      CHECK(cs_residual_max(p, r.selection, r.prices) <= 0.02 * (1 + 1e-12));
      // Against the final prices directly.
      for (const Award &a : r.prices.awards) {
        double best = -1e300;
        for (const Neighbor &nb : p.adjacency(a.buyer)) {
          best = std::max(best, nb.weight - r.prices.prices[nb.node]);
        }
        CHECK(*p.weight(a.buyer, a.object) - r.prices.prices[a.object] >= best - 0.02 - 1e-12);
      }
    }
  }

  TEST_CASE("prices never decrease and events obey the progress bound") {
    const auto p = testref::random_real_problem(9, 77);
    const double epsilon = 0.01;
    std::vector<double> last(9, 0.0);
    bool monotone = true;
    AuctionOptions options = with_epsilon(epsilon);
    options.on_round = [&](std::span<const double> prices) {
      for (std::size_t j = 0; j < prices.size(); ++j) {
        monotone = monotone && prices[j] >= last[j];
        last[j] = prices[j];
      }
    };
    const auto r = auction_assign(p, options);
    CHECK(monotone);
    CHECK(r.rounds > 0);
    for (auto events : r.assignment_events) {
      CHECK(static_cast<double>(events) <= 1.0 + p.max_weight() / epsilon);
    }
  }

  TEST_CASE("runs are deterministic") {
    const auto p = testref::random_real_problem(9, 5);
    const auto a = auction_assign(p, with_epsilon(0.01));
    const auto b = auction_assign(p, with_epsilon(0.01));
    CHECK(a.selection == b.selection);
    CHECK(a.prices.prices == b.prices.prices);
    CHECK(a.rounds == b.rounds);
  }

  TEST_CASE("oversubscribed object without floor hits max_rounds") {
    const BipartiteProblem p(2, 1, {{0, 0, 1}, {1, 0, 1}});
    AuctionOptions options = with_epsilon(0.1);
    options.max_rounds = 50;
    const auto r = auction_assign(p, options);
    CHECK_FALSE(r.converged);
    CHECK(r.rounds == 50);
    CHECK(r.selection.size() == 1);
  }

  TEST_CASE("oversubscribed object with a floor terminates") {
    const BipartiteProblem p(2, 1, {{0, 0, 1}, {1, 0, 1}});
    AuctionOptions options = with_epsilon(0.1);
    options.profit_floor = 0.0;
    const auto r = auction_assign(p, options);
    CHECK(r.converged);
    CHECK(r.selection.size() == 1);
  }

  TEST_CASE("defaults") {
    const BipartiteProblem p(2, 4, {{0, 0, 2}, {1, 3, 8}});
    CHECK(default_epsilon(p) == doctest::Approx(8.0 / 16.0));
    CHECK(default_epsilon(BipartiteProblem(2, 2, {})) == doctest::Approx(1.0 / 8.0));
    CHECK(default_max_rounds(1.0, 0.25) == 50);
    CHECK_THROWS_AS(auction_assign(p, with_epsilon(0.0)), GraphError);
  }
}
