#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "auctiongraph/sparsify.hpp"
#include "json.hpp"

namespace auctiongraph {

struct BenchConfig {
  std::vector<int> sizes{100, 200};
  int b = 10;
  std::vector<Method> methods{Method::kKnn, Method::kAuctionMultibid};
  std::vector<int> partitions{1};
  int repeats = 1;
  bool bipartite = false;  // uniform bipartite instead of unipartite instances
  std::uint64_t seed = 1;
  int threads = 0;
};

/// Timings for one (size, method, partitions) cell.
struct BenchCell {
  int n = 0;
  std::size_t edge_count = 0;  // directed nonzeros of the instance
  Method method = Method::kKnn;
  int partitions = 1;
  std::vector<double> runs;  // seconds
  double mean_seconds = 0.0;
  std::int64_t iterations = 0;
  double total_weight = 0.0;
};

struct BenchTable {
  BenchConfig config;
  std::vector<BenchCell> cells;  // sizes outer, partitions middle, methods inner
};

/// Times every method on seeded instances (seed + size index) with the
/// auto epsilon; kNN ignores the partition count.
BenchTable run_bench(const BenchConfig &config);

/// Rows are n (or L when there is a single size and several partition
/// counts), columns are methods.
nlohmann::ordered_json bench_to_json(const BenchTable &table);

}  // namespace auctiongraph
