#include "auctiongraph/bench.hpp"

#include <chrono>
#include <numeric>

#include "auctiongraph/ingest_io.hpp"
#include "auctiongraph/metrics.hpp"

namespace auctiongraph {

BenchTable run_bench(const BenchConfig &config) {
  if (config.repeats < 1) throw GraphError("repeats must be at least 1");
  BenchTable table{config, {}};
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    const int n = config.sizes[s];
    const std::uint64_t seed = config.seed + s;
    WeightedGraph graph;
    BipartiteProblem problem;
    std::size_t edge_count = 0;
    if (config.bipartite) {
      problem = gen_uniform_bipartite(n, seed);
      edge_count = directed_edge_count(problem);
    } else {
      graph = gen_uniform_unipartite(n, seed);
      edge_count = graph.directed_edge_count();
    }
    for (int parts : config.partitions) {
      for (Method method : config.methods) {
        SparsifyConfig sc;
        sc.b = config.b;
        sc.method = method;
        sc.partitions = parts;
        sc.threads = config.threads;
        sc.symmetrize = config.bipartite ? Symmetrize::kNone : Symmetrize::kPercentile;
        BenchCell cell{n, edge_count, method, parts, {}, 0.0, 0, 0.0};
        for (int r = 0; r < config.repeats; ++r) {
          const auto start = std::chrono::steady_clock::now();
          SparsifyResult result =
              config.bipartite ? sparsify_bipartite(problem, sc) : sparsify_graph(graph, sc);
          const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
          cell.runs.push_back(elapsed.count());
          cell.iterations = result.iterations;
          cell.total_weight = config.bipartite
                                  ? evaluate(problem, result.selection).total_selected_weight
                                  : evaluate(graph, result.selection).total_selected_weight;
        }
        cell.mean_seconds =
            std::accumulate(cell.runs.begin(), cell.runs.end(), 0.0) / static_cast<double>(cell.runs.size());
        table.cells.push_back(std::move(cell));
      }
    }
  }
  return table;
}

nlohmann::ordered_json bench_to_json(const BenchTable &table) {
  const BenchConfig &config = table.config;
  const bool by_partitions = config.sizes.size() == 1 && config.partitions.size() > 1;
  nlohmann::ordered_json out;
  out["instance"] = config.bipartite ? "bipartite" : "unipartite";
  out["b"] = config.b;
  out["repeats"] = config.repeats;
  out["seed"] = config.seed;
  out["row_key"] = by_partitions ? "partitions" : "n";
  nlohmann::ordered_json columns = nlohmann::ordered_json::array();
  for (Method m : config.methods) columns.push_back(to_string(m));
  out["columns"] = columns;

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < table.cells.size(); c += config.methods.size()) {
    const BenchCell &first = table.cells[c];
    nlohmann::ordered_json row;
    row["n"] = first.n;
    row["edges"] = first.edge_count;
    row["partitions"] = first.partitions;
    nlohmann::ordered_json means;
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      const BenchCell &cell = table.cells[c + m];
      means[to_string(cell.method)] = cell.mean_seconds;
      runs.push_back({{"n", cell.n},
                      {"partitions", cell.partitions},
                      {"method", to_string(cell.method)},
                      {"seconds", cell.runs},
                      {"iterations", cell.iterations},
                      {"total_weight", cell.total_weight}});
    }
    row["mean_seconds"] = means;
    rows.push_back(row);
  }
  out["rows"] = rows;
  out["runs"] = runs;
  return out;
}

}  // namespace auctiongraph
