#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "auctiongraph/graph_model.hpp"
#include "json.hpp"

namespace auctiongraph {

/// Dense row-major sample matrix.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  const std::vector<double> &values() const noexcept { return values_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

struct MetricsReport {
  std::size_t node_count = 0;
  std::size_t selected_edge_count = 0;  // projected undirected edges
  double total_selected_weight = 0.0;
  std::map<int, std::size_t> degree_histogram;
  double degree_mean = 0.0;
  double degree_variance = 0.0;
  bool is_symmetric = false;
  std::int64_t iterations = 0;
  double wall_time_seconds = 0.0;
  double epsilon_used = 0.0;
  std::optional<double> cs_residual_max;
  std::optional<int> degree_target;
  std::size_t deficit_nodes = 0;  // nodes below min(target, available degree)
  std::size_t deficit_total = 0;
  std::string degree_convention = "projected-undirected, once per endpoint";
};

enum class ParseErrorKind { kIo, kMalformedHeader, kMalformedEntry, kIndexOutOfBounds, kNonFiniteValue, kDuplicateEntry };

const char *to_string(ParseErrorKind kind);

/// Input parse failure; line is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string &what);
  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

struct MatrixMarketGraph {
  WeightedGraph graph;
  std::size_t dropped_self_loops = 0;
  bool pattern = false;
  bool symmetric = false;
};

/// Coordinate Matrix Market, real/integer/pattern, general/symmetric.
/// Symmetric files load as undirected graphs, general files as directed.
MatrixMarketGraph load_matrix_market(const std::filesystem::path &path);

/// Reads a (possibly rectangular) coordinate matrix as a buyers × objects
/// weight matrix; diagonal entries are ordinary edges here.
BipartiteProblem load_matrix_market_bipartite(const std::filesystem::path &path);

/// Undirected graphs are written `symmetric` with entries in the lower
/// triangle, directed graphs `general`.
void save_matrix_market(const WeightedGraph &graph, const std::filesystem::path &path);
void save_matrix_market(const BipartiteProblem &problem, const std::filesystem::path &path);

/// `# nodes <n> <directed|undirected>` header, then one `src dst weight` line
/// per stored edge (0-based, undirected edges once with src < dst). Weights use
/// the shortest round-trip decimal form.
void save_edge_list(const WeightedGraph &graph, const std::filesystem::path &path);
WeightedGraph load_edge_list(const std::filesystem::path &path);

nlohmann::ordered_json report_to_json(const MetricsReport &report);
/// JSON report; a non-null `config` is written first under "config".
void save_report(const MetricsReport &report, const std::filesystem::path &path,
                 const nlohmann::ordered_json &config = nullptr);

/// `# points <rows> <cols>` header followed by whitespace-separated rows.
void save_points(const FeatureMatrix &points, const std::filesystem::path &path);
FeatureMatrix load_points(const std::filesystem::path &path);

/// Portable seeded uniform source: std::mt19937_64 seeded with `seed`, each
/// draw mapped to [0, 1) as (x >> 11) * 2^-53.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Standard normal via Box-Muller on two draws.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Complete (n/2) × (n/2) bipartite problem with U(0,1) weights drawn in
/// row-major order.
BipartiteProblem gen_uniform_bipartite(NodeId n, std::uint64_t seed);

/// Complete undirected graph on n nodes with U(0,1) weights drawn for
/// (i, j), i < j, in row-major order.
WeightedGraph gen_uniform_unipartite(NodeId n, std::uint64_t seed);

/// Two interleaved half-moons (n/2 + n - n/2 points) with Gaussian jitter.
FeatureMatrix gen_two_moons(std::size_t n, std::uint64_t seed, double noise = 0.05);

/// Nonzero count of the bipartite graph's n × n adjacency matrix
/// (2 · |edges|), the convention used when quoting |E|.
inline std::size_t directed_edge_count(const BipartiteProblem &problem) {
  return 2 * problem.edge_count();
}

/// Complete undirected graph with w(i, j) = exp(-|x_i - x_j|^2 / (2 bandwidth^2)).
WeightedGraph build_gaussian_adjacency(const FeatureMatrix &points, double bandwidth);

}  // namespace auctiongraph
