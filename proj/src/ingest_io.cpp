#include "auctiongraph/ingest_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace auctiongraph {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <class T>
bool parse_number(std::string_view token, T &out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::ifstream open_input(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(ParseErrorKind::kIo, 0, "cannot open '" + path.string() + "': " +
                                                 std::generic_category().message(errno));
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void finish_output(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out) {
    throw std::system_error(errno, std::generic_category(), "write to '" + path.string() + "' failed");
  }
}

struct MtxEntry {
  std::int64_t row;  // 0-based
  std::int64_t col;
  double value;
  std::size_t line;
};

struct MtxContents {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  bool pattern = false;
  bool symmetric = false;
  std::vector<MtxEntry> entries;
};

MtxContents read_mtx(const std::filesystem::path &path) {
  std::ifstream in = open_input(path);
  MtxContents out;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError(ParseErrorKind::kMalformedHeader, 1, "empty file");
  }
  ++line_no;
  {
    auto tok = split_ws(line);
    if (tok.size() != 5 || tok[0] != "%%MatrixMarket") {
      throw ParseError(ParseErrorKind::kMalformedHeader, line_no,
                       "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
    }
    const std::string object = lower(std::string(tok[1]));
    const std::string format = lower(std::string(tok[2]));
    const std::string field = lower(std::string(tok[3]));
    const std::string symmetry = lower(std::string(tok[4]));
    if (object != "matrix" || format != "coordinate") {
      throw ParseError(ParseErrorKind::kMalformedHeader, line_no,
                       "only 'matrix coordinate' files are supported");
    }
    if (field == "pattern") {
      out.pattern = true;
    } else if (field != "real" && field != "integer") {
      throw ParseError(ParseErrorKind::kMalformedHeader, line_no,
                       "unsupported field '" + field + "'");
    }
    if (symmetry == "symmetric") {
      out.symmetric = true;
    } else if (symmetry != "general") {
      throw ParseError(ParseErrorKind::kMalformedHeader, line_no,
                       "unsupported symmetry '" + symmetry + "'");
    }
  }

  // Skip comments and blank lines up to the size line.
  std::int64_t nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '%') continue;
    if (tok.size() != 3 || !parse_number(tok[0], out.rows) || !parse_number(tok[1], out.cols) ||
        !parse_number(tok[2], nnz) || out.rows < 0 || out.cols < 0 || nnz < 0) {
      throw ParseError(ParseErrorKind::kMalformedHeader, line_no,
                       "size line must be '<rows> <cols> <entries>'");
    }
    break;
  }
  if (nnz < 0) throw ParseError(ParseErrorKind::kMalformedHeader, line_no, "missing size line");
  if (out.symmetric && out.rows != out.cols) {
    throw ParseError(ParseErrorKind::kMalformedHeader, line_no, "symmetric matrix must be square");
  }

  out.entries.reserve(static_cast<std::size_t>(nnz));
  const std::size_t expected_tokens = out.pattern ? 2 : 3;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '%') continue;
    if (static_cast<std::int64_t>(out.entries.size()) == nnz) {
      throw ParseError(ParseErrorKind::kMalformedEntry, line_no,
                       "more entries than the declared " + std::to_string(nnz));
    }
    MtxEntry e{0, 0, 1.0, line_no};
    if (tok.size() != expected_tokens || !parse_number(tok[0], e.row) ||
        !parse_number(tok[1], e.col) || (!out.pattern && !parse_number(tok[2], e.value))) {
      throw ParseError(ParseErrorKind::kMalformedEntry, line_no,
                       out.pattern ? "expected '<row> <col>'" : "expected '<row> <col> <value>'");
    }
    if (e.row < 1 || e.row > out.rows || e.col < 1 || e.col > out.cols) {
      throw ParseError(ParseErrorKind::kIndexOutOfBounds, line_no,
                       "entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                           ") outside declared " + std::to_string(out.rows) + " x " +
                           std::to_string(out.cols));
    }
    if (!std::isfinite(e.value)) {
      throw ParseError(ParseErrorKind::kNonFiniteValue, line_no, "non-finite value");
    }
    --e.row;
    --e.col;
    out.entries.push_back(e);
  }
  if (static_cast<std::int64_t>(out.entries.size()) != nnz) {
    throw ParseError(ParseErrorKind::kMalformedEntry, line_no,
                     "declared " + std::to_string(nnz) + " entries, found " +
                         std::to_string(out.entries.size()));
  }
  return out;
}

[[noreturn]] void duplicate_entry(const MtxEntry &e) {
  throw ParseError(ParseErrorKind::kDuplicateEntry, e.line,
                   "duplicate entry (" + std::to_string(e.row + 1) + ", " +
                       std::to_string(e.col + 1) + ")");
}

void write_mtx_entry(std::ostream &out, std::int64_t row, std::int64_t col, double value) {
  out << (row + 1) << ' ' << (col + 1) << ' ' << format_double(value) << '\n';
}

}  // namespace

const char *to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kIo: return "io";
    case ParseErrorKind::kMalformedHeader: return "malformed-header";
    case ParseErrorKind::kMalformedEntry: return "malformed-entry";
    case ParseErrorKind::kIndexOutOfBounds: return "index-out-of-bounds";
    case ParseErrorKind::kNonFiniteValue: return "non-finite-value";
    case ParseErrorKind::kDuplicateEntry: return "duplicate-entry";
  }
  return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string &what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      kind_(kind),
      line_(line) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0) throw GraphError("feature matrix must be non-empty");
  if (values_.size() != rows * cols) throw GraphError("feature matrix size mismatch");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw GraphError("feature matrix has non-finite entries");
  }
}

MatrixMarketGraph load_matrix_market(const std::filesystem::path &path) {
  MtxContents mtx = read_mtx(path);
  if (mtx.rows != mtx.cols) {
    throw ParseError(ParseErrorKind::kMalformedHeader, 2,
                     "graph input must be square, got " + std::to_string(mtx.rows) + " x " +
                         std::to_string(mtx.cols));
  }
  if (mtx.rows > std::numeric_limits<NodeId>::max()) {
    throw ParseError(ParseErrorKind::kMalformedHeader, 2, "matrix too large");
  }
  MatrixMarketGraph result;
  result.pattern = mtx.pattern;
  result.symmetric = mtx.symmetric;
  std::vector<Edge> edges;
  edges.reserve(mtx.entries.size());
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const MtxEntry &e : mtx.entries) {
    if (e.row == e.col) {
      ++result.dropped_self_loops;
      continue;
    }
    const std::pair<std::int64_t, std::int64_t> key =
        mtx.symmetric ? std::pair(std::min(e.row, e.col), std::max(e.row, e.col))
                      : std::pair(e.row, e.col);
    if (!seen.insert(key).second) duplicate_entry(e);
    // Circuit matrices carry signed entries; the edge weight is the magnitude.
    edges.push_back({static_cast<NodeId>(e.row), static_cast<NodeId>(e.col), std::fabs(e.value)});
  }
  result.graph = WeightedGraph(static_cast<NodeId>(mtx.rows), std::move(edges), !mtx.symmetric);
  return result;
}

BipartiteProblem load_matrix_market_bipartite(const std::filesystem::path &path) {
  MtxContents mtx = read_mtx(path);
  if (mtx.rows > std::numeric_limits<NodeId>::max() || mtx.cols > std::numeric_limits<NodeId>::max()) {
    throw ParseError(ParseErrorKind::kMalformedHeader, 2, "matrix too large");
  }
  std::vector<Edge> edges;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const MtxEntry &e : mtx.entries) {
    if (!seen.insert({e.row, e.col}).second) duplicate_entry(e);
    edges.push_back({static_cast<NodeId>(e.row), static_cast<NodeId>(e.col), std::fabs(e.value)});
    if (mtx.symmetric && e.row != e.col) {
      if (!seen.insert({e.col, e.row}).second) duplicate_entry(e);
      edges.push_back({static_cast<NodeId>(e.col), static_cast<NodeId>(e.row), std::fabs(e.value)});
    }
  }
  return BipartiteProblem(static_cast<NodeId>(mtx.rows), static_cast<NodeId>(mtx.cols),
                          std::move(edges));
}

void save_matrix_market(const WeightedGraph &graph, const std::filesystem::path &path) {
  std::ofstream out = open_output(path);
  out << "%%MatrixMarket matrix coordinate real " << (graph.directed() ? "general" : "symmetric")
      << '\n';
  out << graph.node_count() << ' ' << graph.node_count() << ' ' << graph.edge_count() << '\n';
  for (const Edge &e : graph.edges()) {
    if (graph.directed()) {
      write_mtx_entry(out, e.src, e.dst, e.weight);
    } else {
      write_mtx_entry(out, e.dst, e.src, e.weight);  // lower triangle
    }
  }
  finish_output(out, path);
}

void save_matrix_market(const BipartiteProblem &problem, const std::filesystem::path &path) {
  std::ofstream out = open_output(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << problem.buyer_count() << ' ' << problem.object_count() << ' ' << problem.edge_count()
      << '\n';
  for (const Edge &e : problem.edges()) write_mtx_entry(out, e.src, e.dst, e.weight);
  finish_output(out, path);
}

void save_edge_list(const WeightedGraph &graph, const std::filesystem::path &path) {
  std::ofstream out = open_output(path);
  out << "# nodes " << graph.node_count() << ' ' << (graph.directed() ? "directed" : "undirected")
      << '\n';
  for (const Edge &e : graph.edges()) {
    out << e.src << ' ' << e.dst << ' ' << format_double(e.weight) << '\n';
  }
  finish_output(out, path);
}

WeightedGraph load_edge_list(const std::filesystem::path &path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  NodeId n = -1;
  bool directed = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "#") {
      if (n < 0 && tok.size() == 4 && tok[1] == "nodes" && parse_number(tok[2], n) &&
          (tok[3] == "directed" || tok[3] == "undirected")) {
        directed = tok[3] == "directed";
        continue;
      }
      if (n < 0) {
        throw ParseError(ParseErrorKind::kMalformedHeader, line_no,
                         "expected '# nodes <n> <directed|undirected>'");
      }
      continue;
    }
    if (n < 0) throw ParseError(ParseErrorKind::kMalformedHeader, line_no, "missing node header");
    Edge e{};
    if (tok.size() != 3 || !parse_number(tok[0], e.src) || !parse_number(tok[1], e.dst) ||
        !parse_number(tok[2], e.weight)) {
      throw ParseError(ParseErrorKind::kMalformedEntry, line_no, "expected '<src> <dst> <weight>'");
    }
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw ParseError(ParseErrorKind::kIndexOutOfBounds, line_no, "node id outside [0, n)");
    }
    if (!std::isfinite(e.weight)) {
      throw ParseError(ParseErrorKind::kNonFiniteValue, line_no, "non-finite weight");
    }
    edges.push_back(e);
  }
  if (n < 0) throw ParseError(ParseErrorKind::kMalformedHeader, 1, "missing node header");
  return WeightedGraph(n, std::move(edges), directed);
}

nlohmann::ordered_json report_to_json(const MetricsReport &report) {
  nlohmann::ordered_json j;
  j["node_count"] = report.node_count;
  j["selected_edge_count"] = report.selected_edge_count;
  j["total_selected_weight"] = report.total_selected_weight;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto &[degree, count] : report.degree_histogram) hist[std::to_string(degree)] = count;
  j["degree_histogram"] = hist;
  j["degree_mean"] = report.degree_mean;
  j["degree_variance"] = report.degree_variance;
  j["is_symmetric"] = report.is_symmetric;
  j["iterations"] = report.iterations;
  j["wall_time_seconds"] = report.wall_time_seconds;
  j["epsilon_used"] = report.epsilon_used;
  j["cs_residual_max"] = report.cs_residual_max ? nlohmann::ordered_json(*report.cs_residual_max)
                                                : nlohmann::ordered_json(nullptr);
  j["degree_target"] = report.degree_target ? nlohmann::ordered_json(*report.degree_target)
                                            : nlohmann::ordered_json(nullptr);
  j["deficit_nodes"] = report.deficit_nodes;
  j["deficit_total"] = report.deficit_total;
  j["degree_convention"] = report.degree_convention;
  return j;
}

void save_report(const MetricsReport &report, const std::filesystem::path &path,
                 const nlohmann::ordered_json &config) {
  nlohmann::ordered_json j;
  if (!config.is_null()) j["config"] = config;
  j.update(report_to_json(report));
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
  finish_output(out, path);
}

void save_points(const FeatureMatrix &points, const std::filesystem::path &path) {
  std::ofstream out = open_output(path);
  out << "# points " << points.rows() << ' ' << points.cols() << '\n';
  for (std::size_t r = 0; r < points.rows(); ++r) {
    for (std::size_t c = 0; c < points.cols(); ++c) {
      out << (c ? " " : "") << format_double(points(r, c));
    }
    out << '\n';
  }
  finish_output(out, path);
}

FeatureMatrix load_points(const std::filesystem::path &path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0, cols = 0;
  bool have_header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "#") {
      if (!have_header) {
        if (tok.size() != 4 || tok[1] != "points" || !parse_number(tok[2], rows) ||
            !parse_number(tok[3], cols)) {
          throw ParseError(ParseErrorKind::kMalformedHeader, line_no,
                           "expected '# points <rows> <cols>'");
        }
        have_header = true;
      }
      continue;
    }
    if (!have_header) throw ParseError(ParseErrorKind::kMalformedHeader, line_no, "missing header");
    if (tok.size() != cols) {
      throw ParseError(ParseErrorKind::kMalformedEntry, line_no,
                       "expected " + std::to_string(cols) + " values");
    }
    for (auto t : tok) {
      double v = 0.0;
      if (!parse_number(t, v)) throw ParseError(ParseErrorKind::kMalformedEntry, line_no, "bad number");
      if (!std::isfinite(v)) throw ParseError(ParseErrorKind::kNonFiniteValue, line_no, "non-finite value");
      values.push_back(v);
    }
  }
  if (!have_header) throw ParseError(ParseErrorKind::kMalformedHeader, 1, "missing header");
  if (values.size() != rows * cols) {
    throw ParseError(ParseErrorKind::kMalformedEntry, line_no,
                     "declared " + std::to_string(rows) + " rows, found " +
                         std::to_string(cols ? values.size() / cols : 0));
  }
  return FeatureMatrix(rows, cols, std::move(values));
}

double UniformSource::normal() {
  // 1 - u keeps the logarithm's argument in (0, 1].
  const double u1 = 1.0 - next();
  const double u2 = next();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BipartiteProblem gen_uniform_bipartite(NodeId n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw GraphError("bipartite generator needs an even n >= 2");
  const NodeId half = n / 2;
  UniformSource rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(half) * half);
  for (NodeId i = 0; i < half; ++i) {
    for (NodeId j = 0; j < half; ++j) edges.push_back({i, j, rng.next()});
  }
  return BipartiteProblem(half, half, std::move(edges));
}

WeightedGraph gen_uniform_unipartite(NodeId n, std::uint64_t seed) {
  if (n < 2) throw GraphError("unipartite generator needs n >= 2");
  UniformSource rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j, rng.next()});
  }
  return WeightedGraph(n, std::move(edges), false);
}

FeatureMatrix gen_two_moons(std::size_t n, std::uint64_t seed, double noise) {
  if (n < 2) throw GraphError("two-moons generator needs n >= 2");
  UniformSource rng(seed);
  const std::size_t outer = n / 2;
  const std::size_t inner = n - outer;
  std::vector<double> values;
  values.reserve(2 * n);
  auto angle = [](std::size_t k, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(k) / static_cast<double>(count - 1)
                     : 0.0;
  };
  for (std::size_t k = 0; k < outer; ++k) {
    const double t = angle(k, outer);
    values.push_back(std::cos(t) + noise * rng.normal());
    values.push_back(std::sin(t) + noise * rng.normal());
  }
  for (std::size_t k = 0; k < inner; ++k) {
    const double t = angle(k, inner);
    values.push_back(1.0 - std::cos(t) + noise * rng.normal());
    values.push_back(0.5 - std::sin(t) + noise * rng.normal());
  }
  return FeatureMatrix(n, 2, std::move(values));
}

WeightedGraph build_gaussian_adjacency(const FeatureMatrix &points, double bandwidth) {
  if (points.rows() < 2) throw GraphError("kernel adjacency needs at least two points");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw GraphError("kernel bandwidth must be positive and finite");
  }
  if (points.rows() > static_cast<std::size_t>(std::numeric_limits<NodeId>::max())) {
    throw GraphError("too many points");
  }
  const auto n = static_cast<NodeId>(points.rows());
  const double scale = 2.0 * bandwidth * bandwidth;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      double dist2 = 0.0;
      for (std::size_t c = 0; c < points.cols(); ++c) {
        const double d = points(i, c) - points(j, c);
        dist2 += d * d;
      }
      if (!std::isfinite(dist2)) {
        throw GraphError("non-finite distance between points " + std::to_string(i) + " and " +
                         std::to_string(j));
      }
      // Far pairs underflow; clamp so every kernel weight stays in (0, 1].
      const double w = std::max(std::exp(-dist2 / scale), std::numeric_limits<double>::min());
      edges.push_back({i, j, w});
    }
  }
  return WeightedGraph(n, std::move(edges), false);
}

}  // namespace auctiongraph
