// auctiongraph command line: gen, sparsify, oracle, bench.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "auctiongraph/bench.hpp"
#include "auctiongraph/ingest_io.hpp"
#include "auctiongraph/metrics.hpp"
#include "auctiongraph/oracle_verify.hpp"
#include "auctiongraph/sparsify.hpp"

namespace fs = std::filesystem;
using namespace auctiongraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoConvergence = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Outputs go to "<path>.partial" and are renamed only once everything succeeded.
class StagedOutputs {
 public:
  fs::path stage(const fs::path &final_path) {
    fs::path tmp = final_path;
    tmp += ".partial";
    staged_.emplace_back(tmp, final_path);
    return tmp;
  }
  void commit() {
    for (const auto &[tmp, final_path] : staged_) fs::rename(tmp, final_path);
    staged_.clear();
  }
  ~StagedOutputs() {
    std::error_code ignored;
    for (const auto &[tmp, final_path] : staged_) fs::remove(tmp, ignored);
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> staged_;
};

bool is_matrix_market(const fs::path &path) {
  const auto ext = path.extension().string();
  return ext == ".mtx" || ext == ".mm";
}

WeightedGraph load_graph(const fs::path &path) {
  if (!fs::exists(path)) throw ParseError(ParseErrorKind::kIo, 0, "cannot open " + path.string());
  WeightedGraph graph = is_matrix_market(path) ? load_matrix_market(path).graph : load_edge_list(path);
  return graph.directed() ? make_undirected(graph) : graph;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string type = "unipartite";
  int n = 100;
  std::uint64_t seed = 1;
  std::string output;
  double noise = 0.05;
};

int cmd_gen(const GenArgs &args) {
  StagedOutputs outputs;
  if (args.type == "moons") {
    FeatureMatrix points = gen_two_moons(static_cast<std::size_t>(args.n), args.seed, args.noise);
    if (!args.output.empty()) save_points(points, outputs.stage(args.output));
    outputs.commit();
    std::cout << "n " << points.rows() << "\npoints " << points.rows() << " x " << points.cols() << '\n';
    return kExitOk;
  }
  if (args.type == "bipartite") {
    BipartiteProblem problem = gen_uniform_bipartite(args.n, args.seed);
    if (!args.output.empty()) save_matrix_market(problem, outputs.stage(args.output));
    outputs.commit();
    std::cout << "n " << args.n << "\nedges " << directed_edge_count(problem) << '\n';
    return kExitOk;
  }
  if (args.type == "unipartite") {
    WeightedGraph graph = gen_uniform_unipartite(args.n, args.seed);
    if (!args.output.empty()) save_matrix_market(graph, outputs.stage(args.output));
    outputs.commit();
    std::cout << "n " << args.n << "\nedges " << graph.directed_edge_count() << '\n';
    return kExitOk;
  }
  throw UsageError("gen: unknown --type '" + args.type + "'");
}

// ---------------------------------------------------------------- sparsify

struct SparsifyArgs {
  std::string input;
  bool bipartite = false;
  bool points = false;
  double bandwidth = 0.1;
  int b = 1;
  std::string method = "auction_multibid";
  std::string epsilon = "auto";
  std::string symmetrize = "percentile";
  int partitions = 1;
  std::int64_t max_rounds = 0;
  int threads = 0;
  std::string output;
  std::string report;
};

SparsifyConfig make_config(const SparsifyArgs &args) {
  SparsifyConfig config;
  config.b = args.b;
  const auto method = parse_method(args.method);
  if (!method) throw UsageError("sparsify: unknown --method '" + args.method + "'");
  config.method = *method;
  const auto symmetrize = parse_symmetrize(args.symmetrize);
  if (!symmetrize) throw UsageError("sparsify: unknown --symmetrize '" + args.symmetrize + "'");
  config.symmetrize = *symmetrize;
  if (args.epsilon != "auto") {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(args.epsilon, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != args.epsilon.size()) throw UsageError("sparsify: --epsilon must be 'auto' or a number");
    config.epsilon = value;
  }
  config.partitions = args.partitions;
  config.max_rounds = args.max_rounds;
  config.threads = args.threads;
  try {
    config.validate();
  } catch (const GraphError &e) {
    throw UsageError(std::string("sparsify: ") + e.what());
  }
  return config;
}

nlohmann::ordered_json echo(const SparsifyArgs &args, const SparsifyConfig &config, double epsilon) {
  nlohmann::ordered_json j;
  j["input"] = args.input;
  j["input_kind"] = args.points ? "points" : args.bipartite ? "bipartite" : "graph";
  if (args.points) j["bandwidth"] = args.bandwidth;
  j["b"] = config.b;
  j["method"] = to_string(config.method);
  j["epsilon"] = args.epsilon;
  j["epsilon_resolved"] = epsilon;
  j["symmetrize"] = args.bipartite ? "none" : to_string(config.symmetrize);
  j["partitions"] = config.partitions;
  j["max_rounds"] = config.max_rounds;
  j["threads"] = config.threads;
  return j;
}

void save_bipartite_pairs(const BipartiteProblem &problem, const EdgeSelection &selection,
                          const fs::path &path) {
  std::ofstream out(path);
  if (!out) throw ParseError(ParseErrorKind::kIo, 0, "cannot write " + path.string());
  out << "# bipartite " << problem.buyer_count() << ' ' << problem.object_count() << '\n';
  char buf[64];
  for (const Pair &p : selection) {
    const double w = *problem.weight(p.buyer, p.object);
    std::snprintf(buf, sizeof buf, "%.17g", w);
    out << p.buyer << ' ' << p.object << ' ' << buf << '\n';
  }
  if (!out) throw ParseError(ParseErrorKind::kIo, 0, "write failed for " + path.string());
}

int cmd_sparsify(const SparsifyArgs &args) {
  if (args.bipartite && args.points) throw UsageError("sparsify: --bipartite and --points exclude each other");
  SparsifyConfig config = make_config(args);
  const fs::path input(args.input);
  if (!fs::exists(input)) throw ParseError(ParseErrorKind::kIo, 0, "cannot open " + args.input);

  StagedOutputs outputs;
  MetricsReport report;
  bool converged = true;
  double epsilon = 0.0;
  if (args.bipartite) {
    if (config.method == Method::kKnn) config.symmetrize = Symmetrize::kNone;
    const BipartiteProblem problem = load_matrix_market_bipartite(input);
    epsilon = resolve_epsilon(problem, config);
    std::cout << "config " << echo(args, config, epsilon).dump() << '\n';
    const auto start = std::chrono::steady_clock::now();
    SparsifyResult result = sparsify_bipartite(problem, config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    converged = result.converged;
    report = evaluate(problem, result.selection,
                      RunInfo{result.iterations, elapsed.count(), epsilon, result.cs_residual_max, config.b});
    if (converged && !args.output.empty()) save_bipartite_pairs(problem, result.selection, outputs.stage(args.output));
  } else {
    WeightedGraph graph;
    if (args.points) {
      graph = build_gaussian_adjacency(load_points(input), args.bandwidth);
    } else {
      graph = load_graph(input);
    }
    epsilon = resolve_epsilon(to_bipartite_shadow(graph), config);
    std::cout << "config " << echo(args, config, epsilon).dump() << '\n';
    const auto start = std::chrono::steady_clock::now();
    SparsifyResult result = sparsify_graph(graph, config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    converged = result.converged;
    report = evaluate(graph, result.selection,
                      RunInfo{result.iterations, elapsed.count(), epsilon, result.cs_residual_max, config.b});
    if (converged && !args.output.empty()) save_edge_list(apply_selection(graph, result.selection), outputs.stage(args.output));
  }
  if (!converged) {
    std::cerr << "sparsify: auction did not terminate within max_rounds (" << report.iterations
              << " rounds); no output written\n";
    return kExitNoConvergence;
  }
  if (!args.report.empty()) save_report(report, outputs.stage(args.report), echo(args, config, epsilon));
  outputs.commit();
  std::cout << "edges " << report.selected_edge_count << "\nweight " << report.total_selected_weight
            << "\ndegree_mean " << report.degree_mean << "\ndegree_variance " << report.degree_variance
            << "\niterations " << report.iterations << "\nseconds " << report.wall_time_seconds << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  std::string input;
  bool bipartite = false;
  int b = 1;
};

int cmd_oracle(const OracleArgs &args) {
  nlohmann::ordered_json j;
  if (args.bipartite) {
    const AssignmentOptimum best = exact_assignment(load_matrix_market_bipartite(args.input));
    j["kind"] = "assignment";
    j["weight"] = best.weight;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const Pair &p : best.matching) pairs.push_back({p.buyer, p.object});
    j["matching"] = pairs;
  } else {
    j["kind"] = "b_matching";
    j["b"] = args.b;
    j["weight"] = exact_bmatching(load_graph(args.input), args.b);
  }
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<int> sizes{100, 200};
  int b = 10;
  std::vector<std::string> methods{"knn", "auction_multibid"};
  std::vector<int> partitions{1};
  int repeats = 1;
  bool bipartite = false;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string report;
};

int cmd_bench(const BenchArgs &args) {
  BenchConfig config;
  config.sizes = args.sizes;
  config.b = args.b;
  config.methods.clear();
  for (const auto &name : args.methods) {
    const auto method = parse_method(name);
    if (!method) throw UsageError("bench: unknown method '" + name + "'");
    config.methods.push_back(*method);
  }
  config.partitions = args.partitions;
  config.repeats = args.repeats;
  config.bipartite = args.bipartite;
  config.seed = args.seed;
  config.threads = args.threads;

  const BenchTable table = run_bench(config);
  const auto j = bench_to_json(table);
  const bool by_partitions = j["row_key"] == "partitions";
  std::printf("%-10s %-12s", by_partitions ? "L" : "n", "|E|");
  for (Method m : config.methods) std::printf(" %18s", to_string(m));
  std::printf("\n");
  for (const auto &row : j["rows"]) {
    const int key = by_partitions ? row["partitions"].get<int>() : row["n"].get<int>();
    std::printf("%-10d %-12zu", key, row["edges"].get<std::size_t>());
    for (Method m : config.methods) std::printf(" %18.6f", row["mean_seconds"][to_string(m)].get<double>());
    std::printf("\n");
  }
  if (!args.report.empty()) {
    StagedOutputs outputs;
    const fs::path tmp = outputs.stage(args.report);
    std::ofstream out(tmp);
    out << j.dump(2) << '\n';
    if (!out) throw ParseError(ParseErrorKind::kIo, 0, "cannot write " + args.report);
    out.close();
    outputs.commit();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sparse near-regular graph construction with auction algorithms"};
  app.require_subcommand(1);

  GenArgs gen;
  auto *gen_cmd = app.add_subcommand("gen", "Generate a seeded instance");
  gen_cmd->add_option("--type", gen.type, "bipartite | unipartite | moons")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Node count (points for moons)")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Moons jitter")->capture_default_str();
  gen_cmd->add_option("--output", gen.output, "Matrix Market or points file");

  SparsifyArgs sp;
  auto *sp_cmd = app.add_subcommand("sparsify", "Build a degree-b subgraph");
  sp_cmd->add_option("--input", sp.input, ".mtx/.mm Matrix Market, edge list, or points file")->required();
  sp_cmd->add_flag("--bipartite", sp.bipartite, "Input is a buyers x objects matrix");
  sp_cmd->add_flag("--points", sp.points, "Input is a points file; build a Gaussian kernel graph");
  sp_cmd->add_option("--bandwidth", sp.bandwidth)->capture_default_str();
  sp_cmd->add_option("--b", sp.b)->capture_default_str();
  sp_cmd->add_option("--method", sp.method, "auction_rounds | auction_multibid | knn")->capture_default_str();
  sp_cmd->add_option("--epsilon", sp.epsilon, "auto or a positive number")->capture_default_str();
  sp_cmd->add_option("--symmetrize", sp.symmetrize, "percentile | max | min | none")->capture_default_str();
  sp_cmd->add_option("--partitions", sp.partitions)->capture_default_str();
  sp_cmd->add_option("--max-rounds", sp.max_rounds, "0 selects the default bound")->capture_default_str();
  sp_cmd->add_option("--threads", sp.threads, "Worker threads, 0 for min(L, cores)")->capture_default_str();
  sp_cmd->add_option("--output", sp.output, "Selected edge list");
  sp_cmd->add_option("--report", sp.report, "JSON metrics report");

  OracleArgs oracle;
  auto *or_cmd = app.add_subcommand("oracle", "Exact optimum of a small instance");
  or_cmd->add_option("--input", oracle.input)->required();
  or_cmd->add_flag("--bipartite", oracle.bipartite, "Assignment on a buyers x objects matrix");
  or_cmd->add_option("--b", oracle.b, "Degree bound for b-matching")->capture_default_str();

  BenchArgs bench;
  auto *be_cmd = app.add_subcommand("bench", "Time methods on seeded instances");
  be_cmd->add_option("--sizes", bench.sizes)->delimiter(',')->capture_default_str();
  be_cmd->add_option("--b", bench.b)->capture_default_str();
  be_cmd->add_option("--methods", bench.methods)->delimiter(',')->capture_default_str();
  be_cmd->add_option("--partitions", bench.partitions)->delimiter(',')->capture_default_str();
  be_cmd->add_option("--repeats", bench.repeats)->capture_default_str();
  be_cmd->add_flag("--bipartite", bench.bipartite);
  be_cmd->add_option("--seed", bench.seed)->capture_default_str();
  be_cmd->add_option("--threads", bench.threads)->capture_default_str();
  be_cmd->add_option("--report", bench.report, "JSON table with every run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*sp_cmd) return cmd_sparsify(sp);
    if (*or_cmd) return cmd_oracle(oracle);
    if (*be_cmd) return cmd_bench(bench);
  } catch (const ParseError &e) {
    std::cerr << "ingest_io: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kExitParse;
  } catch (const UsageError &e) {
    std::cerr << e.what() << '\n';
    return kExitError;
  } catch (const OracleTooLarge &e) {
    std::cerr << "oracle_verify: " << e.what() << '\n';
    return kExitError;
  } catch (const GraphError &e) {
    std::cerr << "graph_model: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
