#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "qwgrow/error.hpp"
#include "qwgrow/experiment.hpp"
#include "qwgrow/graph_io.hpp"
#include "qwgrow/growth.hpp"
#include "qwgrow/metrics.hpp"
#include "qwgrow/star.hpp"
#include "qwgrow/version.hpp"

namespace qwgrow::cli {

namespace {

struct GrowArgs {
  std::size_t walkers = 1;
  double tau = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "edgelist";
  std::string backend = "spectral";
  std::string policy = "measured_node";
};

struct SweepArgs {
  std::string config;
  std::size_t workers = 0;
  std::string out_dir;
};

struct StarsArgs {
  double tau = 0.0;
  std::size_t max_k = 0;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path + " for writing");
  file << content;
  if (!file) throw Error("write failed: " + path);
}

void run_grow(const GrowArgs& args, std::ostream& out) {
  RunConfig config;
  config.walkers = args.walkers;
  config.tau = args.tau;
  config.steps = args.steps;
  config.seed = args.seed;
  config.backend = parse_backend(args.backend);
  config.policy = parse_policy(args.policy);
  const GrowthTrace trace = grow(config);

  std::string content;
  if (args.format == "trace-json") content = trace_to_json(trace);
  else if (args.format == "graphml") content = to_graphml(trace.final_graph);
  else content = to_edge_list(trace.final_graph);
  emit(args.out, content, out);
}

void run_sweep(const SweepArgs& args, std::ostream& out) {
  ExperimentSpec spec = read_config(args.config);
  if (args.workers > 0) spec.workers = args.workers;
  if (!args.out_dir.empty()) spec.out_dir = args.out_dir;
  const EnsembleSummary summary = run_experiment(spec);
  out << "wrote " << summary.trials.size() << " trials to " << spec.out_dir.string() << "\n";
}

void run_analyze(const std::string& path, bool with_spectrum, std::ostream& out) {
  const Graph g = read_graph(path);
  const MetricsReport r = compute_metrics(g, with_spectrum);
  out << "nodes=" << r.nodes << "\n"
      << "edges=" << r.edges << "\n"
      << "diameter=" << r.diameter << "\n"
      << "leaf_fraction=" << format_real(r.leaf_fraction) << "\n"
      << "avg_clustering=" << format_real(r.avg_clustering) << "\n"
      << "alpha=" << (r.fit ? format_real(r.fit->alpha) : std::string()) << "\n"
      << "alpha_r2=" << (r.fit ? format_real(r.fit->r_squared) : std::string()) << "\n";
  out << "degree_histogram=";
  bool first = true;
  for (const auto& [k, d] : r.degree_histogram.fractions) {
    out << (first ? "" : " ") << k << ":" << format_real(d);
    first = false;
  }
  out << "\n";
  if (with_spectrum) {
    out << "spectrum=";
    for (std::size_t i = 0; i < r.spectrum.size(); ++i) out << (i ? " " : "") << format_real(r.spectrum[i]);
    out << "\n";
  }
}

void run_stars(const StarsArgs& args, std::ostream& out) {
  const StarEscapeTable table = star_escape_table(args.max_k, args.tau);
  out << "k,p_center,p_out\n";
  for (std::size_t k = 1; k <= args.max_k; ++k) {
    out << k << "," << format_real(table.p_center[k - 1]) << "," << format_real(table.p_out[k - 1]) << "\n";
  }
  const StarSizeEstimate est = expected_star_size(args.tau);
  out << "# expected_star_size=" << format_real(est.value) << " terms=" << est.terms
      << " residual_mass=" << format_real(est.residual_mass) << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grow random graphs with collapsing continuous-time quantum walkers", "qwgrow"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GrowArgs grow_args;
  auto* grow_cmd = app.add_subcommand("grow", "Grow one graph");
  grow_cmd->add_option("--walkers", grow_args.walkers, "Number of walkers")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  grow_cmd->add_option("--tau", grow_args.tau, "Mean collapse time")->required()->check(CLI::PositiveNumber);
  grow_cmd->add_option("--steps", grow_args.steps, "Number of growth steps")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  grow_cmd->add_option("--seed", grow_args.seed, "Random seed");
  grow_cmd->add_option("--out", grow_args.out, "Output file (stdout when omitted)");
  grow_cmd->add_option("--format", grow_args.format, "Output format")
      ->check(CLI::IsMember({"edgelist", "graphml", "trace-json"}));
  grow_cmd->add_option("--backend", grow_args.backend, "Propagator backend")
      ->check(CLI::IsMember({"spectral", "krylov", "chebyshev"}));
  grow_cmd->add_option("--policy", grow_args.policy, "Walker restart policy")
      ->check(CLI::IsMember({"measured_node", "new_node"}));

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an ensemble experiment from a config file");
  sweep_cmd->add_option("--config", sweep_args.config, "Config file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--workers", sweep_args.workers, "Override the worker count");
  sweep_cmd->add_option("--out-dir", sweep_args.out_dir, "Override the output directory");

  std::string analyze_in;
  bool analyze_spectrum = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Metrics of a graph file (.graphml or edge list)");
  analyze_cmd->add_option("--in", analyze_in, "Graph file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_flag("--spectrum", analyze_spectrum, "Also print adjacency eigenvalues");

  StarsArgs stars_args;
  auto* stars_cmd = app.add_subcommand("stars", "Star escape probabilities and expected star size");
  stars_cmd->add_option("--tau", stars_args.tau, "Collapse time")->required()->check(CLI::PositiveNumber);
  stars_cmd->add_option("--max-k", stars_args.max_k, "Largest k in the table")
      ->required()
      ->check(CLI::Range(std::size_t{1}, std::size_t{100'000'000}));

  std::string chain_text;
  auto* charpoly_cmd = app.add_subcommand("charpoly", "Compare the multi-star recurrence with the exact polynomial");
  charpoly_cmd->add_option("--chain", chain_text, "Leaf counts, e.g. 3,2,4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*grow_cmd) run_grow(grow_args, out);
    else if (*sweep_cmd) run_sweep(sweep_args, out);
    else if (*analyze_cmd) run_analyze(analyze_in, analyze_spectrum, out);
    else if (*stars_cmd) run_stars(stars_args, out);
    else if (*charpoly_cmd) out << recurrence_report_json(compare_recurrence(parse_star_chain(chain_text)));
  } catch (const std::exception& e) {
    err << "qwgrow: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qwgrow::cli
