#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qwgrow/error.hpp"
#include "qwgrow/experiment.hpp"

using namespace qwgrow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qwgrow_test_experiment_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> directory_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) out[entry.path().filename().string()] = slurp(entry.path());
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t begin = 0;
    while (true) {
      const auto comma = line.find(',', begin);
      cells.push_back(line.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

ExperimentSpec small_spec(const fs::path& dir) {
  ExperimentSpec spec;
  spec.tau_values = {0.05, 0.5, 5.0};
  spec.steps = 40;
  spec.trials = 6;
  spec.base_seed = 77;
  spec.out_dir = dir;
  spec.emit = {true, true, true, true, true};
  return spec;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("minimal config takes the documented defaults") {
    const ExperimentSpec spec = parse_config("walkers = 1\ntau_values = 0.1\nsteps = 10\n");
    CHECK(spec.trials == 20);
    CHECK(spec.base_seed == 0);
    CHECK(spec.workers == 1);
    CHECK(spec.out_dir == fs::path("qwgrow_out"));
    CHECK(spec.emit == EmitSet{});
    CHECK(spec.backend == Backend::spectral);
    CHECK(spec.policy == CollapsePolicy::measured_node);
  }

  SUBCASE("full config") {
    const ExperimentSpec spec = parse_config(
        "# figure grid\n"
        "walkers    = 2\n"
        "tau_values = [0.001, 0.01, 0.05, 0.1, 0.5, 10]   # trailing comment\n"
        "steps      = 100\r\n"
        "trials     = 50\n"
        "base_seed  = 18446744073709551615\n"
        "out_dir    = runs/fig3\n"
        "emit       = metrics, histograms, spectra\n"
        "workers    = 4\n"
        "backend    = krylov\n"
        "policy     = new_node\n");
    CHECK(spec.walkers == 2);
    CHECK(spec.tau_values == std::vector<double>{0.001, 0.01, 0.05, 0.1, 0.5, 10.0});
    CHECK(spec.steps == 100);
    CHECK(spec.trials == 50);
    CHECK(spec.base_seed == 18446744073709551615ULL);
    CHECK(spec.out_dir == fs::path("runs/fig3"));
    CHECK(spec.emit == EmitSet{true, true, false, true, false});
    CHECK(spec.workers == 4);
    CHECK(spec.backend == Backend::krylov);
    CHECK(spec.policy == CollapsePolicy::new_node);
  }

  SUBCASE("errors carry the line number") {
    auto line_of = [](const std::string& text) -> std::size_t {
      try {
        parse_config(text);
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("walkers = 1\ntau_values = 0.1\nsteps = 10\ntrails = 5\n") == 4);
    CHECK(line_of("walkers = 1\nwalkers = 2\n") == 2);
    CHECK(line_of("walkers = 1\ntau_values = [0.1, , 2]\nsteps = 3\n") == 2);
    CHECK(line_of("walkers = 1\ntau_values = [0.1, 2\nsteps = 3\n") == 2);
    CHECK(line_of("walkers = one\n") == 1);
    CHECK(line_of("walkers\n") == 1);
    CHECK(line_of("walkers = 1\ntau_values = 0.1\nsteps = 3\nemit = plots\n") == 4);
    CHECK(line_of("walkers = 1\ntau_values = 0.1\nsteps = 3\nbackend = pade\n") == 4);
    CHECK_THROWS_AS(parse_config("walkers = 0\ntau_values = 0.1\nsteps = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_config("walkers = 1\ntau_values = 0.1, -2\nsteps = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_config("walkers = 1\ntau_values = 0.1, 0.1\nsteps = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_config("walkers = 1\ntau_values = []\nsteps = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_config("walkers = 1\nsteps = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_config("walkers = 1\ntau_values = 0.1\nsteps = 3\ntrials = 0\n"), ParseError);
  }

  SUBCASE("read_config names the file") {
    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.cfg") << "walkers = 1\nsteps = 2\n";
    try {
      read_config(dir / "bad.cfg");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("bad.cfg") != std::string::npos);
    }
    CHECK_THROWS_AS(read_config(dir / "missing.cfg"), Error);
    fs::remove_all(dir);
  }
}

TEST_CASE("trial seeds are distinct and stable") {
  CHECK(trial_seed(0, 0, 0) == trial_seed(0, 0, 0));
  CHECK(trial_seed(0, 0, 1) != trial_seed(0, 1, 0));
  CHECK(trial_seed(1, 0, 0) != trial_seed(0, 0, 0));
}

TEST_CASE("describe") {
  const ScalarStats s = describe({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.count == 4);
  CHECK(describe({7.0}).stddev == 0.0);
  CHECK(describe({}).count == 0);
}

TEST_CASE("run_experiment writes deterministic, self-consistent files") {
  const fs::path a = scratch("a");
  const fs::path b = scratch("b");
  ExperimentSpec spec = small_spec(a);
  spec.workers = 1;
  const EnsembleSummary summary = run_experiment(spec);
  spec.out_dir = b;
  spec.workers = 3;
  run_experiment(spec);

  const auto files_a = directory_contents(a);
  CHECK(files_a == directory_contents(b));

  for (const char* name : {"spec.json", "trials.csv", "summary.csv", "hist_tau=0.05.csv", "hist_tau=5.csv",
                           "spectrum_tau=0.5.csv", "trace_tau=0.5_trial=3.json", "trajectory_0.csv",
                           "trajectory_5.csv"}) {
    CHECK_MESSAGE(files_a.count(name) == 1, name);
  }
  CHECK(files_a.size() == 1 + 2 + 3 + 3 + 18 + 6);

  SUBCASE("spec sidecar") {
    const auto doc = nlohmann::json::parse(files_a.at("spec.json"));
    CHECK(doc.at("base_seed") == 77);
    CHECK(doc.at("tau_values").size() == 3);
    CHECK(doc.contains("version"));
  }

  SUBCASE("summary aggregates recompute from trial rows") {
    const auto trials = parse_csv(files_a.at("trials.csv"));
    const auto header = trials.front();
    REQUIRE(header == std::vector<std::string>{"tau", "trial", "seed", "nodes", "edges", "diameter",
                                               "leaf_fraction", "avg_clustering", "alpha", "alpha_r2",
                                               "star_count", "star_size_mean"});
    REQUIRE(trials.size() == 1 + 18);
    std::map<std::string, std::vector<double>> leaf, diam;
    for (std::size_t i = 1; i < trials.size(); ++i) {
      REQUIRE(trials[i].size() == header.size());
      CHECK(trials[i][3] == "41");
      CHECK(trials[i][4] == "40");
      CHECK(trials[i][7] == "0");
      leaf[trials[i][0]].push_back(std::stod(trials[i][6]));
      diam[trials[i][0]].push_back(std::stod(trials[i][5]));
    }
    const auto rows = parse_csv(files_a.at("summary.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][6] == "leaf_fraction_mean");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const ScalarStats l = describe(leaf.at(rows[i][0]));
      const ScalarStats d = describe(diam.at(rows[i][0]));
      CHECK(std::abs(std::stod(rows[i][6]) - l.mean) <= 1e-12);
      CHECK(std::abs(std::stod(rows[i][7]) - l.stddev) <= 1e-12);
      CHECK(std::abs(std::stod(rows[i][4]) - d.mean) <= 1e-12);
      CHECK(std::abs(std::stod(rows[i][5]) - d.stddev) <= 1e-12);
      CHECK(rows[i][1] == "6");
    }
  }

  SUBCASE("histograms and spectra parse back") {
    const auto hist = parse_csv(files_a.at("hist_tau=0.5.csv"));
    CHECK(hist.front() == std::vector<std::string>{"k", "d_k"});
    double total = 0.0;
    for (std::size_t i = 1; i < hist.size(); ++i) total += std::stod(hist[i][1]);
    CHECK(std::abs(total - 1.0) <= 1e-12);

    const auto spectrum = parse_csv(files_a.at("spectrum_tau=0.5.csv"));
    CHECK(spectrum.front() == std::vector<std::string>{"trial", "index", "eigenvalue"});
    CHECK(spectrum.size() == 1 + 6 * 41);

    const auto traj = parse_csv(files_a.at("trajectory_2.csv"));
    CHECK(traj.front() == std::vector<std::string>{"tau", "step", "rank", "abs_eigenvalue"});
    CHECK(traj.size() == 1 + 3 * 40 * kTrajectoryTop);
  }

  SUBCASE("traces replay to the reported graphs") {
    const GrowthTrace trace = trace_from_json(files_a.at("trace_tau=5_trial=1.json"));
    CHECK(replay(trace) == trace.final_graph);
    CHECK(trace.config.seed == trial_seed(77, 2, 1));
    CHECK(summary.trials[2 * 6 + 1].metrics.edges == trace.final_graph.edge_count());
  }

  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("leaf fraction and diameter follow the tau trends") {
  ExperimentSpec spec;
  spec.tau_values = {0.001, 0.5, 10.0};
  spec.steps = 100;
  spec.trials = 50;
  spec.backend = Backend::chebyshev;
  const EnsembleSummary s = run_ensemble(spec);
  const TauSummary& small = s.per_tau[0];
  const TauSummary& mid = s.per_tau[1];
  const TauSummary& large = s.per_tau[2];
  MESSAGE("leaf fraction " << small.leaf_fraction.mean << " " << mid.leaf_fraction.mean << " "
                           << large.leaf_fraction.mean);
  MESSAGE("diameter " << small.diameter.mean << " " << mid.diameter.mean << " " << large.diameter.mean);
  CHECK(small.leaf_fraction.mean > large.leaf_fraction.mean);
  CHECK(mid.diameter.mean > small.diameter.mean);
  CHECK(mid.diameter.mean > large.diameter.mean);
}

TEST_CASE("invalid specs are rejected before any file is written") {
  const fs::path dir = scratch("invalid");
  ExperimentSpec spec = small_spec(dir);
  spec.tau_values = {};
  CHECK_THROWS_AS(run_experiment(spec), InvalidArgument);
  CHECK_FALSE(fs::exists(dir));
  spec = small_spec(dir);
  spec.workers = 0;
  CHECK_THROWS_AS(run_experiment(spec), InvalidArgument);
}
