#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "qwgrow/graph_io.hpp"
#include "qwgrow/growth.hpp"

using namespace qwgrow;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qwgrow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qwgrow_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("grow writes a tree to the requested file") {
  const fs::path dir = scratch("grow");
  const std::string path = (dir / "g.edgelist").string();
  const Result r = run({"grow", "--walkers", "1", "--tau", "0.001", "--steps", "100", "--seed", "7", "--out", path});
  REQUIRE(r.code == 0);
  const Graph g = read_graph(path);
  CHECK(g.node_count() == 101);
  CHECK(g.edge_count() == 100);
  CHECK(is_tree(g));

  const Result again = run({"grow", "--tau", "0.001", "--steps", "100", "--seed", "7"});
  CHECK(again.out == slurp(path));

  const Result ml = run({"grow", "--tau", "0.3", "--steps", "20", "--format", "graphml", "--walkers", "2"});
  CHECK(parse_graphml(ml.out).node_count() == 21);

  const Result trace = run({"grow", "--tau", "0.3", "--steps", "20", "--format", "trace-json", "--seed", "4"});
  const GrowthTrace t = trace_from_json(trace.out);
  CHECK(t.events.size() == 20);
  CHECK(t.config.seed == 4);
  fs::remove_all(dir);
}

TEST_CASE("stars prints a monotone table and the expected size") {
  const Result r = run({"stars", "--tau", "0.1", "--max-k", "100"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,p_center,p_out");
  double previous = 2.0;
  std::size_t rows = 0;
  while (std::getline(in, line) && line.front() != '#') {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    const double pc = std::stod(line.substr(first + 1, second - first - 1));
    CHECK(pc < previous);
    previous = pc;
    ++rows;
  }
  CHECK(rows == 100);
  CHECK(line.rfind("# expected_star_size=", 0) == 0);
}

TEST_CASE("analyze reports the star metrics") {
  const fs::path dir = scratch("analyze");
  const fs::path path = dir / "star4.edgelist";
  std::ofstream(path) << "0 1\n0 2\n0 3\n";
  const Result r = run({"analyze", "--in", path.string(), "--spectrum"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("nodes=4\n") != std::string::npos);
  CHECK(r.out.find("diameter=2\n") != std::string::npos);
  CHECK(r.out.find("leaf_fraction=0.75\n") != std::string::npos);
  CHECK(r.out.find("avg_clustering=0\n") != std::string::npos);
  CHECK(r.out.find("alpha=\n") != std::string::npos);
  CHECK(r.out.find("degree_histogram=1:0.75 3:0.25\n") != std::string::npos);
  CHECK(r.out.find("spectrum=") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("charpoly emits a schema-valid report") {
  for (const char* chain : {"1,1", "3,2", "3,3,3"}) {
    const Result r = run({"charpoly", "--chain", chain});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("match").is_boolean());
    CHECK(doc.at("residual_coefficients").is_array());
    CHECK(doc.at("exact").is_array());
    CHECK(doc.at("recurrence").is_array());
  }
}

TEST_CASE("sweep runs a config file") {
  const fs::path dir = scratch("sweep");
  std::ofstream(dir / "run.cfg") << "walkers = 1\ntau_values = 0.1, 1\nsteps = 15\ntrials = 3\nemit = metrics\n";
  const Result r = run({"sweep", "--config", (dir / "run.cfg").string(), "--out-dir", (dir / "out").string(),
                        "--workers", "2"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "out" / "trials.csv"));
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  CHECK(fs::exists(dir / "out" / "spec.json"));
  fs::remove_all(dir);
}

TEST_CASE("errors exit nonzero with a message") {
  CHECK(run({}).code != 0);
  CHECK(run({"grow", "--steps", "10"}).code != 0);
  CHECK(run({"grow", "--tau", "0", "--steps", "10"}).code != 0);
  CHECK(run({"grow", "--tau", "1", "--steps", "10", "--format", "dot"}).code != 0);
  CHECK(run({"grow", "--tau", "1", "--steps", "10", "--bogus"}).code != 0);
  CHECK(run({"analyze", "--in", "/nonexistent/graph.edgelist"}).code != 0);
  CHECK(run({"stars", "--tau", "-1", "--max-k", "3"}).code != 0);

  const Result chain = run({"charpoly", "--chain", "3,x"});
  CHECK(chain.code == 1);
  CHECK(chain.err.rfind("qwgrow: error: ", 0) == 0);
  CHECK(std::count(chain.err.begin(), chain.err.end(), '\n') == 1);

  const fs::path dir = scratch("errors");
  std::ofstream(dir / "bad.edgelist") << "# nodes=3\n0 5\n";
  const Result bad = run({"analyze", "--in", (dir / "bad.edgelist").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 2") != std::string::npos);
  fs::remove_all(dir);
}
