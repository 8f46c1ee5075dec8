#include "qwgrow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qwgrow/error.hpp"
#include "qwgrow/star.hpp"
#include "qwgrow/version.hpp"

namespace qwgrow {

void ExperimentSpec::validate() const {
  if (walkers < 1) throw InvalidArgument("walkers must be at least 1");
  if (tau_values.empty()) throw InvalidArgument("tau_values must not be empty");
  for (double tau : tau_values) {
    if (!std::isfinite(tau) || !(tau > 0.0)) {
      throw InvalidArgument("every tau must be positive and finite, got " + format_real(tau));
    }
  }
  if (std::set<double>(tau_values.begin(), tau_values.end()).size() != tau_values.size()) {
    throw InvalidArgument("tau_values must not repeat a value");
  }
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (workers < 1) throw InvalidArgument("workers must be at least 1");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_unsigned(std::string_view value, std::size_t line, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    throw ParseError(key + ": expected a non-negative integer, got '" + std::string(value) + "'", line);
  }
  return out;
}

double parse_real(std::string_view value, std::size_t line, const std::string& key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    throw ParseError(key + ": expected a number, got '" + std::string(value) + "'", line);
  }
  return out;
}

std::vector<std::string_view> split_list(std::string_view value, std::size_t line, const std::string& key) {
  value = trim(value);
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') throw ParseError(key + ": unterminated list", line);
    value = trim(value.substr(1, value.size() - 2));
  } else if (!value.empty() && value.back() == ']') {
    throw ParseError(key + ": unbalanced ']'", line);
  }
  std::vector<std::string_view> items;
  if (value.empty()) return items;
  std::size_t begin = 0;
  while (true) {
    const auto comma = value.find(',', begin);
    const auto item = trim(value.substr(begin, comma == std::string_view::npos ? std::string_view::npos : comma - begin));
    if (item.empty()) throw ParseError(key + ": empty list entry", line);
    items.push_back(item);
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return items;
}

}  // namespace

ExperimentSpec parse_config(std::string_view text) {
  static const std::set<std::string> kKnown = {"walkers", "tau_values", "steps",   "trials",  "base_seed",
                                               "out_dir", "emit",       "workers", "backend", "policy"};
  ExperimentSpec spec;
  std::set<std::string> seen;

  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    begin = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!kKnown.count(key)) throw ParseError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no);
    if (value.empty()) throw ParseError(key + ": missing value", line_no);

    if (key == "walkers") {
      spec.walkers = parse_unsigned(value, line_no, key);
    } else if (key == "tau_values") {
      spec.tau_values.clear();
      for (auto item : split_list(value, line_no, key)) spec.tau_values.push_back(parse_real(item, line_no, key));
    } else if (key == "steps") {
      spec.steps = parse_unsigned(value, line_no, key);
    } else if (key == "trials") {
      spec.trials = parse_unsigned(value, line_no, key);
    } else if (key == "base_seed") {
      spec.base_seed = parse_unsigned(value, line_no, key);
    } else if (key == "out_dir") {
      spec.out_dir = std::string(value);
    } else if (key == "workers") {
      spec.workers = parse_unsigned(value, line_no, key);
    } else if (key == "backend") {
      try {
        spec.backend = parse_backend(value);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (key == "policy") {
      try {
        spec.policy = parse_policy(value);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (key == "emit") {
      spec.emit = EmitSet{false, false, false, false, false};
      for (auto item : split_list(value, line_no, key)) {
        if (item == "metrics") spec.emit.metrics = true;
        else if (item == "histograms") spec.emit.histograms = true;
        else if (item == "traces") spec.emit.traces = true;
        else if (item == "spectra") spec.emit.spectra = true;
        else if (item == "trajectories") spec.emit.trajectories = true;
        else throw ParseError("emit: unknown output '" + std::string(item) + "'", line_no);
      }
    }
  }

  for (const char* required : {"walkers", "tau_values", "steps"}) {
    if (!seen.count(required)) throw ParseError(std::string("missing required key '") + required + "'", line_no);
  }
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), line_no);
  }
  return spec;
}

ExperimentSpec read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t tau_index, std::size_t trial) {
  return split_seed(base_seed, tau_index, trial);
}

ScalarStats describe(const std::vector<double>& values) {
  ScalarStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

TrialResult run_trial(const ExperimentSpec& spec, std::size_t tau_index, std::size_t trial) {
  TrialResult r;
  r.tau_index = tau_index;
  r.tau = spec.tau_values[tau_index];
  r.trial = trial;
  r.seed = trial_seed(spec.base_seed, tau_index, trial);

  RunConfig config;
  config.walkers = spec.walkers;
  config.tau = r.tau;
  config.steps = spec.steps;
  config.seed = r.seed;
  config.policy = spec.policy;
  config.backend = spec.backend;
  GrowthTrace trace = grow(config);

  r.metrics = compute_metrics(trace.final_graph, spec.emit.spectra);
  if (spec.walkers == 1) r.star_sizes = detect_stars(trace.final_graph);
  if (spec.emit.trajectories) r.trajectory = spectrum_trajectory(trace, kTrajectoryTop);
  if (spec.emit.traces || spec.emit.trajectories) r.trace = std::move(trace);
  return r;
}

EnsembleSummary summarize(const ExperimentSpec& spec, std::vector<TrialResult> results) {
  EnsembleSummary out;
  out.trials = std::move(results);
  for (std::size_t ti = 0; ti < spec.tau_values.size(); ++ti) {
    TauSummary s;
    s.tau = spec.tau_values[ti];
    std::vector<double> edges, diam, leaf, clust, alpha, r2;
    std::map<std::size_t, double> hist;
    for (const TrialResult& r : out.trials) {
      if (r.tau_index != ti) continue;
      ++s.trials;
      edges.push_back(static_cast<double>(r.metrics.edges));
      diam.push_back(static_cast<double>(r.metrics.diameter));
      leaf.push_back(r.metrics.leaf_fraction);
      clust.push_back(r.metrics.avg_clustering);
      if (r.metrics.fit) {
        alpha.push_back(r.metrics.fit->alpha);
        r2.push_back(r.metrics.fit->r_squared);
      }
      for (const auto& [k, d] : r.metrics.degree_histogram.fractions) hist[k] += d;
    }
    s.edges = describe(edges);
    s.diameter = describe(diam);
    s.leaf_fraction = describe(leaf);
    s.avg_clustering = describe(clust);
    s.alpha = describe(alpha);
    s.alpha_r2 = describe(r2);
    for (auto& [k, d] : hist) d /= static_cast<double>(s.trials);
    s.mean_histogram = std::move(hist);
    out.per_tau.push_back(std::move(s));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

std::string tau_label(double tau) { return "tau=" + format_real(tau); }

}  // namespace

EnsembleSummary run_ensemble(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t total = spec.tau_values.size() * spec.trials;
  std::vector<TrialResult> results(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      try {
        results[job] = run_trial(spec, job / spec.trials, job % spec.trials);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };

  const std::size_t threads = std::min(spec.workers, total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(spec, std::move(results));
}

std::string spec_to_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json doc;
  doc["library"] = "qwgrow";
  doc["version"] = kVersion;
  doc["walkers"] = spec.walkers;
  doc["tau_values"] = spec.tau_values;
  doc["steps"] = spec.steps;
  doc["trials"] = spec.trials;
  doc["base_seed"] = spec.base_seed;
  std::vector<std::string> emit;
  if (spec.emit.metrics) emit.emplace_back("metrics");
  if (spec.emit.histograms) emit.emplace_back("histograms");
  if (spec.emit.traces) emit.emplace_back("traces");
  if (spec.emit.spectra) emit.emplace_back("spectra");
  if (spec.emit.trajectories) emit.emplace_back("trajectories");
  doc["emit"] = emit;
  doc["backend"] = to_string(spec.backend);
  doc["policy"] = to_string(spec.policy);
  doc["seed_derivation"] = "splitmix64(splitmix64(splitmix64(base_seed) ^ tau_index) ^ trial)";
  doc["rng"] = "mt19937_64; uniform = (word >> 11) * 2^-53";
  return doc.dump(2) + "\n";
}

std::string trials_csv(const EnsembleSummary& summary) {
  std::string out = "tau,trial,seed," + metrics_csv_header() + ",star_count,star_size_mean\n";
  for (const TrialResult& r : summary.trials) {
    out += format_real(r.tau) + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
           metrics_csv_row(r.metrics) + ",";
    // Star columns stay empty for multi-walker runs, whose graphs are not trees.
    if (!r.star_sizes.empty()) {
      std::size_t total = 0;
      for (std::size_t s : r.star_sizes) total += s;
      out += std::to_string(r.star_sizes.size()) + "," +
             format_real(static_cast<double>(total) / static_cast<double>(r.star_sizes.size()));
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

std::string summary_csv(const EnsembleSummary& summary) {
  std::string out =
      "tau,trials,edges_mean,edges_std,diameter_mean,diameter_std,leaf_fraction_mean,leaf_fraction_std,"
      "avg_clustering_mean,avg_clustering_std,alpha_count,alpha_mean,alpha_std,alpha_r2_mean,alpha_r2_std\n";
  for (const TauSummary& s : summary.per_tau) {
    auto pair = [](const ScalarStats& st) { return format_real(st.mean) + "," + format_real(st.stddev); };
    out += format_real(s.tau) + "," + std::to_string(s.trials) + "," + pair(s.edges) + "," + pair(s.diameter) +
           "," + pair(s.leaf_fraction) + "," + pair(s.avg_clustering) + "," + std::to_string(s.alpha.count) +
           "," + pair(s.alpha) + "," + pair(s.alpha_r2) + "\n";
  }
  return out;
}

std::string histogram_csv(const TauSummary& tau) {
  std::string out = "k,d_k\n";
  for (const auto& [k, d] : tau.mean_histogram) out += std::to_string(k) + "," + format_real(d) + "\n";
  return out;
}

std::string spectrum_csv(const EnsembleSummary& summary, std::size_t tau_index) {
  std::string out = "trial,index,eigenvalue\n";
  for (const TrialResult& r : summary.trials) {
    if (r.tau_index != tau_index) continue;
    for (std::size_t i = 0; i < r.metrics.spectrum.size(); ++i) {
      out += std::to_string(r.trial) + "," + std::to_string(i) + "," + format_real(r.metrics.spectrum[i]) + "\n";
    }
  }
  return out;
}

std::string trajectory_csv(const EnsembleSummary& summary, std::size_t trial) {
  std::string out = "tau,step,rank,abs_eigenvalue\n";
  for (const TrialResult& r : summary.trials) {
    if (r.trial != trial) continue;
    for (std::size_t step = 0; step < r.trajectory.size(); ++step) {
      for (std::size_t rank = 0; rank < r.trajectory[step].size(); ++rank) {
        out += format_real(r.tau) + "," + std::to_string(step) + "," + std::to_string(rank) + "," +
               format_real(r.trajectory[step][rank]) + "\n";
      }
    }
  }
  return out;
}

EnsembleSummary run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) throw Error("cannot create output directory " + spec.out_dir.string() + ": " + ec.message());

  EnsembleSummary summary = run_ensemble(spec);

  const auto& dir = spec.out_dir;
  write_file(dir / "spec.json", spec_to_json(spec));
  if (spec.emit.metrics) {
    write_file(dir / "trials.csv", trials_csv(summary));
    write_file(dir / "summary.csv", summary_csv(summary));
  }
  for (std::size_t ti = 0; ti < spec.tau_values.size(); ++ti) {
    const std::string label = tau_label(spec.tau_values[ti]);
    if (spec.emit.histograms) write_file(dir / ("hist_" + label + ".csv"), histogram_csv(summary.per_tau[ti]));
    if (spec.emit.spectra) write_file(dir / ("spectrum_" + label + ".csv"), spectrum_csv(summary, ti));
  }
  if (spec.emit.traces) {
    for (const TrialResult& r : summary.trials) {
      write_file(dir / ("trace_" + tau_label(r.tau) + "_trial=" + std::to_string(r.trial) + ".json"),
                 trace_to_json(r.trace));
    }
  }
  if (spec.emit.trajectories) {
    for (std::size_t trial = 0; trial < spec.trials; ++trial) {
      write_file(dir / ("trajectory_" + std::to_string(trial) + ".csv"), trajectory_csv(summary, trial));
    }
  }
  return summary;
}

}  // namespace qwgrow
