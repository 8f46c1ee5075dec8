#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qwgrow/growth.hpp"
#include "qwgrow/metrics.hpp"

namespace qwgrow {

/// Which files run_experiment writes besides spec.json.
struct EmitSet {
  bool metrics = true;       ///< trials.csv, summary.csv
  bool histograms = false;   ///< hist_tau=<v>.csv
  bool traces = false;       ///< trace_tau=<v>_trial=<i>.json
  bool spectra = false;      ///< spectrum_tau=<v>.csv
  bool trajectories = false; ///< trajectory_<trial>.csv

  friend bool operator==(const EmitSet&, const EmitSet&) = default;
};

struct ExperimentSpec {
  std::size_t walkers = 1;
  std::vector<double> tau_values;
  std::size_t steps = 0;
  std::size_t trials = 20;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir = "qwgrow_out";
  EmitSet emit;
  std::size_t workers = 1;
  Backend backend = Backend::spectral;
  CollapsePolicy policy = CollapsePolicy::measured_node;

  void validate() const;
};

/*
 * Line-oriented "key = value" config; '#' starts a comment.
 *
 *   walkers    = 1                         (required)
 *   tau_values = [0.001, 0.01, 0.1, 10]    (required; brackets optional)
 *   steps      = 100                       (required)
 *   trials     = 20
 *   base_seed  = 0
 *   out_dir    = qwgrow_out
 *   emit       = metrics, histograms       (metrics histograms traces spectra trajectories)
 *   workers    = 1
 *   backend    = spectral                  (spectral | krylov | chebyshev)
 *   policy     = measured_node             (measured_node | new_node)
 *
 * Unknown or repeated keys are errors.
 */
ExperimentSpec parse_config(std::string_view text);
ExperimentSpec read_config(const std::filesystem::path& path);

/// Seed of trial `trial` at tau index `tau_index`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t tau_index, std::size_t trial);

/// Number of top |eigenvalues| recorded per step in trajectory files.
inline constexpr std::size_t kTrajectoryTop = 4;

struct TrialResult {
  std::size_t tau_index = 0;
  double tau = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  MetricsReport metrics;
  std::vector<std::size_t> star_sizes;             ///< single-walker runs only
  GrowthTrace trace;                               ///< kept when traces or trajectories are emitted
  std::vector<std::vector<double>> trajectory;     ///< kept when trajectories are emitted
};

struct ScalarStats {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation; 0 for fewer than two values
  std::size_t count = 0;
};

ScalarStats describe(const std::vector<double>& values);

struct TauSummary {
  double tau = 0.0;
  std::size_t trials = 0;
  ScalarStats edges;
  ScalarStats diameter;
  ScalarStats leaf_fraction;
  ScalarStats avg_clustering;
  ScalarStats alpha;     ///< over trials where a fit exists
  ScalarStats alpha_r2;
  std::map<std::size_t, double> mean_histogram;  ///< bin-wise mean of trial fractions
};

struct EnsembleSummary {
  std::vector<TauSummary> per_tau;
  std::vector<TrialResult> trials;  ///< ordered by (tau index, trial)
};

/*
 * Grows and measures every (tau, trial) pair, up to spec.workers at a time.
 * Each trial draws from its own seed, trial_seed(base_seed, tau index, trial),
 * and results are collected into fixed slots, so the outcome does not depend
 * on the worker count or on scheduling.
 */
EnsembleSummary run_ensemble(const ExperimentSpec& spec);

/// run_ensemble, then writes the requested files under spec.out_dir.
EnsembleSummary run_experiment(const ExperimentSpec& spec);

std::string spec_to_json(const ExperimentSpec& spec);
std::string trials_csv(const EnsembleSummary& summary);
std::string summary_csv(const EnsembleSummary& summary);
std::string histogram_csv(const TauSummary& tau);
std::string spectrum_csv(const EnsembleSummary& summary, std::size_t tau_index);
std::string trajectory_csv(const EnsembleSummary& summary, std::size_t trial);

}  // namespace qwgrow
