#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qwgrow/graph.hpp"
#include "qwgrow/random.hpp"
#include "qwgrow/walk.hpp"

namespace qwgrow {

/// Where each walker restarts after a step.
enum class CollapsePolicy {
  measured_node,  ///< its own measured node (default)
  new_node,       ///< the node that was just attached
};

struct RunConfig {
  std::size_t walkers = 1;
  double tau = 1.0;
  std::size_t steps = 1;
  std::uint64_t seed = 0;
  Graph initial_graph = Graph(1);
  /// One entry per walker; empty means every walker starts at node 0.
  std::vector<NodeId> initial_positions;
  CollapsePolicy policy = CollapsePolicy::measured_node;
  Backend backend = Backend::spectral;

  /// Throws InvalidArgument describing the first violated constraint.
  void validate() const;
  std::vector<NodeId> resolved_positions() const;
};

struct CollapseEvent {
  std::size_t step = 0;
  double sampled_t = 0.0;
  std::vector<NodeId> measured;
  NodeId new_node = 0;

  friend bool operator==(const CollapseEvent&, const CollapseEvent&) = default;
};

struct GrowthTrace {
  RunConfig config;
  std::vector<CollapseEvent> events;
  Graph final_graph;
};

struct StepOptions {
  std::size_t step_index = 0;
  CollapsePolicy policy = CollapsePolicy::measured_node;
  Backend backend = Backend::spectral;
};

/*
 * One growth iteration, applied in place:
 *   1. draw a shared collapse time t ~ Exp(tau)
 *   2. evolve every walker for t under the current adjacency matrix
 *   3. measure each walker independently
 *   4. attach one new node to the distinct measured nodes
 *   5. collapse each walker (see CollapsePolicy), padded to the new size
 * Consumes exactly 1 + walkers.size() draws from `rng`.
 */
CollapseEvent step(Graph& g, std::vector<WalkerState>& walkers, double tau, RandomStream& rng,
                   const StepOptions& options = {});

/// Runs config.steps iterations from a fresh stream seeded with config.seed.
GrowthTrace grow(const RunConfig& config);

/// Same, but drawing from a caller-owned stream (for auditing or forcing draws).
GrowthTrace grow(const RunConfig& config, RandomStream& rng);

/// Rebuilds the final graph from the initial graph and events alone.
Graph replay(const GrowthTrace& trace);

/*
 * JSON document, keys in this order:
 *   {"config": {"walkers", "tau", "steps", "seed", "policy", "backend",
 *               "initial_nodes", "initial_edges", "initial_positions"},
 *    "events": [{"step", "t", "measured", "new_node"}, ...],
 *    "final_edges": [[u, v], ...]}
 * Reals are written in shortest round-trip form.
 */
std::string trace_to_json(const GrowthTrace& trace);
GrowthTrace trace_from_json(std::string_view text);

std::string_view to_string(CollapsePolicy policy);
std::string_view to_string(Backend backend);
CollapsePolicy parse_policy(std::string_view name);
Backend parse_backend(std::string_view name);

}  // namespace qwgrow
