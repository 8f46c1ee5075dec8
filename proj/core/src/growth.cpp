#include "qwgrow/growth.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "qwgrow/error.hpp"

namespace qwgrow {

void RunConfig::validate() const {
  if (walkers < 1) throw InvalidArgument("walker count must be at least 1");
  if (!std::isfinite(tau) || !(tau > 0.0)) throw InvalidArgument("tau must be positive and finite");
  if (steps < 1) throw InvalidArgument("step count must be at least 1");
  if (initial_graph.node_count() == 0) throw InvalidArgument("initial graph must have at least one node");
  if (!is_connected(initial_graph)) throw InvalidArgument("initial graph must be connected");
  if (!initial_positions.empty()) {
    if (initial_positions.size() != walkers) {
      throw InvalidArgument("expected " + std::to_string(walkers) + " initial positions, got " +
                            std::to_string(initial_positions.size()));
    }
    for (NodeId v : initial_positions) {
      if (!initial_graph.contains(v)) {
        throw InvalidArgument("initial position " + std::to_string(v) + " is not a node of the initial graph");
      }
    }
  }
}

std::vector<NodeId> RunConfig::resolved_positions() const {
  if (initial_positions.empty()) return std::vector<NodeId>(walkers, 0);
  return initial_positions;
}

CollapseEvent step(Graph& g, std::vector<WalkerState>& walkers, double tau, RandomStream& rng,
                   const StepOptions& options) {
  if (walkers.empty()) throw InvalidArgument("step: no walkers");
  for (const auto& w : walkers) {
    if (w.size() != g.node_count()) {
      throw InvalidArgument("step: walker dimension " + std::to_string(w.size()) +
                            " does not match graph size " + std::to_string(g.node_count()));
    }
  }

  CollapseEvent event;
  event.step = options.step_index;
  event.sampled_t = sample_collapse_time(tau, rng);

  const Propagator propagator(g, options.backend);
  event.measured.reserve(walkers.size());
  for (const auto& w : walkers) {
    event.measured.push_back(measure(propagator.apply(w, event.sampled_t), rng));
  }

  event.new_node = g.attach_node(event.measured);

  const std::size_t grown = g.node_count();
  for (std::size_t i = 0; i < walkers.size(); ++i) {
    const NodeId target =
        options.policy == CollapsePolicy::new_node ? event.new_node : event.measured[i];
    walkers[i] = WalkerState::basis(grown, target);
  }
  return event;
}

GrowthTrace grow(const RunConfig& config) {
  RandomStream rng(config.seed);
  return grow(config, rng);
}

GrowthTrace grow(const RunConfig& config, RandomStream& rng) {
  config.validate();

  GrowthTrace trace;
  trace.config = config;
  trace.events.reserve(config.steps);

  Graph g = config.initial_graph;
  std::vector<WalkerState> walkers;
  for (NodeId v : config.resolved_positions()) walkers.push_back(WalkerState::basis(g.node_count(), v));

  StepOptions options{0, config.policy, config.backend};
  for (std::size_t i = 0; i < config.steps; ++i) {
    options.step_index = i;
    trace.events.push_back(step(g, walkers, config.tau, rng, options));
  }
  trace.final_graph = std::move(g);
  return trace;
}

Graph replay(const GrowthTrace& trace) {
  Graph g = trace.config.initial_graph;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const CollapseEvent& e = trace.events[i];
    auto fail = [&](const std::string& why) {
      throw InvalidArgument("replay: inconsistent event at step " + std::to_string(i) + ": " + why);
    };
    if (e.step != i) fail("recorded step index " + std::to_string(e.step));
    if (e.measured.empty()) fail("no measured nodes");
    if (e.measured.size() != trace.config.walkers) {
      fail(std::to_string(e.measured.size()) + " measured nodes for " +
           std::to_string(trace.config.walkers) + " walkers");
    }
    for (NodeId v : e.measured) {
      if (!g.contains(v)) {
        fail("measured node " + std::to_string(v) + " not in graph of " + std::to_string(g.node_count()) +
             " nodes");
      }
    }
    if (e.new_node != g.node_count()) fail("new node " + std::to_string(e.new_node) + " is not the next index");
    g.attach_node(e.measured);
  }
  return g;
}

std::string_view to_string(CollapsePolicy policy) {
  return policy == CollapsePolicy::new_node ? "new_node" : "measured_node";
}

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::krylov: return "krylov";
    case Backend::chebyshev: return "chebyshev";
    case Backend::spectral: break;
  }
  return "spectral";
}

CollapsePolicy parse_policy(std::string_view name) {
  if (name == "measured_node") return CollapsePolicy::measured_node;
  if (name == "new_node") return CollapsePolicy::new_node;
  throw InvalidArgument("unknown collapse policy '" + std::string(name) +
                        "' (expected measured_node or new_node)");
}

Backend parse_backend(std::string_view name) {
  if (name == "spectral") return Backend::spectral;
  if (name == "krylov") return Backend::krylov;
  if (name == "chebyshev") return Backend::chebyshev;
  throw InvalidArgument("unknown backend '" + std::string(name) + "' (expected spectral, krylov or chebyshev)");
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json edges_json(const Graph& g) {
  ordered_json out = ordered_json::array();
  for (const Edge& e : g.edges()) out.push_back({e.first, e.second});
  return out;
}

Graph graph_from_json(std::size_t n, const ordered_json& edges) {
  Graph g(n);
  for (const auto& pair : edges) {
    if (!pair.is_array() || pair.size() != 2) throw Error("trace: edge must be a [u, v] pair");
    const auto u = pair[0].get<NodeId>();
    const auto v = pair[1].get<NodeId>();
    if (u >= n || v >= n) throw Error("trace: edge endpoint out of range");
    g.add_edge(u, v);
  }
  return g;
}

}  // namespace

std::string trace_to_json(const GrowthTrace& trace) {
  const RunConfig& c = trace.config;
  ordered_json config;
  config["walkers"] = c.walkers;
  config["tau"] = c.tau;
  config["steps"] = c.steps;
  config["seed"] = c.seed;
  config["policy"] = to_string(c.policy);
  config["backend"] = to_string(c.backend);
  config["initial_nodes"] = c.initial_graph.node_count();
  config["initial_edges"] = edges_json(c.initial_graph);
  config["initial_positions"] = c.resolved_positions();

  ordered_json events = ordered_json::array();
  for (const CollapseEvent& e : trace.events) {
    ordered_json ev;
    ev["step"] = e.step;
    ev["t"] = e.sampled_t;
    ev["measured"] = e.measured;
    ev["new_node"] = e.new_node;
    events.push_back(std::move(ev));
  }

  ordered_json doc;
  doc["config"] = std::move(config);
  doc["events"] = std::move(events);
  doc["final_edges"] = edges_json(trace.final_graph);
  return doc.dump(2) + "\n";
}

GrowthTrace trace_from_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("trace: malformed JSON: ") + e.what());
  }
  try {
    GrowthTrace trace;
    const auto& c = doc.at("config");
    RunConfig& config = trace.config;
    config.walkers = c.at("walkers").get<std::size_t>();
    config.tau = c.at("tau").get<double>();
    config.steps = c.at("steps").get<std::size_t>();
    config.seed = c.at("seed").get<std::uint64_t>();
    config.policy = parse_policy(c.at("policy").get<std::string>());
    config.backend = parse_backend(c.at("backend").get<std::string>());
    config.initial_graph = graph_from_json(c.at("initial_nodes").get<std::size_t>(), c.at("initial_edges"));
    config.initial_positions = c.at("initial_positions").get<std::vector<NodeId>>();

    for (const auto& ev : doc.at("events")) {
      CollapseEvent e;
      e.step = ev.at("step").get<std::size_t>();
      e.sampled_t = ev.at("t").get<double>();
      e.measured = ev.at("measured").get<std::vector<NodeId>>();
      e.new_node = ev.at("new_node").get<NodeId>();
      trace.events.push_back(std::move(e));
    }
    trace.final_graph = graph_from_json(config.initial_graph.node_count() + trace.events.size(),
                                        doc.at("final_edges"));
    return trace;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("trace: schema violation: ") + e.what());
  }
}

}  // namespace qwgrow
