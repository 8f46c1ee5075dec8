#include "qwgrow/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "qwgrow/error.hpp"

namespace qwgrow {

namespace {

void check_node(const Graph& g, NodeId v, const char* context) {
  if (!g.contains(v)) {
    throw InvalidArgument(std::string(context) + ": node " + std::to_string(v) +
                          " out of range for graph with " + std::to_string(g.node_count()) +
                          " nodes");
  }
}

void insert_sorted(std::vector<NodeId>& list, NodeId v) {
  list.insert(std::lower_bound(list.begin(), list.end(), v), v);
}

}  // namespace

Graph::Graph(std::size_t node_count) : adjacency_(node_count) {}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check_node(*this, v, "neighbors");
  return adjacency_[v];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

bool Graph::add_edge(NodeId u, NodeId v) {
  check_node(*this, u, "add_edge");
  check_node(*this, v, "add_edge");
  if (u == v) {
    throw InvalidArgument("add_edge: self-loop on node " + std::to_string(u));
  }
  if (has_edge(u, v)) return false;
  insert_sorted(adjacency_[u], v);
  insert_sorted(adjacency_[v], u);
  ++edge_count_;
  return true;
}

NodeId Graph::attach_node(std::span<const NodeId> targets) {
  if (targets.empty()) throw InvalidArgument("attach_node: empty target set");
  for (NodeId t : targets) check_node(*this, t, "attach_node");

  const auto fresh = static_cast<NodeId>(adjacency_.size());
  adjacency_.emplace_back();
  for (NodeId t : targets) add_edge(fresh, t);
  return fresh;
}

Eigen::MatrixXd Graph::dense_adjacency() const {
  const auto n = static_cast<Eigen::Index>(adjacency_.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) a(u, v) = 1.0;
  }
  return a;
}

Graph new_graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
  if (n == 0) throw InvalidArgument("new_graph: node count must be positive");
  Graph g(n);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

Graph new_graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  return new_graph(n, std::span<const std::pair<NodeId, NodeId>>(edges.begin(), edges.size()));
}

std::pair<Graph, NodeId> attach_node(const Graph& g, std::span<const NodeId> targets) {
  Graph grown = g;
  NodeId fresh = grown.attach_node(targets);
  return {std::move(grown), fresh};
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

bool is_tree(const Graph& g) {
  return g.node_count() >= 1 && g.edge_count() + 1 == g.node_count() && is_connected(g);
}

Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(static_cast<NodeId>(i - 1), static_cast<NodeId>(i));
  return g;
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle_graph: need at least 3 nodes");
  Graph g = path_graph(n);
  g.add_edge(0, static_cast<NodeId>(n - 1));
  return g;
}

Graph star_graph(std::size_t leaves) {
  Graph g(leaves + 1);
  for (std::size_t i = 1; i <= leaves; ++i) g.add_edge(0, static_cast<NodeId>(i));
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

}  // namespace qwgrow
