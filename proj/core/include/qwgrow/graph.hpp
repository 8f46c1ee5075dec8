#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace qwgrow {

using NodeId = std::uint32_t;

/// Unordered node pair, stored with first < second.
struct Edge {
  NodeId first{0};
  NodeId second{0};

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/*
 * Undirected simple graph with append-only node indices.
 *
 * Neighbor lists are kept sorted, so two graphs compare equal exactly when
 * their node counts and edge sets agree. The dense view is materialized on
 * demand for the walk engine.
 */
class Graph {
 public:
  Graph() = default;

  /// Graph with `node_count` isolated nodes.
  explicit Graph(std::size_t node_count);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  bool has_edge(NodeId u, NodeId v) const;
  bool contains(NodeId v) const noexcept { return v < adjacency_.size(); }

  /// Edges with first < second, in ascending lexicographic order.
  std::vector<Edge> edges() const;

  /// Inserts the edge {u, v}; returns false if it was already present.
  bool add_edge(NodeId u, NodeId v);

  /// Appends a node connected to every distinct node in `targets`.
  NodeId attach_node(std::span<const NodeId> targets);

  /// Symmetric 0/1 adjacency matrix with zero diagonal.
  Eigen::MatrixXd dense_adjacency() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Builds a graph on `n` nodes from an edge list; duplicate pairs collapse.
Graph new_graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);
Graph new_graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges);

/// Value-returning form of Graph::attach_node.
std::pair<Graph, NodeId> attach_node(const Graph& g, std::span<const NodeId> targets);

bool is_connected(const Graph& g);
bool is_tree(const Graph& g);

// Small named families used throughout tests and examples.
Graph path_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
Graph complete_graph(std::size_t n);

}  // namespace qwgrow
