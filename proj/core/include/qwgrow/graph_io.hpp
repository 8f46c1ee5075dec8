#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qwgrow/graph.hpp"

namespace qwgrow {

enum class GraphFormat { edge_list, graphml };

/*
 * Edge-list text:
 *
 *   # nodes=4
 *   0 1
 *   0 2
 *   0 3
 *
 * Lines starting with '#' are comments; the "# nodes=N" header fixes the node
 * count (when absent it is inferred as max endpoint + 1). One edge per line,
 * written with u < v in ascending order. LF newlines.
 */
std::string to_edge_list(const Graph& g);
Graph parse_edge_list(std::string_view text);

/// Undirected GraphML with node ids "n0" .. "n{N-1}".
std::string to_graphml(const Graph& g);
Graph parse_graphml(std::string_view text);

std::string serialize(const Graph& g, GraphFormat format);
Graph deserialize(std::string_view text, GraphFormat format);

/// Picks GraphML for a ".graphml" extension and edge-list text otherwise.
GraphFormat format_for_path(const std::filesystem::path& path);

Graph read_graph(const std::filesystem::path& path);
void write_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format);

}  // namespace qwgrow
