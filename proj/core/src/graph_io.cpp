#include "qwgrow/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "qwgrow/error.hpp"

namespace qwgrow {

namespace {

struct Position {
  std::size_t line;
  std::size_t column;
};

Position locate(std::string_view text, std::size_t offset) {
  Position pos{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

[[noreturn]] void fail_at(std::string_view text, std::size_t offset, const std::string& what) {
  Position p = locate(text, offset);
  throw ParseError(what, p.line, p.column);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// ---- GraphML subset scanner ----

struct Tag {
  std::string name;
  std::map<std::string, std::string> attributes;
  std::size_t offset;
};

std::vector<Tag> scan_tags(std::string_view text) {
  std::vector<Tag> tags;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while ((i = text.find('<', i)) != std::string_view::npos) {
    const std::size_t start = i;
    if (text.substr(i, 4) == "<!--") {
      auto end = text.find("-->", i + 4);
      if (end == std::string_view::npos) fail_at(text, start, "unterminated comment");
      i = end + 3;
      continue;
    }
    if (text.substr(i, 2) == "<?" || text.substr(i, 2) == "<!" || text.substr(i, 2) == "</") {
      auto end = text.find('>', i);
      if (end == std::string_view::npos) fail_at(text, start, "unterminated markup");
      i = end + 1;
      continue;
    }
    ++i;
    Tag tag;
    tag.offset = start;
    while (i < text.size() && !is_space(text[i]) && text[i] != '/' && text[i] != '>') {
      tag.name.push_back(text[i++]);
    }
    if (tag.name.empty()) fail_at(text, start, "empty element name");
    for (;;) {
      while (i < text.size() && is_space(text[i])) ++i;
      if (i >= text.size()) fail_at(text, start, "unterminated element <" + tag.name + ">");
      if (text[i] == '>') {
        ++i;
        break;
      }
      if (text.substr(i, 2) == "/>") {
        i += 2;
        break;
      }
      const std::size_t attr_start = i;
      std::string key;
      while (i < text.size() && text[i] != '=' && !is_space(text[i]) && text[i] != '>') {
        key.push_back(text[i++]);
      }
      if (i >= text.size() || text[i] != '=' || key.empty()) {
        fail_at(text, attr_start, "malformed attribute in <" + tag.name + ">");
      }
      ++i;
      if (i >= text.size() || (text[i] != '"' && text[i] != '\'')) {
        fail_at(text, i, "expected quoted value for attribute '" + key + "'");
      }
      const char quote = text[i++];
      const auto close = text.find(quote, i);
      if (close == std::string_view::npos) fail_at(text, attr_start, "unterminated attribute value");
      tag.attributes[key] = std::string(text.substr(i, close - i));
      i = close + 1;
    }
    tags.push_back(std::move(tag));
  }
  return tags;
}

NodeId graphml_node_index(std::string_view text, const Tag& tag, const std::string& id) {
  if (id.size() < 2 || id[0] != 'n') {
    fail_at(text, tag.offset, "node id '" + id + "' is not of the form n<index>");
  }
  auto index = parse_uint(std::string_view(id).substr(1));
  if (!index) fail_at(text, tag.offset, "node id '" + id + "' is not of the form n<index>");
  return static_cast<NodeId>(*index);
}

}  // namespace

std::string to_edge_list(const Graph& g) {
  std::string out = "# nodes=" + std::to_string(g.node_count()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.first);
    out += ' ';
    out += std::to_string(e.second);
    out += '\n';
  }
  return out;
}

Graph parse_edge_list(std::string_view text) {
  std::optional<std::size_t> declared;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::size_t> edge_lines;

  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(begin, end - begin));
    ++line_no;
    begin = end + 1;

    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      if (body.substr(0, 6) == "nodes=") {
        auto n = parse_uint(trim(body.substr(6)));
        if (!n || *n == 0) throw ParseError("invalid node count in header", line_no, 1);
        if (declared) throw ParseError("duplicate nodes= header", line_no, 1);
        declared = static_cast<std::size_t>(*n);
      }
      continue;
    }

    const auto split = line.find_first_of(" \t");
    if (split == std::string_view::npos) {
      throw ParseError("expected two node indices, got '" + std::string(line) + "'", line_no, 1);
    }
    auto u = parse_uint(trim(line.substr(0, split)));
    auto v = parse_uint(trim(line.substr(split + 1)));
    if (!u) throw ParseError("invalid node index", line_no, 1);
    if (!v) throw ParseError("invalid node index", line_no, split + 2);
    if (*u == *v) throw ParseError("self-loop on node " + std::to_string(*u), line_no, 1);
    edges.emplace_back(static_cast<NodeId>(*u), static_cast<NodeId>(*v));
    edge_lines.push_back(line_no);
  }

  std::size_t n = 0;
  if (declared) {
    n = *declared;
  } else {
    for (const auto& [u, v] : edges) n = std::max<std::size_t>(n, std::max(u, v) + 1);
    if (n == 0) throw ParseError("empty edge list without a nodes= header", 1);
  }

  Graph g(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (u >= n || v >= n) {
      throw ParseError("edge " + std::to_string(u) + " " + std::to_string(v) +
                           " exceeds declared node count " + std::to_string(n),
                       edge_lines[i], 1);
    }
    g.add_edge(u, v);
  }
  return g;
}

std::string to_graphml(const Graph& g) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (std::size_t v = 0; v < g.node_count(); ++v) out << "    <node id=\"n" << v << "\"/>\n";
  for (const Edge& e : g.edges()) {
    out << "    <edge source=\"n" << e.first << "\" target=\"n" << e.second << "\"/>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

Graph parse_graphml(std::string_view text) {
  const auto tags = scan_tags(text);

  bool saw_graph = false;
  std::vector<char> present;
  std::vector<const Tag*> edge_tags;
  for (const Tag& tag : tags) {
    if (tag.name == "graph") {
      if (saw_graph) fail_at(text, tag.offset, "multiple <graph> elements are not supported");
      saw_graph = true;
      auto dir = tag.attributes.find("edgedefault");
      if (dir != tag.attributes.end() && dir->second != "undirected") {
        fail_at(text, tag.offset, "only undirected graphs are supported");
      }
    } else if (tag.name == "node") {
      auto id = tag.attributes.find("id");
      if (id == tag.attributes.end()) fail_at(text, tag.offset, "<node> without id");
      NodeId index = graphml_node_index(text, tag, id->second);
      if (index >= present.size()) present.resize(index + 1, 0);
      if (present[index]) fail_at(text, tag.offset, "duplicate node id '" + id->second + "'");
      present[index] = 1;
    } else if (tag.name == "edge") {
      edge_tags.push_back(&tag);
    }
  }
  if (!saw_graph) throw ParseError("no <graph> element", 1);
  if (present.empty()) throw ParseError("graph has no nodes", 1);
  for (std::size_t i = 0; i < present.size(); ++i) {
    if (!present[i]) {
      throw ParseError("node ids must be contiguous; n" + std::to_string(i) + " is missing", 1);
    }
  }

  Graph g(present.size());
  for (const Tag* tag : edge_tags) {
    auto src = tag->attributes.find("source");
    auto dst = tag->attributes.find("target");
    if (src == tag->attributes.end() || dst == tag->attributes.end()) {
      fail_at(text, tag->offset, "<edge> needs source and target");
    }
    NodeId u = graphml_node_index(text, *tag, src->second);
    NodeId v = graphml_node_index(text, *tag, dst->second);
    if (u >= g.node_count() || v >= g.node_count()) {
      fail_at(text, tag->offset, "edge references unknown node");
    }
    if (u == v) fail_at(text, tag->offset, "self-loop on " + src->second);
    g.add_edge(u, v);
  }
  return g;
}

std::string serialize(const Graph& g, GraphFormat format) {
  return format == GraphFormat::graphml ? to_graphml(g) : to_edge_list(g);
}

Graph deserialize(std::string_view text, GraphFormat format) {
  return format == GraphFormat::graphml ? parse_graphml(text) : parse_edge_list(text);
}

GraphFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".graphml" ? GraphFormat::graphml : GraphFormat::edge_list;
}

Graph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return deserialize(buffer.str(), format_for_path(path));
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << serialize(g, format);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace qwgrow
