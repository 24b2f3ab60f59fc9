#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cohortcut {

using NodeId = std::uint32_t;

// Origin of an interaction edge.
enum class EdgeTag : std::uint8_t { kClass, kFloor, kDorm, kCampus };

std::string_view to_string(EdgeTag tag);
std::optional<EdgeTag> parse_edge_tag(std::string_view text);

struct Edge {
  NodeId u;  // u < v
  NodeId v;
  EdgeTag tag;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  EdgeTag tag;
};

/// Undirected simple graph with tagged edges.
///
/// Self-loops are rejected and an unordered pair holds at most one edge,
/// whatever its tag. Neighbor lists are unordered; `edges()` returns a
/// canonical (u, v)-sorted list.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::size_t degree(NodeId u) const { return adjacency_.at(u).size(); }
  std::size_t max_degree() const;
  std::span<const Neighbor> neighbors(NodeId u) const { return adjacency_.at(u); }

  bool has_edge(NodeId u, NodeId v) const;
  std::optional<EdgeTag> edge_tag(NodeId u, NodeId v) const;

  // Returns false (and leaves the graph untouched) when the pair is already
  // adjacent. Throws ArgumentError on self-loops or out-of-range indices.
  bool add_edge(NodeId u, NodeId v, EdgeTag tag = EdgeTag::kClass);
  bool remove_edge(NodeId u, NodeId v);

  std::vector<Edge> edges() const;

  // Subgraph induced by `nodes`; local index i corresponds to nodes[i].
  Graph induced_subgraph(std::span<const NodeId> nodes) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void check_node(NodeId u) const;

  std::vector<std::vector<Neighbor>> adjacency_;
  std::size_t edge_count_ = 0;
};

// {"n": int, "edges": [[u, v, "tag"], ...]}
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& doc);

void write_graph(const Graph& g, const std::filesystem::path& path);
Graph read_graph(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace cohortcut
