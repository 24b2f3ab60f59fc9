#include "cohortcut/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cohortcut/errors.hpp"

namespace cohortcut {

std::string_view to_string(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::kClass: return "class";
    case EdgeTag::kFloor: return "floor";
    case EdgeTag::kDorm: return "dorm";
    case EdgeTag::kCampus: return "campus";
  }
  return "class";
}

std::optional<EdgeTag> parse_edge_tag(std::string_view text) {
  if (text == "class") return EdgeTag::kClass;
  if (text == "floor") return EdgeTag::kFloor;
  if (text == "dorm") return EdgeTag::kDorm;
  if (text == "campus") return EdgeTag::kCampus;
  return std::nullopt;
}

Graph::Graph(std::size_t node_count) : adjacency_(node_count) {}

void Graph::check_node(NodeId u) const {
  if (u >= adjacency_.size()) {
    throw ArgumentError("node index " + std::to_string(u) + " out of range [0, " +
                        std::to_string(adjacency_.size()) + ")");
  }
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

std::optional<EdgeTag> Graph::edge_tag(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const NodeId other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
  for (const auto& nb : a) {
    if (nb.node == other) return nb.tag;
  }
  return std::nullopt;
}

bool Graph::has_edge(NodeId u, NodeId v) const { return edge_tag(u, v).has_value(); }

bool Graph::add_edge(NodeId u, NodeId v, EdgeTag tag) {
  check_node(u);
  check_node(v);
  if (u == v) throw ArgumentError("self-loop on node " + std::to_string(u));
  if (has_edge(u, v)) return false;
  adjacency_[u].push_back({v, tag});
  adjacency_[v].push_back({u, tag});
  ++edge_count_;
  return true;
}

bool Graph::remove_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  auto erase_from = [](std::vector<Neighbor>& list, NodeId target) {
    auto it = std::find_if(list.begin(), list.end(),
                           [target](const Neighbor& nb) { return nb.node == target; });
    if (it == list.end()) return false;
    *it = list.back();
    list.pop_back();
    return true;
  };
  if (!erase_from(adjacency_[u], v)) return false;
  erase_from(adjacency_[v], u);
  --edge_count_;
  return true;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (const auto& nb : adjacency_[u]) {
      if (u < nb.node) out.push_back({u, nb.node, nb.tag});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  return out;
}

Graph Graph::induced_subgraph(std::span<const NodeId> nodes) const {
  std::vector<std::int64_t> local(adjacency_.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check_node(nodes[i]);
    if (local[nodes[i]] >= 0) throw ArgumentError("duplicate node in induced subgraph");
    local[nodes[i]] = static_cast<std::int64_t>(i);
  }
  Graph sub(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& nb : adjacency_[nodes[i]]) {
      const auto j = local[nb.node];
      if (j > static_cast<std::int64_t>(i)) {
        sub.adjacency_[i].push_back({static_cast<NodeId>(j), nb.tag});
        sub.adjacency_[j].push_back({static_cast<NodeId>(i), nb.tag});
        ++sub.edge_count_;
      }
    }
  }
  return sub;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.node_count() == b.node_count() && a.edge_count() == b.edge_count() &&
         a.edges() == b.edges();
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, std::string(to_string(e.tag))});
  return {{"n", g.node_count()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw ArgumentError("graph JSON needs \"n\" and \"edges\"");
  }
  const auto n = doc.at("n").get<std::int64_t>();
  if (n < 0) throw ArgumentError("graph JSON: negative node count");
  Graph g(static_cast<std::size_t>(n));
  for (const auto& item : doc.at("edges")) {
    if (!item.is_array() || item.size() < 2 || item.size() > 3) {
      throw ArgumentError("graph JSON: edge entries are [u, v, \"tag\"]");
    }
    const auto u = item[0].get<std::int64_t>();
    const auto v = item[1].get<std::int64_t>();
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ArgumentError("graph JSON: edge endpoint out of range");
    }
    if (u == v) throw ArgumentError("graph JSON: self-loop on node " + std::to_string(u));
    EdgeTag tag = EdgeTag::kClass;
    if (item.size() == 3) {
      auto parsed = parse_edge_tag(item[2].get<std::string>());
      if (!parsed) throw ArgumentError("graph JSON: unknown edge tag " + item[2].dump());
      tag = *parsed;
    }
    if (!g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v), tag)) {
      throw ArgumentError("graph JSON: duplicate edge (" + std::to_string(u) + ", " +
                          std::to_string(v) + ")");
    }
  }
  return g;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
  write_text_file(path, graph_to_json(g).dump() + "\n");
}

Graph read_graph(const std::filesystem::path& path) {
  const auto doc = read_json_file(path);
  try {
    return graph_from_json(doc);
  } catch (const std::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace cohortcut
