#include "cohortcut/netgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cohortcut/errors.hpp"
#include "cohortcut/rng.hpp"

namespace cohortcut {

void validate(const CenConfig& config) {
  if (config.node_count == 0) throw ConfigError("CEN node_count must be positive");
  if (config.ring_degree_k == 0 || config.ring_degree_k % 2 != 0) {
    throw ConfigError("CEN ring_degree_k must be a positive even integer, got " +
                      std::to_string(config.ring_degree_k));
  }
  if (config.ring_degree_k >= config.node_count) {
    throw ConfigError("CEN ring_degree_k must be below node_count");
  }
  if (!(config.rewire_probability >= 0.0 && config.rewire_probability <= 1.0)) {
    throw ConfigError("CEN rewire_probability must lie in [0, 1]");
  }
}

std::size_t round_to_even(double x) {
  if (!(x >= 0.0)) return 0;
  return 2 * static_cast<std::size_t>(std::llround(x / 2.0));
}

double ws_clustering_estimate(std::size_t k, double p) {
  if (k < 2) return 0.0;
  const double kk = static_cast<double>(k);
  return 3.0 * (kk - 2.0) / (4.0 * (kk - 1.0)) * std::pow(1.0 - p, 3.0);
}

CenConfig calibrate_cen(std::size_t node_count, double density, double clustering,
                        std::uint64_t seed) {
  if (node_count < 3) throw ConfigError("calibration needs at least 3 nodes");
  if (!(density > 0.0 && density <= 1.0)) throw ConfigError("target density must be in (0, 1]");
  if (!(clustering >= 0.0 && clustering <= 1.0)) {
    throw ConfigError("target clustering must be in [0, 1]");
  }
  CenConfig config;
  config.node_count = node_count;
  config.seed = seed;
  config.ring_degree_k =
      std::clamp<std::size_t>(round_to_even(density * static_cast<double>(node_count - 1)), 2,
                              (node_count - 1) / 2 * 2);
  const double lattice = ws_clustering_estimate(config.ring_degree_k, 0.0);
  if (lattice <= 0.0 || clustering >= lattice) {
    config.rewire_probability = 0.0;
  } else {
    config.rewire_probability = std::clamp(1.0 - std::cbrt(clustering / lattice), 0.0, 1.0);
  }
  return config;
}

Graph generate_cen(const CenConfig& config) {
  validate(config);
  const std::size_t n = config.node_count;
  const std::size_t half = config.ring_degree_k / 2;
  Graph g(n);
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>((u + j) % n));
    }
  }
  if (config.rewire_probability <= 0.0) return g;

  Rng rng(config.seed);
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      const auto v = static_cast<NodeId>((u + j) % n);
      if (!rng.bernoulli(config.rewire_probability)) continue;
      // The lattice edge may already have been rewired away from v's side.
      if (!g.has_edge(static_cast<NodeId>(u), v)) continue;
      if (g.degree(static_cast<NodeId>(u)) >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(rng.below(n));
      } while (w == u || g.has_edge(static_cast<NodeId>(u), w));
      g.remove_edge(static_cast<NodeId>(u), v);
      g.add_edge(static_cast<NodeId>(u), w);
    }
  }
  return g;
}

double average_clustering(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return 0.0;
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;
  double total = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const auto nbrs = g.neighbors(v);
    const std::size_t d = nbrs.size();
    if (d < 2) continue;
    ++stamp;
    for (const auto& nb : nbrs) mark[nb.node] = stamp;
    std::uint64_t links = 0;
    for (const auto& nb : nbrs) {
      for (const auto& nb2 : g.neighbors(nb.node)) {
        if (mark[nb2.node] == stamp) ++links;
      }
    }
    // Each neighbor-neighbor link was seen from both ends.
    total += static_cast<double>(links) / static_cast<double>(d * (d - 1));
  }
  return total / static_cast<double>(n);
}

namespace {

struct GeodesicTotals {
  std::uint64_t pairs = 0;
  std::uint64_t distance_sum = 0;
};

// Breadth-first search from 64 sources at once: bit b of a node's word says
// whether source (base + b) has reached it.
GeodesicTotals all_pairs_geodesics(const Graph& g) {
  const std::size_t n = g.node_count();
  GeodesicTotals totals;
  std::vector<std::uint64_t> visited(n), frontier(n), next(n);
  for (std::size_t base = 0; base < n; base += 64) {
    const std::size_t width = std::min<std::size_t>(64, n - base);
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    for (std::size_t b = 0; b < width; ++b) {
      visited[base + b] = std::uint64_t{1} << b;
      frontier[base + b] = std::uint64_t{1} << b;
    }
    for (std::uint64_t depth = 1;; ++depth) {
      std::uint64_t reached = 0;
      for (NodeId v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (const auto& nb : g.neighbors(v)) acc |= frontier[nb.node];
        acc &= ~visited[v];
        next[v] = acc;
        reached += static_cast<std::uint64_t>(std::popcount(acc));
      }
      if (reached == 0) break;
      totals.pairs += reached;
      totals.distance_sum += reached * depth;
      for (std::size_t v = 0; v < n; ++v) visited[v] |= next[v];
      std::swap(frontier, next);
    }
  }
  return totals;
}

}  // namespace

NetworkStats network_stats(const Graph& g) {
  NetworkStats stats;
  const std::size_t n = g.node_count();
  const double m = static_cast<double>(g.edge_count());
  if (n >= 2) stats.density = 2.0 * m / (static_cast<double>(n) * static_cast<double>(n - 1));
  if (n >= 1) stats.avg_degree = 2.0 * m / static_cast<double>(n);
  stats.clustering_coefficient = average_clustering(g);
  const auto totals = all_pairs_geodesics(g);
  const std::uint64_t ordered = n >= 2 ? static_cast<std::uint64_t>(n) * (n - 1) : 0;
  stats.connected_pairs = totals.pairs;
  stats.disconnected_pairs = ordered - totals.pairs;
  if (totals.pairs > 0) {
    stats.mean_geodesic_distance =
        static_cast<double>(totals.distance_sum) / static_cast<double>(totals.pairs);
  }
  return stats;
}

void validate(const SinConfig& config) {
  if (config.dorm_count == 0 || config.floors_per_dorm == 0) {
    throw ConfigError("SIN dorm_count and floors_per_dorm must be positive");
  }
  for (double p : {config.p_floor, config.p_dorm, config.p_campus}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("SIN edge rates must lie in [0, 1]");
  }
}

EdgeTag pair_class(std::size_t cohort_a, std::size_t cohort_b, std::size_t floors_per_dorm) {
  if (cohort_a == cohort_b) return EdgeTag::kFloor;
  if (cohort_a / floors_per_dorm == cohort_b / floors_per_dorm) return EdgeTag::kDorm;
  return EdgeTag::kCampus;
}

Graph augment_sin(const Graph& g, const CohortAssignment& assignment, const SinConfig& config) {
  validate(config);
  const std::size_t n = g.node_count();
  if (assignment.cohort_of.size() != n) {
    throw ConfigError("cohort assignment covers " + std::to_string(assignment.cohort_of.size()) +
                      " nodes, graph has " + std::to_string(n));
  }
  if (assignment.cohort_count != config.dorm_count * config.floors_per_dorm) {
    throw ConfigError("cohort count " + std::to_string(assignment.cohort_count) +
                      " does not equal dorm_count * floors_per_dorm = " +
                      std::to_string(config.dorm_count * config.floors_per_dorm));
  }
  Graph out = g;
  Rng rng(config.seed);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double draw = rng.uniform();
      const EdgeTag tag =
          pair_class(assignment.cohort_of[u], assignment.cohort_of[v], config.floors_per_dorm);
      const double p = tag == EdgeTag::kFloor  ? config.p_floor
                       : tag == EdgeTag::kDorm ? config.p_dorm
                                               : config.p_campus;
      if (draw < p) out.add_edge(u, v, tag);
    }
  }
  return out;
}

nlohmann::json to_json(const CenConfig& config) {
  return {{"node_count", config.node_count},
          {"ring_degree_k", config.ring_degree_k},
          {"rewire_probability", config.rewire_probability},
          {"seed", config.seed}};
}

CenConfig cen_config_from_json(const nlohmann::json& doc) {
  try {
    const auto n = doc.at("node_count").get<std::size_t>();
    const auto seed = doc.value("seed", std::uint64_t{0});
    if (!doc.contains("ring_degree_k")) {
      // Calibrated form: {"node_count", "density", "clustering"}.
      return calibrate_cen(n, doc.at("density").get<double>(), doc.at("clustering").get<double>(),
                           seed);
    }
    CenConfig config;
    config.node_count = n;
    config.ring_degree_k = doc.at("ring_degree_k").get<std::size_t>();
    config.rewire_probability = doc.at("rewire_probability").get<double>();
    config.seed = seed;
    validate(config);
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("network config: ") + e.what());
  }
}

nlohmann::json to_json(const SinConfig& config) {
  return {{"dorm_count", config.dorm_count}, {"floors_per_dorm", config.floors_per_dorm},
          {"p_floor", config.p_floor},       {"p_dorm", config.p_dorm},
          {"p_campus", config.p_campus},     {"seed", config.seed}};
}

SinConfig sin_config_from_json(const nlohmann::json& doc) {
  try {
    SinConfig config;
    config.dorm_count = doc.value("dorm_count", config.dorm_count);
    config.floors_per_dorm = doc.value("floors_per_dorm", config.floors_per_dorm);
    config.p_floor = doc.at("p_floor").get<double>();
    config.p_dorm = doc.at("p_dorm").get<double>();
    config.p_campus = doc.at("p_campus").get<double>();
    config.seed = doc.value("seed", std::uint64_t{0});
    validate(config);
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sin config: ") + e.what());
  }
}

nlohmann::json to_json(const NetworkStats& stats) {
  nlohmann::json doc = {{"density", stats.density},
                        {"clustering_coefficient", stats.clustering_coefficient},
                        {"connected_pairs", stats.connected_pairs},
                        {"disconnected_pairs", stats.disconnected_pairs},
                        {"avg_degree", stats.avg_degree}};
  if (stats.mean_geodesic_distance) {
    doc["mean_geodesic_distance"] = *stats.mean_geodesic_distance;
  } else {
    doc["mean_geodesic_distance"] = nullptr;
  }
  return doc;
}

}  // namespace cohortcut
