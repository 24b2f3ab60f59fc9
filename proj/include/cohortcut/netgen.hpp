#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "cohortcut/cohort.hpp"
#include "cohortcut/graph.hpp"

namespace cohortcut {

/// Watts-Strogatz parameters for a course enrollment network (CEN).
struct CenConfig {
  std::size_t node_count = 0;
  std::size_t ring_degree_k = 0;  // even, < node_count
  double rewire_probability = 0.0;
  std::uint64_t seed = 0;
};

void validate(const CenConfig& config);

/// 2 * round(x / 2).
std::size_t round_to_even(double x);

/// Mean-field clustering of a Watts-Strogatz graph:
/// C(p) = 3(k-2) / (4(k-1)) * (1-p)^3.
double ws_clustering_estimate(std::size_t k, double p);

/// Picks k from the target density and p so that ws_clustering_estimate hits
/// the target clustering. p is clamped to [0, 1].
CenConfig calibrate_cen(std::size_t node_count, double density, double clustering,
                        std::uint64_t seed);

/// Ring lattice of degree k, then each lattice edge (u, u+j) is rewired to a
/// uniformly chosen non-neighbor with probability p, visiting j = 1..k/2 in
/// the outer loop and u in the inner loop. Edge count stays n*k/2. All edges
/// are tagged `class`.
Graph generate_cen(const CenConfig& config);

struct NetworkStats {
  double density = 0.0;
  double clustering_coefficient = 0.0;
  // Averaged over connected ordered pairs; empty when no pair is connected.
  std::optional<double> mean_geodesic_distance;
  std::uint64_t connected_pairs = 0;     // ordered pairs (u != v)
  std::uint64_t disconnected_pairs = 0;  // ordered pairs (u != v)
  double avg_degree = 0.0;
};

/// Mean local clustering, degree < 2 contributing 0.
double average_clustering(const Graph& g);

NetworkStats network_stats(const Graph& g);

/// Edge rates for turning a separated CEN into a student interaction network.
/// Cohort c lives on floor (c % floors_per_dorm) of dorm (c / floors_per_dorm).
struct SinConfig {
  std::size_t dorm_count = 8;
  std::size_t floors_per_dorm = 2;
  double p_floor = 0.0;
  double p_dorm = 0.0;
  double p_campus = 0.0;
  std::uint64_t seed = 0;
};

void validate(const SinConfig& config);

/// Tag an added edge between cohorts a and b would carry.
EdgeTag pair_class(std::size_t cohort_a, std::size_t cohort_b, std::size_t floors_per_dorm);

/// Adds floor / dorm / campus edges as independent per-pair Bernoulli draws.
/// One uniform is drawn for every unordered pair (u < v) in lexicographic
/// order, so two calls with the same seed share draws pair-by-pair even when
/// the assignments differ. Already-adjacent pairs are left alone.
Graph augment_sin(const Graph& g, const CohortAssignment& assignment, const SinConfig& config);

nlohmann::json to_json(const CenConfig& config);
CenConfig cen_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SinConfig& config);
SinConfig sin_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const NetworkStats& stats);

}  // namespace cohortcut
