#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "cohortcut/graph.hpp"
#include "cohortcut/qubomc.hpp"

namespace cohortcut {

struct CohortAssignment {
  std::vector<std::uint32_t> cohort_of;  // node -> cohort in [0, cohort_count)
  std::size_t cohort_count = 1;
  std::uint64_t cut_edges_removed = 0;   // edges of the partitioned graph crossing cohorts
  std::vector<std::size_t> cohort_sizes;
};

bool is_power_of_two(std::size_t n);

/// Repeated bisection: every current cohort is split by Max-Cut on its
/// induced subgraph until there are n_cohorts. Final indices follow
/// depth-first left-to-right order (side-0 child first), so cohorts 2i and
/// 2i+1 are siblings.
///
/// Edgeless cohorts are split evenly by index order. A one-sided solver
/// result on a cohort with edges is repaired by moving the single node whose
/// flip yields the largest cut. A cohort with fewer than two nodes produces
/// an empty sibling.
CohortAssignment partition_recursive_maxcut(const Graph& g, std::size_t n_cohorts,
                                            const SolverConfig& solver);

/// If every label is equal on a graph with edges, moves the node whose flip
/// gives the largest cut (lowest index on ties). Returns whether it did.
bool repair_one_sided(const Graph& g, Labels& labels);

/// Each node picks a cohort uniformly from [0, n_cohorts), in node order.
CohortAssignment partition_random(const Graph& g, std::size_t n_cohorts, std::uint64_t seed);

/// Fills cohort_sizes and cut_edges_removed from cohort_of.
void finalize_assignment(const Graph& g, CohortAssignment& assignment);

/// g without the edges joining different cohorts.
Graph apply_cohort_separation(const Graph& g, const CohortAssignment& assignment);

// {"n_cohorts": N, "cohort_of": [...], "cut_edges_removed": int}
nlohmann::json to_json(const CohortAssignment& assignment);
CohortAssignment assignment_from_json(const nlohmann::json& doc);
void write_assignment(const CohortAssignment& assignment, const std::filesystem::path& path);
CohortAssignment read_assignment(const std::filesystem::path& path);

}  // namespace cohortcut
