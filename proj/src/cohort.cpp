#include "cohortcut/cohort.hpp"

#include <algorithm>

#include "cohortcut/errors.hpp"
#include "cohortcut/rng.hpp"

namespace cohortcut {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

// Splits `members` in two; returns per-member side labels.
Labels bisect(const Graph& g, const std::vector<NodeId>& members, const SolverConfig& solver) {
  if (members.size() < 2) return Labels(members.size(), 0);
  const Graph sub = g.induced_subgraph(members);
  Labels labels = solve_maxcut(sub, solver).labels;
  if (sub.edge_count() == 0) return labels;  // solve_maxcut already returns the even split

  repair_one_sided(sub, labels);
  return labels;
}

}  // namespace

bool repair_one_sided(const Graph& g, Labels& labels) {
  const std::size_t size = labels.size();
  if (size < 2 || g.edge_count() == 0) return false;
  const auto ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (ones != 0 && ones != size) return false;
  NodeId best = 0;
  std::int64_t best_gain = flip_gain(g, labels, 0);
  for (NodeId u = 1; u < size; ++u) {
    const auto gain = flip_gain(g, labels, u);
    if (gain > best_gain) {
      best_gain = gain;
      best = u;
    }
  }
  labels[best] ^= 1;
  return true;
}

CohortAssignment partition_recursive_maxcut(const Graph& g, std::size_t n_cohorts,
                                            const SolverConfig& solver) {
  const std::size_t n = g.node_count();
  if (!is_power_of_two(n_cohorts)) {
    throw ArgumentError("cohort count " + std::to_string(n_cohorts) + " is not a power of two");
  }
  if (n_cohorts > n) {
    throw ArgumentError("cohort count " + std::to_string(n_cohorts) + " exceeds node count " +
                        std::to_string(n));
  }
  validate(solver);

  std::vector<std::vector<NodeId>> cohorts(1);
  cohorts[0].resize(n);
  for (NodeId u = 0; u < n; ++u) cohorts[0][u] = u;

  for (std::size_t depth = 0; cohorts.size() < n_cohorts; ++depth) {
    std::vector<std::vector<NodeId>> next;
    next.reserve(cohorts.size() * 2);
    for (std::size_t c = 0; c < cohorts.size(); ++c) {
      SolverConfig split_solver = solver;
      split_solver.seed = derive_seed(solver.seed, (depth << 32) | c);
      const auto& members = cohorts[c];
      const Labels sides = bisect(g, members, split_solver);
      std::vector<NodeId> left, right;
      for (std::size_t i = 0; i < members.size(); ++i) {
        (sides[i] == 0 ? left : right).push_back(members[i]);
      }
      next.push_back(std::move(left));
      next.push_back(std::move(right));
    }
    cohorts = std::move(next);
  }

  CohortAssignment assignment;
  assignment.cohort_count = n_cohorts;
  assignment.cohort_of.assign(n, 0);
  for (std::size_t c = 0; c < cohorts.size(); ++c) {
    for (NodeId u : cohorts[c]) assignment.cohort_of[u] = static_cast<std::uint32_t>(c);
  }
  finalize_assignment(g, assignment);
  return assignment;
}

CohortAssignment partition_random(const Graph& g, std::size_t n_cohorts, std::uint64_t seed) {
  if (n_cohorts == 0) throw ArgumentError("cohort count must be positive");
  CohortAssignment assignment;
  assignment.cohort_count = n_cohorts;
  assignment.cohort_of.resize(g.node_count());
  Rng rng(seed);
  for (auto& c : assignment.cohort_of) c = static_cast<std::uint32_t>(rng.below(n_cohorts));
  finalize_assignment(g, assignment);
  return assignment;
}

void finalize_assignment(const Graph& g, CohortAssignment& assignment) {
  if (assignment.cohort_of.size() != g.node_count()) {
    throw ArgumentError("assignment covers " + std::to_string(assignment.cohort_of.size()) +
                        " nodes, graph has " + std::to_string(g.node_count()));
  }
  assignment.cohort_sizes.assign(assignment.cohort_count, 0);
  for (auto c : assignment.cohort_of) {
    if (c >= assignment.cohort_count) throw ArgumentError("cohort index out of range");
    ++assignment.cohort_sizes[c];
  }
  assignment.cut_edges_removed = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const auto& nb : g.neighbors(u)) {
      if (u < nb.node && assignment.cohort_of[u] != assignment.cohort_of[nb.node]) {
        ++assignment.cut_edges_removed;
      }
    }
  }
}

Graph apply_cohort_separation(const Graph& g, const CohortAssignment& assignment) {
  if (assignment.cohort_of.size() != g.node_count()) {
    throw ArgumentError("assignment covers " + std::to_string(assignment.cohort_of.size()) +
                        " nodes, graph has " + std::to_string(g.node_count()));
  }
  Graph out(g.node_count());
  for (const auto& e : g.edges()) {
    if (assignment.cohort_of[e.u] == assignment.cohort_of[e.v]) out.add_edge(e.u, e.v, e.tag);
  }
  return out;
}

nlohmann::json to_json(const CohortAssignment& assignment) {
  return {{"n_cohorts", assignment.cohort_count},
          {"cohort_of", assignment.cohort_of},
          {"cut_edges_removed", assignment.cut_edges_removed}};
}

CohortAssignment assignment_from_json(const nlohmann::json& doc) {
  CohortAssignment assignment;
  try {
    assignment.cohort_count = doc.at("n_cohorts").get<std::size_t>();
    assignment.cohort_of = doc.at("cohort_of").get<std::vector<std::uint32_t>>();
    assignment.cut_edges_removed = doc.value("cut_edges_removed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("assignment JSON: ") + e.what());
  }
  if (assignment.cohort_count == 0) throw ArgumentError("assignment JSON: n_cohorts must be positive");
  assignment.cohort_sizes.assign(assignment.cohort_count, 0);
  for (auto c : assignment.cohort_of) {
    if (c >= assignment.cohort_count) throw ArgumentError("assignment JSON: cohort index out of range");
    ++assignment.cohort_sizes[c];
  }
  return assignment;
}

void write_assignment(const CohortAssignment& assignment, const std::filesystem::path& path) {
  write_text_file(path, to_json(assignment).dump() + "\n");
}

CohortAssignment read_assignment(const std::filesystem::path& path) {
  const auto doc = read_json_file(path);
  try {
    return assignment_from_json(doc);
  } catch (const ArgumentError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace cohortcut
