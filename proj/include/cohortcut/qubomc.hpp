#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cohortcut/graph.hpp"

namespace cohortcut {

using Labels = std::vector<std::uint8_t>;  // 0 / 1 side of the cut per node
using Spins = std::vector<int>;            // +1 / -1 per node

/// Number of edges whose endpoints carry different labels.
std::uint64_t cut_value(const Graph& g, std::span<const std::uint8_t> labels);

struct CutAssignment {
  Labels labels;
  std::uint64_t cut_value = 0;
};

/// constant_offset + sum over couplings J_ij * s_i * s_j. Keys satisfy i < j.
struct IsingModel {
  std::size_t spin_count = 0;
  std::map<std::pair<NodeId, NodeId>, double> couplings;
  double constant_offset = 0.0;
};

/// Each edge contributes coupling -1/2 and offset +1/2, so the energy of the
/// spin vector s_i = 1 - 2 x_i equals cut_value(g, x).
IsingModel to_ising(const Graph& g);

double ising_energy(const IsingModel& model, std::span<const int> spins);

Spins labels_to_spins(std::span<const std::uint8_t> labels);

enum class SolverKind { kExact, kSimulatedAnnealing, kGreedyLocalSearch };

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver_kind(std::string_view text);

inline constexpr std::size_t kExactNodeLimit = 26;

struct SolverConfig {
  SolverKind kind = SolverKind::kSimulatedAnnealing;
  std::uint64_t seed = 0;
  // One sweep is node_count single-flip proposals; temperature is multiplied
  // by the cooling factor after each sweep.
  std::size_t sa_sweeps = 100;
  std::size_t sa_restarts = 8;
  // Unset means "max node degree of the instance".
  std::optional<double> sa_initial_temperature;
  double sa_cooling_factor = 0.95;
};

void validate(const SolverConfig& config);

/// Max-Cut backends.
///
/// - exact: Gray-code enumeration with node 0 pinned to side 0; the first
///   labeling reaching the maximum wins. Limited to kExactNodeLimit nodes.
/// - simulated_annealing: Metropolis single-flip sweeps with geometric
///   cooling from `sa_restarts` random starts; returns the best labeling seen,
///   earliest restart winning ties.
/// - greedy_local_search: random start, then improving single flips until
///   none remain.
///
/// An edgeless graph always yields the index-order even split
/// (first ceil(n/2) nodes on side 0).
CutAssignment solve_maxcut(const Graph& g, const SolverConfig& config);

/// Change in cut value if node u switches sides.
std::int64_t flip_gain(const Graph& g, std::span<const std::uint8_t> labels, NodeId u);

// QUBO with minimization convention; key (i, j) with i <= j, i == j linear.
struct Qubo {
  std::size_t variable_count = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> coefficients;
};

/// QUBO whose minimizers maximize the cut: -deg(i) on x_i, +2 on x_i x_j per edge.
Qubo maxcut_qubo(const Graph& g);
std::int64_t qubo_energy(const Qubo& qubo, std::span<const std::uint8_t> bits);

/// "# qubo n=<count>" header, then "i j c" lines.
std::string format_qubo(const Qubo& qubo);
Qubo parse_qubo(std::string_view text);

void export_qubo(const Graph& g, const std::filesystem::path& path);
Qubo read_qubo(const std::filesystem::path& path);

nlohmann::json to_json(const SolverConfig& config);
SolverConfig solver_config_from_json(const nlohmann::json& doc);

}  // namespace cohortcut
