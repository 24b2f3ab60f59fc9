#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohortcut/graph.hpp"

namespace cohortcut {

struct DiseaseParams {
  double r0 = 0.0;
  double recovery_days = 0.0;
  double recovery_rate = 0.0;   // per day, 1 / recovery_days
  double infection_rate = 0.0;  // per contact per day
  double initial_infected_fraction = 0.0;
  double reference_avg_degree = 0.0;  // 0 when infection_rate was given directly
  bool infection_rate_clamped = false;
};

/// r_r = 1 / T_r and r_i = R0 * r_r / avg_degree, clamped to 1.
DiseaseParams derive_params_from_degree(double r0, double recovery_days,
                                        double initial_infected_fraction, double avg_degree);
DiseaseParams derive_params(double r0, double recovery_days, double initial_infected_fraction,
                            const Graph& reference_graph);

/// Uses infection_rate as given instead of deriving it from R0; r0 and
/// reference_avg_degree stay 0.
DiseaseParams direct_params(double infection_rate, double recovery_days,
                            double initial_infected_fraction);

struct DayCounts {
  std::size_t susceptible = 0;
  std::size_t infected = 0;
  std::size_t recovered = 0;

  friend bool operator==(const DayCounts&, const DayCounts&) = default;
};

struct SirTrace {
  std::size_t node_count = 0;
  std::uint64_t seed = 0;
  std::vector<DayCounts> days;  // days[0] is the seeded state

  friend bool operator==(const SirTrace&, const SirTrace&) = default;
};

struct SirSummary {
  double total_infected_pct = 0.0;  // fraction ever infected, 1 - S_final / n
  double peak_infected_pct = 0.0;   // max_t I_t / n
  std::size_t duration_days = 0;    // index of the last recorded day
};

inline constexpr std::size_t kDefaultMaxDays = 365;

/// round-half-up(n * fraction); throws SeedingError when that is 0.
std::size_t initial_infected_count(std::size_t node_count, double fraction);

/// Synchronous discrete-time SIR.
///
/// Day 0 infects initial_infected_count nodes drawn without replacement.
/// On each later day, a susceptible node with k neighbors infected on the
/// previous day is infected with probability 1 - (1 - r_i)^k, then every node
/// infected on the previous day recovers with probability r_r. Draws happen
/// in node order: infections first, then recoveries. Stops when nobody is
/// infected or after max_days.
SirTrace simulate(const Graph& g, const DiseaseParams& params, std::uint64_t seed,
                  std::size_t max_days = kDefaultMaxDays);

/// Same dynamics starting from a given infected set (initial fraction ignored).
SirTrace simulate_from(const Graph& g, const DiseaseParams& params,
                       std::span<const NodeId> initially_infected, std::uint64_t seed,
                       std::size_t max_days = kDefaultMaxDays);

SirSummary summarize(const SirTrace& trace);

// day,S,I,R,s_frac,i_frac,r_frac
std::string trace_to_csv(const SirTrace& trace);
void write_trace_csv(const SirTrace& trace, const std::filesystem::path& path);

nlohmann::json to_json(const DiseaseParams& params);
nlohmann::json to_json(const SirSummary& summary);

}  // namespace cohortcut
