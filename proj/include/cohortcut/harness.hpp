#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cohortcut/cohort.hpp"
#include "cohortcut/netgen.hpp"
#include "cohortcut/qubomc.hpp"
#include "cohortcut/sir.hpp"

namespace cohortcut {

struct DiseaseSpec {
  double r0 = 6.0;
  double recovery_days = 10.0;
  double initial_infected_fraction = 0.05;
  // When set, used as r_i directly instead of deriving it from r0.
  std::optional<double> infection_rate;
};

struct ExperimentConfig {
  CenConfig network;  // network.seed is replaced by base_seed + replicate
  std::optional<SinConfig> sin;
  std::size_t n_cohorts = 4;
  SolverConfig solver;
  DiseaseSpec disease;
  std::size_t replicates = 20;
  std::uint64_t base_seed = 0;
  std::size_t max_days = kDefaultMaxDays;
};

void validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

struct ArmRecord {
  SirSummary summary;
  std::uint64_t cut_edges_removed = 0;
  std::vector<std::size_t> cohort_sizes;
  SirTrace trace;
};

struct ReplicateRecord {
  std::size_t replicate = 0;
  DiseaseParams disease;
  ArmRecord solver;
  ArmRecord random;
};

struct ColumnStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single value
};

ColumnStats column_stats(const std::vector<double>& values);

struct ComparisonAggregates {
  ColumnStats solver_total;
  ColumnStats solver_peak;
  ColumnStats random_total;
  ColumnStats random_peak;
  ColumnStats cut_edges_removed_solver;
  ColumnStats cut_edges_removed_random;
  double win_rate_total = 0.0;  // fraction of replicates with solver total < random total
  double win_rate_peak = 0.0;
  // 100 * (random mean - solver mean) / random mean
  double total_reduction_pct = 0.0;
  double peak_reduction_pct = 0.0;
};

ComparisonAggregates aggregate(const std::vector<ReplicateRecord>& records);

struct ComparisonResult {
  std::vector<ReplicateRecord> records;  // ordered by replicate index
  ComparisonAggregates aggregates;
};

/// Per-replicate seed streams. The network and the random arm use
/// base_seed + r; the solver, disease and SIN streams are derived from it.
struct ReplicateSeeds {
  std::uint64_t network;
  std::uint64_t random_partition;
  std::uint64_t solver;
  std::uint64_t disease;
  std::uint64_t sin;
};

ReplicateSeeds replicate_seeds(const ExperimentConfig& config, std::size_t replicate);

/// One paired replicate. Both arms see the same network, disease parameters
/// (derived on the unseparated network) and disease seed; with `sin` set,
/// both arms are augmented with the same SIN seed.
ReplicateRecord run_replicate(const ExperimentConfig& config, std::size_t replicate);

ComparisonResult run_cen_experiment(const ExperimentConfig& config);
ComparisonResult run_sin_experiment(const ExperimentConfig& config);

struct SweepAxis {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t steps = 1;

  // Evenly spaced from lower to upper; a single step gives {lower}.
  std::vector<double> values() const;
};

struct SweepSpec {
  SweepAxis initial_infected_fraction{0.05, 0.5, 2};
  SweepAxis infection_rate{0.01, 0.1, 2};
  SweepAxis p_floor{0.1, 0.6, 2};
  SweepAxis p_dorm{0.001, 0.016, 2};
  SweepAxis p_campus{0.00005, 0.0005, 2};
};

/// Axes must lie inside the published SIN parameter ranges.
void validate(const SweepSpec& spec);

nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const nlohmann::json& doc);

struct SweepPoint {
  double initial_infected_fraction = 0.0;
  double infection_rate = 0.0;
  double p_floor = 0.0;
  double p_dorm = 0.0;
  double p_campus = 0.0;
};

struct SweepPointResult {
  std::size_t index = 0;
  SweepPoint point;
  ComparisonResult result;
};

struct SweepResult {
  std::vector<SweepPointResult> points;
  double setting_win_rate_total = 0.0;  // share of points with mean solver total < random
  double setting_win_rate_peak = 0.0;
  double replicate_win_rate_total = 0.0;
  double replicate_win_rate_peak = 0.0;
  double mean_total_reduction_pct = 0.0;  // mean over points
  double mean_peak_reduction_pct = 0.0;
};

/// Full-factorial grid (p_campus varies fastest). Each point runs
/// run_sin_experiment with the point's values; infection_rate bypasses the
/// R0 relation. `on_point` sees each point as soon as it completes.
SweepResult run_sweep(const SweepSpec& spec, const ExperimentConfig& config,
                      const std::function<void(const SweepPointResult&)>& on_point = {});

nlohmann::json summary_json(const ComparisonResult& result, std::string_view experiment);
nlohmann::json sweep_point_json(const SweepPointResult& point);
nlohmann::json sweep_summary_json(const SweepResult& result);

/// Writes config.json, summary.json and traces/replicate_<r>_<arm>.csv.
void emit_outputs(const ComparisonResult& result, const ExperimentConfig& config,
                  std::string_view experiment, const std::filesystem::path& out_dir);

/// Writes config.json (with the sweep spec) and summary.json.
void emit_sweep_outputs(const SweepResult& result, const SweepSpec& spec,
                        const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace cohortcut
