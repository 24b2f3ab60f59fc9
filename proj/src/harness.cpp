#include "cohortcut/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "cohortcut/errors.hpp"
#include "cohortcut/rng.hpp"

namespace cohortcut {

namespace {

constexpr std::uint64_t kSolverStream = 1;
constexpr std::uint64_t kDiseaseStream = 2;
constexpr std::uint64_t kSinStream = 3;

// Runs fn(0..count-1) on a bounded pool; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

nlohmann::json stats_json(const ColumnStats& s) { return {{"mean", s.mean}, {"stddev", s.stddev}}; }

}  // namespace

void validate(const ExperimentConfig& config) {
  validate(config.network);
  validate(config.solver);
  if (config.replicates == 0) throw ConfigError("replicates must be at least 1");
  if (config.max_days == 0) throw ConfigError("max_days must be at least 1");
  if (!is_power_of_two(config.n_cohorts)) {
    throw ConfigError("n_cohorts must be a power of two, got " + std::to_string(config.n_cohorts));
  }
  if (config.sin) {
    validate(*config.sin);
    if (config.sin->dorm_count * config.sin->floors_per_dorm != config.n_cohorts) {
      throw ConfigError("n_cohorts must equal dorm_count * floors_per_dorm");
    }
  }
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json disease = {{"r0", config.disease.r0},
                            {"recovery_days", config.disease.recovery_days},
                            {"initial_infected_fraction", config.disease.initial_infected_fraction}};
  if (config.disease.infection_rate) disease["infection_rate"] = *config.disease.infection_rate;
  nlohmann::json doc = {{"network", to_json(config.network)},
                        {"n_cohorts", config.n_cohorts},
                        {"solver", to_json(config.solver)},
                        {"disease", disease},
                        {"replicates", config.replicates},
                        {"base_seed", config.base_seed},
                        {"max_days", config.max_days}};
  if (config.sin) doc["sin"] = to_json(*config.sin);
  return doc;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
  ExperimentConfig config;
  try {
    config.network = cen_config_from_json(doc.at("network"));
    if (doc.contains("sin") && !doc.at("sin").is_null()) {
      config.sin = sin_config_from_json(doc.at("sin"));
    }
    config.n_cohorts = doc.value("n_cohorts", config.n_cohorts);
    if (doc.contains("solver")) config.solver = solver_config_from_json(doc.at("solver"));
    if (doc.contains("disease")) {
      const auto& d = doc.at("disease");
      config.disease.r0 = d.value("r0", config.disease.r0);
      config.disease.recovery_days = d.value("recovery_days", config.disease.recovery_days);
      config.disease.initial_infected_fraction =
          d.value("initial_infected_fraction", config.disease.initial_infected_fraction);
      if (d.contains("infection_rate") && !d.at("infection_rate").is_null()) {
        config.disease.infection_rate = d.at("infection_rate").get<double>();
      }
    }
    config.replicates = doc.value("replicates", config.replicates);
    config.base_seed = doc.value("base_seed", config.base_seed);
    config.max_days = doc.value("max_days", config.max_days);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  validate(config);
  return config;
}

ColumnStats column_stats(const std::vector<double>& values) {
  ColumnStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

double reduction_pct(double random_mean, double solver_mean) {
  return random_mean > 0.0 ? 100.0 * (random_mean - solver_mean) / random_mean : 0.0;
}

}  // namespace

ComparisonAggregates aggregate(const std::vector<ReplicateRecord>& records) {
  std::vector<double> st, sp, rt, rp, cs, cr;
  std::size_t wins_total = 0, wins_peak = 0;
  for (const auto& r : records) {
    st.push_back(r.solver.summary.total_infected_pct);
    sp.push_back(r.solver.summary.peak_infected_pct);
    rt.push_back(r.random.summary.total_infected_pct);
    rp.push_back(r.random.summary.peak_infected_pct);
    cs.push_back(static_cast<double>(r.solver.cut_edges_removed));
    cr.push_back(static_cast<double>(r.random.cut_edges_removed));
    if (r.solver.summary.total_infected_pct < r.random.summary.total_infected_pct) ++wins_total;
    if (r.solver.summary.peak_infected_pct < r.random.summary.peak_infected_pct) ++wins_peak;
  }
  ComparisonAggregates a;
  a.solver_total = column_stats(st);
  a.solver_peak = column_stats(sp);
  a.random_total = column_stats(rt);
  a.random_peak = column_stats(rp);
  a.cut_edges_removed_solver = column_stats(cs);
  a.cut_edges_removed_random = column_stats(cr);
  if (!records.empty()) {
    a.win_rate_total = static_cast<double>(wins_total) / static_cast<double>(records.size());
    a.win_rate_peak = static_cast<double>(wins_peak) / static_cast<double>(records.size());
  }
  a.total_reduction_pct = reduction_pct(a.random_total.mean, a.solver_total.mean);
  a.peak_reduction_pct = reduction_pct(a.random_peak.mean, a.solver_peak.mean);
  return a;
}

ReplicateSeeds replicate_seeds(const ExperimentConfig& config, std::size_t replicate) {
  const std::uint64_t base = config.base_seed + replicate;
  return {base, base, derive_seed(config.solver.seed ^ base, kSolverStream),
          derive_seed(base, kDiseaseStream),
          derive_seed((config.sin ? config.sin->seed : 0) ^ base, kSinStream)};
}

ReplicateRecord run_replicate(const ExperimentConfig& config, std::size_t replicate) {
  const auto seeds = replicate_seeds(config, replicate);
  CenConfig network = config.network;
  network.seed = seeds.network;
  const Graph cen = generate_cen(network);

  ReplicateRecord record;
  record.replicate = replicate;
  const auto& d = config.disease;
  record.disease = d.infection_rate
                       ? direct_params(*d.infection_rate, d.recovery_days, d.initial_infected_fraction)
                       : derive_params(d.r0, d.recovery_days, d.initial_infected_fraction, cen);

  SolverConfig solver = config.solver;
  solver.seed = seeds.solver;
  const auto by_solver = partition_recursive_maxcut(cen, config.n_cohorts, solver);
  const auto by_random = partition_random(cen, config.n_cohorts, seeds.random_partition);

  auto run_arm = [&](const CohortAssignment& assignment) {
    Graph contact = apply_cohort_separation(cen, assignment);
    if (config.sin) {
      SinConfig sin = *config.sin;
      sin.seed = seeds.sin;
      contact = augment_sin(contact, assignment, sin);
    }
    ArmRecord arm;
    arm.cut_edges_removed = assignment.cut_edges_removed;
    arm.cohort_sizes = assignment.cohort_sizes;
    arm.trace = simulate(contact, record.disease, seeds.disease, config.max_days);
    arm.summary = summarize(arm.trace);
    return arm;
  };
  record.solver = run_arm(by_solver);
  record.random = run_arm(by_random);
  return record;
}

namespace {

ComparisonResult run_comparison(const ExperimentConfig& config) {
  validate(config);
  ComparisonResult result;
  result.records.resize(config.replicates);
  parallel_for(config.replicates,
               [&](std::size_t r) { result.records[r] = run_replicate(config, r); });
  result.aggregates = aggregate(result.records);
  return result;
}

}  // namespace

ComparisonResult run_cen_experiment(const ExperimentConfig& config) {
  if (config.sin) throw ConfigError("CEN experiment takes no SIN section");
  return run_comparison(config);
}

ComparisonResult run_sin_experiment(const ExperimentConfig& config) {
  if (!config.sin) throw ConfigError("SIN experiment needs a SIN section");
  return run_comparison(config);
}

std::vector<double> SweepAxis::values() const {
  if (steps <= 1) return {lower};
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out[i] = lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  out.back() = upper;
  return out;
}

void validate(const SweepSpec& spec) {
  struct Range {
    const char* name;
    const SweepAxis& axis;
    double lo, hi;
  };
  const Range ranges[] = {
      {"initial_infected_fraction", spec.initial_infected_fraction, 0.05, 0.5},
      {"infection_rate", spec.infection_rate, 0.01, 0.1},
      {"p_floor", spec.p_floor, 0.1, 0.6},
      {"p_dorm", spec.p_dorm, 0.001, 0.016},
      {"p_campus", spec.p_campus, 0.00005, 0.0005},
  };
  for (const auto& r : ranges) {
    if (r.axis.steps == 0) throw ConfigError(std::string("sweep ") + r.name + ": steps must be >= 1");
    const double eps = 1e-12;
    if (r.axis.lower > r.axis.upper || r.axis.lower < r.lo - eps || r.axis.upper > r.hi + eps) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "sweep %s: bounds must satisfy %g <= lower <= upper <= %g",
                    r.name, r.lo, r.hi);
      throw ConfigError(buf);
    }
  }
}

namespace {

nlohmann::json axis_json(const SweepAxis& a) {
  return {{"lower", a.lower}, {"upper", a.upper}, {"steps", a.steps}};
}

SweepAxis axis_from_json(const nlohmann::json& doc, const char* key, SweepAxis fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& a = doc.at(key);
  SweepAxis axis;
  axis.lower = a.at("lower").get<double>();
  axis.upper = a.value("upper", axis.lower);
  axis.steps = a.value("steps", std::size_t{1});
  return axis;
}

nlohmann::json point_json(const SweepPoint& p) {
  return {{"initial_infected_fraction", p.initial_infected_fraction},
          {"infection_rate", p.infection_rate},
          {"p_floor", p.p_floor},
          {"p_dorm", p.p_dorm},
          {"p_campus", p.p_campus}};
}

nlohmann::json aggregates_json(const ComparisonAggregates& a) {
  return {{"solver_total", stats_json(a.solver_total)},
          {"solver_peak", stats_json(a.solver_peak)},
          {"random_total", stats_json(a.random_total)},
          {"random_peak", stats_json(a.random_peak)},
          {"cut_edges_removed_solver", stats_json(a.cut_edges_removed_solver)},
          {"cut_edges_removed_random", stats_json(a.cut_edges_removed_random)},
          {"win_rate_total", a.win_rate_total},
          {"win_rate_peak", a.win_rate_peak},
          {"total_reduction_pct", a.total_reduction_pct},
          {"peak_reduction_pct", a.peak_reduction_pct}};
}

nlohmann::json arm_json(const ArmRecord& arm) {
  return {{"total_infected_pct", arm.summary.total_infected_pct},
          {"peak_infected_pct", arm.summary.peak_infected_pct},
          {"duration_days", arm.summary.duration_days},
          {"cut_edges_removed", arm.cut_edges_removed},
          {"cohort_sizes", arm.cohort_sizes}};
}

}  // namespace

nlohmann::json to_json(const SweepSpec& spec) {
  return {{"initial_infected_fraction", axis_json(spec.initial_infected_fraction)},
          {"infection_rate", axis_json(spec.infection_rate)},
          {"p_floor", axis_json(spec.p_floor)},
          {"p_dorm", axis_json(spec.p_dorm)},
          {"p_campus", axis_json(spec.p_campus)}};
}

SweepSpec sweep_spec_from_json(const nlohmann::json& doc) {
  SweepSpec spec;
  try {
    spec.initial_infected_fraction =
        axis_from_json(doc, "initial_infected_fraction", spec.initial_infected_fraction);
    spec.infection_rate = axis_from_json(doc, "infection_rate", spec.infection_rate);
    spec.p_floor = axis_from_json(doc, "p_floor", spec.p_floor);
    spec.p_dorm = axis_from_json(doc, "p_dorm", spec.p_dorm);
    spec.p_campus = axis_from_json(doc, "p_campus", spec.p_campus);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sweep spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

SweepResult run_sweep(const SweepSpec& spec, const ExperimentConfig& config,
                      const std::function<void(const SweepPointResult&)>& on_point) {
  validate(spec);
  if (!config.sin) throw ConfigError("sweep needs a SIN section");
  SweepResult sweep;
  std::size_t index = 0;
  for (double f : spec.initial_infected_fraction.values()) {
    for (double ri : spec.infection_rate.values()) {
      for (double pf : spec.p_floor.values()) {
        for (double pd : spec.p_dorm.values()) {
          for (double pc : spec.p_campus.values()) {
            ExperimentConfig point_config = config;
            point_config.disease.initial_infected_fraction = f;
            point_config.disease.infection_rate = ri;
            point_config.sin->p_floor = pf;
            point_config.sin->p_dorm = pd;
            point_config.sin->p_campus = pc;
            SweepPointResult point;
            point.index = index++;
            point.point = {f, ri, pf, pd, pc};
            point.result = run_sin_experiment(point_config);
            if (on_point) on_point(point);
            sweep.points.push_back(std::move(point));
          }
        }
      }
    }
  }
  std::size_t setting_wins_total = 0, setting_wins_peak = 0, replicate_count = 0;
  double replicate_wins_total = 0.0, replicate_wins_peak = 0.0;
  double total_reduction = 0.0, peak_reduction = 0.0;
  for (const auto& p : sweep.points) {
    const auto& a = p.result.aggregates;
    if (a.solver_total.mean < a.random_total.mean) ++setting_wins_total;
    if (a.solver_peak.mean < a.random_peak.mean) ++setting_wins_peak;
    const auto reps = static_cast<double>(p.result.records.size());
    replicate_wins_total += a.win_rate_total * reps;
    replicate_wins_peak += a.win_rate_peak * reps;
    replicate_count += p.result.records.size();
    total_reduction += a.total_reduction_pct;
    peak_reduction += a.peak_reduction_pct;
  }
  const auto points = static_cast<double>(sweep.points.size());
  if (!sweep.points.empty()) {
    sweep.setting_win_rate_total = static_cast<double>(setting_wins_total) / points;
    sweep.setting_win_rate_peak = static_cast<double>(setting_wins_peak) / points;
    sweep.mean_total_reduction_pct = total_reduction / points;
    sweep.mean_peak_reduction_pct = peak_reduction / points;
  }
  if (replicate_count > 0) {
    sweep.replicate_win_rate_total = replicate_wins_total / static_cast<double>(replicate_count);
    sweep.replicate_win_rate_peak = replicate_wins_peak / static_cast<double>(replicate_count);
  }
  return sweep;
}

nlohmann::json summary_json(const ComparisonResult& result, std::string_view experiment) {
  nlohmann::json replicates = nlohmann::json::array();
  for (const auto& r : result.records) {
    replicates.push_back({{"replicate", r.replicate},
                          {"disease", to_json(r.disease)},
                          {"solver", arm_json(r.solver)},
                          {"random", arm_json(r.random)}});
  }
  return {{"experiment", std::string(experiment)},
          {"aggregates", aggregates_json(result.aggregates)},
          {"replicates", std::move(replicates)}};
}

nlohmann::json sweep_point_json(const SweepPointResult& point) {
  return {{"index", point.index},
          {"point", point_json(point.point)},
          {"replicates", point.result.records.size()},
          {"aggregates", aggregates_json(point.result.aggregates)}};
}

nlohmann::json sweep_summary_json(const SweepResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : result.points) points.push_back(sweep_point_json(p));
  return {{"experiment", "sweep"},
          {"point_count", result.points.size()},
          {"setting_win_rate_total", result.setting_win_rate_total},
          {"setting_win_rate_peak", result.setting_win_rate_peak},
          {"replicate_win_rate_total", result.replicate_win_rate_total},
          {"replicate_win_rate_peak", result.replicate_win_rate_peak},
          {"mean_total_reduction_pct", result.mean_total_reduction_pct},
          {"mean_peak_reduction_pct", result.mean_peak_reduction_pct},
          {"points", std::move(points)}};
}

void emit_outputs(const ComparisonResult& result, const ExperimentConfig& config,
                  std::string_view experiment, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "traces", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "traces").string() + ": " + ec.message());
  write_text_file(out_dir / "config.json", to_json(config).dump(2) + "\n");
  write_text_file(out_dir / "summary.json", summary_json(result, experiment).dump(2) + "\n");
  char name[64];
  for (const auto& r : result.records) {
    std::snprintf(name, sizeof name, "replicate_%03zu_solver.csv", r.replicate);
    write_trace_csv(r.solver.trace, out_dir / "traces" / name);
    std::snprintf(name, sizeof name, "replicate_%03zu_random.csv", r.replicate);
    write_trace_csv(r.random.trace, out_dir / "traces" / name);
  }
}

void emit_sweep_outputs(const SweepResult& result, const SweepSpec& spec,
                        const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  auto doc = to_json(config);
  doc["sweep"] = to_json(spec);
  write_text_file(out_dir / "config.json", doc.dump(2) + "\n");
  write_text_file(out_dir / "summary.json", sweep_summary_json(result).dump(2) + "\n");
}

}  // namespace cohortcut
