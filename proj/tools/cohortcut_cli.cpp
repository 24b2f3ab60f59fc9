// Command-line front end: network generation, partitioning, QUBO export,
// single simulations, and the paired solver-vs-random experiments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cohortcut/errors.hpp"
#include "cohortcut/harness.hpp"

using namespace cohortcut;

namespace {

constexpr const char* kOutDirEnv = "COHORTCUT_OUT_DIR";

std::filesystem::path default_out_dir(const std::string& name) {
  const char* env = std::getenv(kOutDirEnv);
  return std::filesystem::path(env && *env ? env : "cohortcut_out") / name;
}

void emit_json(const nlohmann::json& doc, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_text_file(out, doc.dump(2) + "\n");
  }
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
};

void add_experiment_options(CLI::App* cmd, ExperimentArgs& args) {
  cmd->add_option("-c,--config", args.config, "experiment config JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", args.out,
                  std::string("output directory (default $") + kOutDirEnv + "/<command>)");
  cmd->add_option("--seed", args.seed, "override base_seed");
  cmd->add_option("--replicates", args.replicates, "override replicate count");
}

nlohmann::json load_config_doc(const ExperimentArgs& args) {
  auto doc = read_json_file(args.config);
  if (args.seed) doc["base_seed"] = *args.seed;
  if (args.replicates) doc["replicates"] = *args.replicates;
  return doc;
}

void print_comparison(const ComparisonResult& result, const std::filesystem::path& out) {
  const auto& a = result.aggregates;
  std::cout << "replicates:       " << result.records.size() << "\n"
            << "solver total:     " << a.solver_total.mean << " (sd " << a.solver_total.stddev << ")\n"
            << "random total:     " << a.random_total.mean << " (sd " << a.random_total.stddev << ")\n"
            << "solver peak:      " << a.solver_peak.mean << " (sd " << a.solver_peak.stddev << ")\n"
            << "random peak:      " << a.random_peak.mean << " (sd " << a.random_peak.stddev << ")\n"
            << "total reduction:  " << a.total_reduction_pct << "%\n"
            << "peak reduction:   " << a.peak_reduction_pct << "%\n"
            << "win rate (total): " << a.win_rate_total << "\n"
            << "win rate (peak):  " << a.win_rate_peak << "\n"
            << "outputs:          " << out.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohort partitioning by recursive Max-Cut and SIR comparison against random cohorts"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "generate a CEN, or augment a separated graph into a SIN");
  std::string gen_kind = "cen", gen_out, gen_graph, gen_assignment;
  std::size_t gen_nodes = 3800, gen_k = 0;
  double gen_p = -1.0, gen_density = 0.040, gen_clustering = 0.465;
  std::uint64_t gen_seed = 0;
  SinConfig gen_sin;
  generate->add_option("--kind", gen_kind, "cen or sin")->check(CLI::IsMember({"cen", "sin"}));
  generate->add_option("-n,--nodes", gen_nodes, "CEN node count");
  generate->add_option("-k,--ring-degree", gen_k, "ring lattice degree (even); calibrated from --density when omitted");
  generate->add_option("-p,--rewire", gen_p, "rewiring probability; calibrated from --clustering when omitted");
  generate->add_option("--density", gen_density, "target density for calibration");
  generate->add_option("--clustering", gen_clustering, "target clustering for calibration");
  generate->add_option("--graph", gen_graph, "separated input graph (sin)");
  generate->add_option("--assignment", gen_assignment, "cohort assignment (sin)");
  generate->add_option("--dorms", gen_sin.dorm_count, "dorm count (sin)");
  generate->add_option("--floors", gen_sin.floors_per_dorm, "floors per dorm (sin)");
  generate->add_option("--p-floor", gen_sin.p_floor, "same-cohort edge probability (sin)");
  generate->add_option("--p-dorm", gen_sin.p_dorm, "same-dorm edge probability (sin)");
  generate->add_option("--p-campus", gen_sin.p_campus, "cross-dorm edge probability (sin)");
  generate->add_option("--seed", gen_seed, "random seed");
  generate->add_option("-o,--out", gen_out, "output graph JSON")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "density, clustering, mean geodesic distance, average degree");
  std::string stats_graph, stats_out;
  stats->add_option("--graph", stats_graph, "graph JSON")->required()->check(CLI::ExistingFile);
  stats->add_option("-o,--out", stats_out, "output JSON (stdout by default)");

  // partition
  auto* partition = app.add_subcommand("partition", "assign nodes to cohorts");
  std::string part_graph, part_out, part_method = "maxcut", part_solver = "simulated_annealing",
                                    part_separated;
  std::size_t part_cohorts = 4;
  SolverConfig part_config;
  partition->add_option("--graph", part_graph, "graph JSON")->required()->check(CLI::ExistingFile);
  partition->add_option("-N,--cohorts", part_cohorts, "cohort count (power of two for maxcut)");
  partition->add_option("--method", part_method, "maxcut or random")->check(CLI::IsMember({"maxcut", "random"}));
  partition->add_option("--solver", part_solver, "exact, simulated_annealing or greedy_local_search");
  partition->add_option("--seed", part_config.seed, "random seed");
  partition->add_option("--sweeps", part_config.sa_sweeps, "annealing sweeps per restart");
  partition->add_option("--restarts", part_config.sa_restarts, "annealing restarts");
  partition->add_option("--cooling", part_config.sa_cooling_factor, "geometric cooling factor");
  partition->add_option("-o,--out", part_out, "output assignment JSON")->required();
  partition->add_option("--separated", part_separated, "also write the graph without inter-cohort edges");

  // export-qubo
  auto* qubo = app.add_subcommand("export-qubo", "write the Max-Cut QUBO for an external annealer");
  std::string qubo_graph, qubo_out;
  qubo->add_option("--graph", qubo_graph, "graph JSON")->required()->check(CLI::ExistingFile);
  qubo->add_option("-o,--out", qubo_out, "output QUBO file")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one SIR simulation and write its trace CSV");
  std::string sim_graph, sim_reference, sim_out;
  double sim_r0 = 6.0, sim_recovery = 10.0, sim_initial = 0.05;
  std::optional<double> sim_rate;
  std::uint64_t sim_seed = 0;
  std::size_t sim_max_days = kDefaultMaxDays;
  sim->add_option("--graph", sim_graph, "contact graph JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--reference-graph", sim_reference, "graph whose average degree sets r_i (default: --graph)");
  sim->add_option("--r0", sim_r0, "basic reproduction number");
  sim->add_option("--recovery-days", sim_recovery, "mean recovery time in days");
  sim->add_option("--initial", sim_initial, "initially infected fraction");
  sim->add_option("--infection-rate", sim_rate, "per-contact daily infection probability (skips the R0 derivation)");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--max-days", sim_max_days, "day limit");
  sim->add_option("-o,--out", sim_out, "trace CSV")->required();

  ExperimentArgs cen_args, sin_args, sweep_args;
  auto* compare_cen = app.add_subcommand("compare-cen", "paired max-cut vs random cohorts on CENs");
  add_experiment_options(compare_cen, cen_args);
  auto* compare_sin = app.add_subcommand("compare-sin", "paired max-cut vs random cohorts on SINs");
  add_experiment_options(compare_sin, sin_args);
  auto* sweep = app.add_subcommand("sweep", "full-factorial SIN parameter sweep");
  add_experiment_options(sweep, sweep_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      if (gen_kind == "cen") {
        CenConfig config = calibrate_cen(gen_nodes, gen_density, gen_clustering, gen_seed);
        if (gen_k > 0) config.ring_degree_k = gen_k;
        if (gen_p >= 0.0) config.rewire_probability = gen_p;
        write_graph(generate_cen(config), gen_out);
        std::cerr << "k=" << config.ring_degree_k << " p=" << config.rewire_probability << "\n";
      } else {
        if (gen_graph.empty() || gen_assignment.empty()) {
          throw ConfigError("--kind sin needs --graph and --assignment");
        }
        gen_sin.seed = gen_seed;
        write_graph(augment_sin(read_graph(gen_graph), read_assignment(gen_assignment), gen_sin), gen_out);
      }
    } else if (*stats) {
      emit_json(to_json(network_stats(read_graph(stats_graph))), stats_out);
    } else if (*partition) {
      const Graph g = read_graph(part_graph);
      CohortAssignment assignment;
      if (part_method == "random") {
        assignment = partition_random(g, part_cohorts, part_config.seed);
      } else {
        auto kind = parse_solver_kind(part_solver);
        if (!kind) throw ConfigError("unknown solver " + part_solver);
        part_config.kind = *kind;
        assignment = partition_recursive_maxcut(g, part_cohorts, part_config);
      }
      write_assignment(assignment, part_out);
      if (!part_separated.empty()) write_graph(apply_cohort_separation(g, assignment), part_separated);
      std::cerr << "cut_edges_removed=" << assignment.cut_edges_removed << "\n";
    } else if (*qubo) {
      export_qubo(read_graph(qubo_graph), qubo_out);
    } else if (*sim) {
      const Graph g = read_graph(sim_graph);
      const DiseaseParams params =
          sim_rate ? direct_params(*sim_rate, sim_recovery, sim_initial)
                   : derive_params(sim_r0, sim_recovery, sim_initial,
                                   sim_reference.empty() ? g : read_graph(sim_reference));
      const auto trace = simulate(g, params, sim_seed, sim_max_days);
      write_trace_csv(trace, sim_out);
      nlohmann::json doc = {{"disease", to_json(params)}, {"summary", to_json(summarize(trace))}};
      std::cout << doc.dump(2) << "\n";
    } else if (*compare_cen || *compare_sin) {
      const bool is_cen = static_cast<bool>(*compare_cen);
      const auto& args = is_cen ? cen_args : sin_args;
      const auto config = experiment_config_from_json(load_config_doc(args));
      const auto result = is_cen ? run_cen_experiment(config) : run_sin_experiment(config);
      const std::filesystem::path out =
          args.out.empty() ? default_out_dir(is_cen ? "compare-cen" : "compare-sin") : std::filesystem::path(args.out);
      emit_outputs(result, config, is_cen ? "cen" : "sin", out);
      print_comparison(result, out);
    } else if (*sweep) {
      const auto doc = load_config_doc(sweep_args);
      const auto config = experiment_config_from_json(doc);
      const SweepSpec spec =
          doc.contains("sweep") ? sweep_spec_from_json(doc.at("sweep")) : SweepSpec{};
      const std::filesystem::path out = sweep_args.out.empty() ? default_out_dir("sweep") : std::filesystem::path(sweep_args.out);
      std::filesystem::create_directories(out);
      std::ofstream partial(out / "points.jsonl", std::ios::trunc);
      if (!partial) throw IoError("cannot write " + (out / "points.jsonl").string());
      const auto result = run_sweep(spec, config, [&](const SweepPointResult& p) {
        partial << sweep_point_json(p).dump() << "\n" << std::flush;
        std::cerr << "point " << p.index << ": total reduction " << p.result.aggregates.total_reduction_pct
                  << "%\n";
      });
      emit_sweep_outputs(result, spec, config, out);
      std::cout << "points:                   " << result.points.size() << "\n"
                << "setting win rate (total): " << result.setting_win_rate_total << "\n"
                << "replicate win rate:       " << result.replicate_win_rate_total << "\n"
                << "mean total reduction:     " << result.mean_total_reduction_pct << "%\n"
                << "mean peak reduction:      " << result.mean_peak_reduction_pct << "%\n"
                << "outputs:                  " << out.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
