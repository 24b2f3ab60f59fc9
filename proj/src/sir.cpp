#include "cohortcut/sir.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cohortcut/errors.hpp"
#include "cohortcut/rng.hpp"

namespace cohortcut {

namespace {

void check_common(double recovery_days, double initial_infected_fraction) {
  if (!(recovery_days >= 1.0)) throw ArgumentError("recovery_days must be >= 1");
  if (!(initial_infected_fraction > 0.0 && initial_infected_fraction < 1.0)) {
    throw ArgumentError("initial_infected_fraction must lie in (0, 1)");
  }
}

}  // namespace

DiseaseParams derive_params_from_degree(double r0, double recovery_days,
                                        double initial_infected_fraction, double avg_degree) {
  if (!(r0 > 0.0)) throw ArgumentError("r0 must be positive");
  check_common(recovery_days, initial_infected_fraction);
  if (!(avg_degree > 0.0)) {
    throw DerivationError("reference graph has average degree 0; infection rate is undefined");
  }
  DiseaseParams params;
  params.r0 = r0;
  params.recovery_days = recovery_days;
  params.recovery_rate = 1.0 / recovery_days;
  params.initial_infected_fraction = initial_infected_fraction;
  params.reference_avg_degree = avg_degree;
  params.infection_rate = r0 * params.recovery_rate / avg_degree;
  if (params.infection_rate > 1.0) {
    params.infection_rate = 1.0;
    params.infection_rate_clamped = true;
  }
  return params;
}

DiseaseParams derive_params(double r0, double recovery_days, double initial_infected_fraction,
                            const Graph& reference_graph) {
  const double avg_degree =
      reference_graph.node_count() == 0
          ? 0.0
          : 2.0 * static_cast<double>(reference_graph.edge_count()) /
                static_cast<double>(reference_graph.node_count());
  return derive_params_from_degree(r0, recovery_days, initial_infected_fraction, avg_degree);
}

DiseaseParams direct_params(double infection_rate, double recovery_days,
                            double initial_infected_fraction) {
  check_common(recovery_days, initial_infected_fraction);
  if (!(infection_rate >= 0.0 && infection_rate <= 1.0)) {
    throw ArgumentError("infection_rate must lie in [0, 1]");
  }
  DiseaseParams params;
  params.recovery_days = recovery_days;
  params.recovery_rate = 1.0 / recovery_days;
  params.infection_rate = infection_rate;
  params.initial_infected_fraction = initial_infected_fraction;
  return params;
}

std::size_t initial_infected_count(std::size_t node_count, double fraction) {
  const auto count =
      static_cast<std::size_t>(std::floor(static_cast<double>(node_count) * fraction + 0.5));
  if (count == 0) {
    throw SeedingError("initial infected fraction " + std::to_string(fraction) + " of " +
                       std::to_string(node_count) + " nodes rounds to zero");
  }
  return std::min(count, node_count);
}

namespace {

enum : std::uint8_t { kS, kI, kR };

SirTrace run_days(const Graph& g, const DiseaseParams& params, std::vector<std::uint8_t> state,
                  Rng& rng, std::uint64_t seed, std::size_t max_days) {
  const std::size_t n = g.node_count();
  const auto seeded = static_cast<std::size_t>(std::count(state.begin(), state.end(), kI));
  SirTrace trace;
  trace.node_count = n;
  trace.seed = seed;
  DayCounts counts{n - seeded, seeded, 0};
  trace.days.push_back(counts);

  const double escape = 1.0 - params.infection_rate;
  std::vector<std::uint32_t> exposure(n, 0);
  std::vector<NodeId> infected;
  std::vector<NodeId> newly_infected;
  for (std::size_t day = 1; day <= max_days && counts.infected > 0; ++day) {
    infected.clear();
    for (NodeId u = 0; u < n; ++u) {
      if (state[u] == kI) infected.push_back(u);
    }
    for (NodeId u : infected) {
      for (const auto& nb : g.neighbors(u)) {
        if (state[nb.node] == kS) ++exposure[nb.node];
      }
    }
    newly_infected.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (exposure[v] == 0) continue;
      const double p = 1.0 - std::pow(escape, static_cast<double>(exposure[v]));
      exposure[v] = 0;
      if (rng.uniform() < p) newly_infected.push_back(v);
    }
    std::size_t recovered_today = 0;
    for (NodeId u : infected) {
      if (rng.bernoulli(params.recovery_rate)) {
        state[u] = kR;
        ++recovered_today;
      }
    }
    for (NodeId v : newly_infected) state[v] = kI;

    counts.susceptible -= newly_infected.size();
    counts.infected = counts.infected + newly_infected.size() - recovered_today;
    counts.recovered += recovered_today;
    trace.days.push_back(counts);
  }
  return trace;
}

}  // namespace

SirTrace simulate(const Graph& g, const DiseaseParams& params, std::uint64_t seed,
                  std::size_t max_days) {
  if (max_days < 1) throw ArgumentError("max_days must be at least 1");
  const std::size_t n = g.node_count();
  const std::size_t seeded = initial_infected_count(n, params.initial_infected_fraction);

  Rng rng(seed);
  std::vector<std::uint8_t> state(n, kS);
  // Partial Fisher-Yates for a uniform sample without replacement.
  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) order[u] = u;
  for (std::size_t i = 0; i < seeded; ++i) {
    const auto j = i + rng.below(n - i);
    std::swap(order[i], order[j]);
    state[order[i]] = kI;
  }
  return run_days(g, params, std::move(state), rng, seed, max_days);
}

SirTrace simulate_from(const Graph& g, const DiseaseParams& params,
                       std::span<const NodeId> initially_infected, std::uint64_t seed,
                       std::size_t max_days) {
  if (max_days < 1) throw ArgumentError("max_days must be at least 1");
  std::vector<std::uint8_t> state(g.node_count(), kS);
  for (NodeId u : initially_infected) {
    if (u >= g.node_count()) throw ArgumentError("initially infected node out of range");
    state[u] = kI;
  }
  if (initially_infected.empty()) throw SeedingError("no initially infected nodes");
  Rng rng(seed);
  return run_days(g, params, std::move(state), rng, seed, max_days);
}

SirSummary summarize(const SirTrace& trace) {
  if (trace.days.empty() || trace.node_count == 0) {
    throw ArgumentError("cannot summarize an empty trace");
  }
  const double n = static_cast<double>(trace.node_count);
  SirSummary summary;
  summary.total_infected_pct =
      static_cast<double>(trace.node_count - trace.days.back().susceptible) / n;
  std::size_t peak = 0;
  for (const auto& day : trace.days) peak = std::max(peak, day.infected);
  summary.peak_infected_pct = static_cast<double>(peak) / n;
  summary.duration_days = trace.days.size() - 1;
  return summary;
}

std::string trace_to_csv(const SirTrace& trace) {
  std::string out = "day,S,I,R,s_frac,i_frac,r_frac\n";
  const double n = static_cast<double>(std::max<std::size_t>(1, trace.node_count));
  char line[160];
  for (std::size_t d = 0; d < trace.days.size(); ++d) {
    const auto& c = trace.days[d];
    std::snprintf(line, sizeof line, "%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f\n", d, c.susceptible,
                  c.infected, c.recovered, static_cast<double>(c.susceptible) / n,
                  static_cast<double>(c.infected) / n, static_cast<double>(c.recovered) / n);
    out += line;
  }
  return out;
}

void write_trace_csv(const SirTrace& trace, const std::filesystem::path& path) {
  write_text_file(path, trace_to_csv(trace));
}

nlohmann::json to_json(const DiseaseParams& params) {
  return {{"r0", params.r0},
          {"recovery_days", params.recovery_days},
          {"recovery_rate", params.recovery_rate},
          {"infection_rate", params.infection_rate},
          {"initial_infected_fraction", params.initial_infected_fraction},
          {"reference_avg_degree", params.reference_avg_degree},
          {"infection_rate_clamped", params.infection_rate_clamped}};
}

nlohmann::json to_json(const SirSummary& summary) {
  return {{"total_infected_pct", summary.total_infected_pct},
          {"peak_infected_pct", summary.peak_infected_pct},
          {"duration_days", summary.duration_days}};
}

}  // namespace cohortcut
