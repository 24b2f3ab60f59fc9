#include "cohortcut/qubomc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cohortcut/errors.hpp"
#include "cohortcut/rng.hpp"

namespace cohortcut {

std::uint64_t cut_value(const Graph& g, std::span<const std::uint8_t> labels) {
  if (labels.size() != g.node_count()) {
    throw ArgumentError("labels length " + std::to_string(labels.size()) +
                        " does not match node count " + std::to_string(g.node_count()));
  }
  std::uint64_t cut = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (const auto& nb : g.neighbors(u)) {
      if (u < nb.node && (labels[u] != labels[nb.node])) ++cut;
    }
  }
  return cut;
}

IsingModel to_ising(const Graph& g) {
  IsingModel model;
  model.spin_count = g.node_count();
  for (const auto& e : g.edges()) {
    model.couplings[{e.u, e.v}] += -0.5;
    model.constant_offset += 0.5;
  }
  return model;
}

double ising_energy(const IsingModel& model, std::span<const int> spins) {
  if (spins.size() != model.spin_count) {
    throw ArgumentError("spin vector length " + std::to_string(spins.size()) +
                        " does not match spin count " + std::to_string(model.spin_count));
  }
  double energy = model.constant_offset;
  for (const auto& [key, coupling] : model.couplings) {
    energy += coupling * spins[key.first] * spins[key.second];
  }
  return energy;
}

Spins labels_to_spins(std::span<const std::uint8_t> labels) {
  Spins spins(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) spins[i] = 1 - 2 * static_cast<int>(labels[i]);
  return spins;
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kExact: return "exact";
    case SolverKind::kSimulatedAnnealing: return "simulated_annealing";
    case SolverKind::kGreedyLocalSearch: return "greedy_local_search";
  }
  return "simulated_annealing";
}

std::optional<SolverKind> parse_solver_kind(std::string_view text) {
  if (text == "exact") return SolverKind::kExact;
  if (text == "simulated_annealing" || text == "sa") return SolverKind::kSimulatedAnnealing;
  if (text == "greedy_local_search" || text == "greedy") return SolverKind::kGreedyLocalSearch;
  return std::nullopt;
}

void validate(const SolverConfig& config) {
  if (config.sa_sweeps == 0) throw ConfigError("sa_sweeps must be positive");
  if (config.sa_restarts == 0) throw ConfigError("sa_restarts must be positive");
  if (config.sa_initial_temperature && !(*config.sa_initial_temperature > 0.0)) {
    throw ConfigError("sa_initial_temperature must be positive");
  }
  if (!(config.sa_cooling_factor > 0.0 && config.sa_cooling_factor < 1.0)) {
    throw ConfigError("sa_cooling_factor must lie in (0, 1)");
  }
}

std::int64_t flip_gain(const Graph& g, std::span<const std::uint8_t> labels, NodeId u) {
  std::int64_t gain = 0;
  for (const auto& nb : g.neighbors(u)) gain += labels[nb.node] == labels[u] ? 1 : -1;
  return gain;
}

namespace {

// Compressed adjacency for the inner loops.
struct Csr {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;

  explicit Csr(const Graph& g) : offsets(g.node_count() + 1, 0) {
    targets.reserve(2 * g.edge_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (const auto& nb : g.neighbors(u)) targets.push_back(nb.node);
      offsets[u + 1] = targets.size();
    }
  }
  std::span<const NodeId> row(NodeId u) const {
    return {targets.data() + offsets[u], offsets[u + 1] - offsets[u]};
  }
};

// Per-node flip gains kept current under single flips.
struct CutState {
  Labels labels;
  std::vector<std::int64_t> gain;
  std::int64_t cut = 0;

  CutState(const Csr& csr, Labels initial) : labels(std::move(initial)), gain(labels.size(), 0) {
    for (NodeId u = 0; u < labels.size(); ++u) {
      for (NodeId v : csr.row(u)) {
        const bool same = labels[u] == labels[v];
        gain[u] += same ? 1 : -1;
        if (!same && u < v) ++cut;
      }
    }
  }

  void flip(const Csr& csr, NodeId u) {
    cut += gain[u];
    gain[u] = -gain[u];
    labels[u] ^= 1;
    for (NodeId v : csr.row(u)) gain[v] += labels[v] == labels[u] ? 2 : -2;
  }
};

CutAssignment even_split(std::size_t n) {
  CutAssignment result;
  result.labels.assign(n, 0);
  for (std::size_t i = (n + 1) / 2; i < n; ++i) result.labels[i] = 1;
  return result;
}

Labels random_labels(Rng& rng, std::size_t n) {
  Labels labels(n);
  for (auto& x : labels) x = static_cast<std::uint8_t>(rng.next() >> 63);
  return labels;
}

CutAssignment solve_exact(const Graph& g) {
  const std::size_t n = g.node_count();
  const Csr csr(g);
  CutState state(csr, Labels(n, 0));
  Labels best = state.labels;
  std::int64_t best_cut = 0;
  if (n >= 2) {
    const std::uint64_t codes = std::uint64_t{1} << (n - 1);
    for (std::uint64_t t = 1; t < codes; ++t) {
      state.flip(csr, static_cast<NodeId>(1 + std::countr_zero(t)));
      if (state.cut > best_cut) {
        best_cut = state.cut;
        best = state.labels;
      }
    }
  }
  return {std::move(best), static_cast<std::uint64_t>(best_cut)};
}

CutAssignment solve_annealing(const Graph& g, const SolverConfig& config) {
  const std::size_t n = g.node_count();
  const Csr csr(g);
  const double t0 =
      config.sa_initial_temperature.value_or(static_cast<double>(std::max<std::size_t>(1, g.max_degree())));
  Labels best;
  std::int64_t best_cut = -1;
  for (std::size_t restart = 0; restart < config.sa_restarts; ++restart) {
    Rng rng(derive_seed(config.seed, restart));
    CutState state(csr, random_labels(rng, n));
    Labels restart_best = state.labels;
    std::int64_t restart_best_cut = state.cut;
    double temperature = t0;
    for (std::size_t sweep = 0; sweep < config.sa_sweeps; ++sweep) {
      for (NodeId u = 0; u < n; ++u) {
        const std::int64_t gain = state.gain[u];
        if (gain >= 0 || rng.uniform() < std::exp(static_cast<double>(gain) / temperature)) {
          state.flip(csr, u);
          if (state.cut > restart_best_cut) {
            restart_best_cut = state.cut;
            restart_best = state.labels;
          }
        }
      }
      temperature *= config.sa_cooling_factor;
    }
    if (restart_best_cut > best_cut) {
      best_cut = restart_best_cut;
      best = std::move(restart_best);
    }
  }
  return {std::move(best), static_cast<std::uint64_t>(best_cut)};
}

CutAssignment solve_greedy(const Graph& g, const SolverConfig& config) {
  const std::size_t n = g.node_count();
  const Csr csr(g);
  Rng rng(derive_seed(config.seed, 0));
  CutState state(csr, random_labels(rng, n));
  bool improved = true;
  while (improved) {
    improved = false;
    for (NodeId u = 0; u < n; ++u) {
      if (state.gain[u] > 0) {
        state.flip(csr, u);
        improved = true;
      }
    }
  }
  return {std::move(state.labels), static_cast<std::uint64_t>(state.cut)};
}

}  // namespace

CutAssignment solve_maxcut(const Graph& g, const SolverConfig& config) {
  validate(config);
  const std::size_t n = g.node_count();
  if (n == 0) throw ArgumentError("solve_maxcut needs at least one node");
  if (config.kind == SolverKind::kExact && n > kExactNodeLimit) {
    throw CapabilityError("exact Max-Cut enumeration is limited to " +
                          std::to_string(kExactNodeLimit) + " nodes, got " + std::to_string(n));
  }
  if (g.edge_count() == 0) return even_split(n);
  switch (config.kind) {
    case SolverKind::kExact: return solve_exact(g);
    case SolverKind::kSimulatedAnnealing: return solve_annealing(g, config);
    case SolverKind::kGreedyLocalSearch: return solve_greedy(g, config);
  }
  throw ArgumentError("unknown solver kind");
}

Qubo maxcut_qubo(const Graph& g) {
  Qubo qubo;
  qubo.variable_count = g.node_count();
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) > 0) qubo.coefficients[{u, u}] = -static_cast<std::int64_t>(g.degree(u));
  }
  for (const auto& e : g.edges()) qubo.coefficients[{e.u, e.v}] += 2;
  return qubo;
}

std::int64_t qubo_energy(const Qubo& qubo, std::span<const std::uint8_t> bits) {
  if (bits.size() != qubo.variable_count) {
    throw ArgumentError("bitstring length does not match QUBO variable count");
  }
  std::int64_t energy = 0;
  for (const auto& [key, c] : qubo.coefficients) {
    if (bits[key.first] && bits[key.second]) energy += c;
  }
  return energy;
}

std::string format_qubo(const Qubo& qubo) {
  std::ostringstream out;
  out << "# qubo n=" << qubo.variable_count << "\n";
  // Linear terms first, then couplings.
  for (const auto& [key, c] : qubo.coefficients) {
    if (key.first == key.second && c != 0) out << key.first << ' ' << key.second << ' ' << c << '\n';
  }
  for (const auto& [key, c] : qubo.coefficients) {
    if (key.first != key.second && c != 0) out << key.first << ' ' << key.second << ' ' << c << '\n';
  }
  return out.str();
}

Qubo parse_qubo(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("QUBO: missing header");
  constexpr std::string_view kHeader = "# qubo n=";
  if (line.rfind(kHeader, 0) != 0) throw ArgumentError("QUBO: bad header '" + line + "'");
  Qubo qubo;
  {
    std::istringstream hs(line.substr(kHeader.size()));
    long long n = -1;
    std::string rest;
    if (!(hs >> n) || n < 0 || (hs >> rest)) {
      throw ArgumentError("QUBO: bad node count in header '" + line + "'");
    }
    qubo.variable_count = static_cast<std::size_t>(n);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long i = -1, j = -1, c = 0;
    std::string rest;
    if (!(ls >> i >> j >> c) || (ls >> rest)) {
      throw ArgumentError("QUBO line " + std::to_string(line_no) + ": expected 'i j c'");
    }
    if (i < 0 || j < i || j >= static_cast<long long>(qubo.variable_count)) {
      throw ArgumentError("QUBO line " + std::to_string(line_no) + ": need 0 <= i <= j < n");
    }
    if (!qubo.coefficients.emplace(std::pair<std::size_t, std::size_t>(i, j), c).second) {
      throw ArgumentError("QUBO line " + std::to_string(line_no) + ": duplicate term");
    }
  }
  return qubo;
}

void export_qubo(const Graph& g, const std::filesystem::path& path) {
  write_text_file(path, format_qubo(maxcut_qubo(g)));
}

Qubo read_qubo(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_qubo(buffer.str());
  } catch (const ArgumentError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const SolverConfig& config) {
  nlohmann::json doc = {{"kind", std::string(to_string(config.kind))},
                        {"seed", config.seed},
                        {"sa_sweeps", config.sa_sweeps},
                        {"sa_restarts", config.sa_restarts},
                        {"sa_cooling_factor", config.sa_cooling_factor}};
  if (config.sa_initial_temperature) doc["sa_initial_temperature"] = *config.sa_initial_temperature;
  return doc;
}

SolverConfig solver_config_from_json(const nlohmann::json& doc) {
  SolverConfig config;
  try {
    if (doc.contains("kind")) {
      auto kind = parse_solver_kind(doc.at("kind").get<std::string>());
      if (!kind) throw ConfigError("unknown solver kind " + doc.at("kind").dump());
      config.kind = *kind;
    }
    config.seed = doc.value("seed", config.seed);
    config.sa_sweeps = doc.value("sa_sweeps", config.sa_sweeps);
    config.sa_restarts = doc.value("sa_restarts", config.sa_restarts);
    if (doc.contains("sa_initial_temperature") && !doc.at("sa_initial_temperature").is_null()) {
      config.sa_initial_temperature = doc.at("sa_initial_temperature").get<double>();
    }
    config.sa_cooling_factor = doc.value("sa_cooling_factor", config.sa_cooling_factor);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solver config: ") + e.what());
  }
  validate(config);
  return config;
}

}  // namespace cohortcut
