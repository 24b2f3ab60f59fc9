#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "cohortcut/errors.hpp"
#include "cohortcut/qubomc.hpp"
#include "support/oracles.hpp"

using namespace cohortcut;

namespace {

Graph cycle(std::size_t n) {
  Graph g(n);
  for (NodeId i = 0; i < n; ++i) g.add_edge(i, static_cast<NodeId>((i + 1) % n));
  return g;
}

Graph triangle() { return cycle(3); }

Graph k33() {
  Graph g(6);
  for (NodeId a = 0; a < 3; ++a) {
    for (NodeId b = 3; b < 6; ++b) g.add_edge(a, b);
  }
  return g;
}

SolverConfig with_kind(SolverKind kind, std::uint64_t seed = 1) {
  SolverConfig c;
  c.kind = kind;
  c.seed = seed;
  return c;
}

Labels random_labels(std::mt19937_64& gen, std::size_t n) {
  Labels x(n);
  for (auto& b : x) b = static_cast<std::uint8_t>(gen() & 1);
  return x;
}

}  // namespace

TEST_CASE("cut_value examples") {
  const Graph k3 = triangle();
  CHECK(cut_value(k3, Labels{0, 0, 0}) == 0);
  CHECK(cut_value(k3, Labels{0, 0, 1}) == 2);
  CHECK(cut_value(cycle(5), Labels{0, 1, 0, 1, 0}) == 4);
  CHECK(testing::brute_force_maxcut(cycle(5)) == 4);
  CHECK_THROWS_AS(cut_value(k3, Labels{0, 1}), ArgumentError);
}

TEST_CASE("to_ising coefficients") {
  Graph edge(2);
  edge.add_edge(0, 1);
  const auto m = to_ising(edge);
  REQUIRE(m.couplings.size() == 1);
  CHECK(m.couplings.at({0, 1}) == -0.5);
  CHECK(m.constant_offset == 0.5);
  CHECK(ising_energy(m, Spins{1, 1}) == 0.0);
  CHECK(ising_energy(m, Spins{1, -1}) == 1.0);
  CHECK_THROWS_AS(ising_energy(m, Spins{1}), ArgumentError);

  const auto empty = to_ising(Graph(5));
  CHECK(empty.couplings.empty());
  CHECK(empty.constant_offset == 0.0);
  CHECK(empty.spin_count == 5);
}

TEST_CASE("Ising energy equals cut value and is spin-flip symmetric") {
  std::mt19937_64 gen(2024);
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    const Graph g = testing::random_graph(n, 0.1 + 0.05 * (trial % 10), trial);
    const auto m = to_ising(g);
    for (int k = 0; k < 50; ++k) {
      Labels x = random_labels(gen, n);
      const auto cut = cut_value(g, x);
      Spins s = labels_to_spins(x);
      CHECK(ising_energy(m, s) == static_cast<double>(cut));
      for (auto& v : s) v = -v;
      CHECK(ising_energy(m, s) == static_cast<double>(cut));
      for (auto& b : x) b ^= 1;
      CHECK(cut_value(g, x) == cut);
    }
  }
}

TEST_CASE("solver examples") {
  for (auto kind : {SolverKind::kExact, SolverKind::kSimulatedAnnealing,
                    SolverKind::kGreedyLocalSearch}) {
    const auto single = solve_maxcut(Graph(1), with_kind(kind));
    CHECK(single.labels == Labels{0});
    CHECK(single.cut_value == 0);
  }
  CHECK(solve_maxcut(cycle(5), with_kind(SolverKind::kExact)).cut_value == 4);
  CHECK(solve_maxcut(k33(), with_kind(SolverKind::kExact)).cut_value == 9);
  CHECK(testing::brute_force_maxcut(k33()) == 9);
}

TEST_CASE("edgeless graphs get the index-order even split") {
  for (auto kind : {SolverKind::kExact, SolverKind::kSimulatedAnnealing,
                    SolverKind::kGreedyLocalSearch}) {
    CHECK(solve_maxcut(Graph(5), with_kind(kind)).labels == Labels{0, 0, 0, 1, 1});
  }
}

TEST_CASE("exact solver refuses large graphs") {
  CHECK_THROWS_AS(solve_maxcut(cycle(27), with_kind(SolverKind::kExact)), CapabilityError);
  CHECK_NOTHROW(solve_maxcut(cycle(26), with_kind(SolverKind::kExact)));
  CHECK_THROWS_AS(solve_maxcut(Graph(0), with_kind(SolverKind::kExact)), ArgumentError);
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  c.sa_cooling_factor = 1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.sa_restarts = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = {};
  c.sa_initial_temperature = -1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_THROWS_AS(solver_config_from_json(nlohmann::json::parse(R"({"kind":"quantum"})")), ConfigError);
  const auto parsed = solver_config_from_json(
      nlohmann::json::parse(R"({"kind":"greedy_local_search","seed":4,"sa_sweeps":7})"));
  CHECK(parsed.kind == SolverKind::kGreedyLocalSearch);
  CHECK(parsed.sa_sweeps == 7);
}

TEST_CASE("exact solver matches brute force") {
  std::mt19937_64 gen(7);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 1 + gen() % 10;
    const Graph g = testing::random_graph(n, 0.2 + 0.6 * static_cast<double>(gen() % 100) / 100.0, t);
    const auto result = solve_maxcut(g, with_kind(SolverKind::kExact));
    CHECK(result.cut_value == testing::brute_force_maxcut(g));
    CHECK(cut_value(g, result.labels) == result.cut_value);
  }
}

TEST_CASE("annealing reaches the optimum on small graphs") {
  std::mt19937_64 gen(11);
  int hits = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 2 + gen() % 15;
    const Graph g = testing::random_graph(n, 0.2 + 0.6 * static_cast<double>(gen() % 100) / 100.0, 500 + t);
    const auto result = solve_maxcut(g, with_kind(SolverKind::kSimulatedAnnealing, t));
    CHECK(cut_value(g, result.labels) == result.cut_value);
    if (result.cut_value == testing::brute_force_maxcut(g)) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("greedy output admits no improving flip") {
  for (std::uint64_t t = 0; t < 40; ++t) {
    const Graph g = testing::random_graph(30 + t, 0.15, 900 + t);
    const auto result = solve_maxcut(g, with_kind(SolverKind::kGreedyLocalSearch, t));
    CHECK(cut_value(g, result.labels) == result.cut_value);
    for (NodeId u = 0; u < g.node_count(); ++u) CHECK(flip_gain(g, result.labels, u) <= 0);
  }
}

TEST_CASE("heuristic solvers are deterministic per seed") {
  const Graph g = testing::random_graph(60, 0.2, 3);
  for (auto kind : {SolverKind::kSimulatedAnnealing, SolverKind::kGreedyLocalSearch}) {
    CHECK(solve_maxcut(g, with_kind(kind, 5)).labels == solve_maxcut(g, with_kind(kind, 5)).labels);
  }
}

TEST_CASE("QUBO export of a single edge") {
  Graph g(2);
  g.add_edge(0, 1);
  CHECK(format_qubo(maxcut_qubo(g)) == "# qubo n=2\n0 0 -1\n1 1 -1\n0 1 2\n");
  CHECK(format_qubo(maxcut_qubo(Graph(4))) == "# qubo n=4\n");
}

TEST_CASE("QUBO minimum is minus the max cut") {
  const auto q = maxcut_qubo(triangle());
  std::int64_t best = 0;
  for (std::uint8_t m = 0; m < 8; ++m) {
    best = std::min(best, qubo_energy(q, Labels{static_cast<std::uint8_t>(m & 1),
                                                static_cast<std::uint8_t>((m >> 1) & 1),
                                                static_cast<std::uint8_t>((m >> 2) & 1)}));
  }
  CHECK(best == -2);
}

TEST_CASE("QUBO energy is minus the cut for every labeling") {
  std::mt19937_64 gen(5);
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Graph g = testing::random_graph(12, 0.3, t);
    const auto q = maxcut_qubo(g);
    for (int k = 0; k < 20; ++k) {
      const auto x = random_labels(gen, 12);
      CHECK(qubo_energy(q, x) == -static_cast<std::int64_t>(cut_value(g, x)));
    }
  }
}

TEST_CASE("QUBO files parse back and follow the grammar") {
  const Graph g = testing::random_graph(9, 0.4, 12);
  const auto path = std::filesystem::temp_directory_path() / "cohortcut_test.qubo";
  export_qubo(g, path);
  const auto back = read_qubo(path);
  CHECK(back.variable_count == 9);
  CHECK(back.coefficients == maxcut_qubo(g).coefficients);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# qubo n=9");
  const std::regex term(R"(^(\d+) (\d+) (-?\d+)$)");
  while (std::getline(in, line)) CHECK(std::regex_match(line, term));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(parse_qubo("0 0 1\n"), ArgumentError);
  CHECK_THROWS_AS(parse_qubo("# qubo n=2\n1 0 2\n"), ArgumentError);
  CHECK_THROWS_AS(parse_qubo("# qubo n=2\n0 2 2\n"), ArgumentError);
  CHECK_THROWS_AS(parse_qubo("# qubo n=2\n0 1 2\n0 1 2\n"), ArgumentError);
  CHECK_THROWS_AS(parse_qubo("# qubo n=2\n0 1 2.5\n"), ArgumentError);
  CHECK_THROWS_AS(read_qubo(path), IoError);
}
