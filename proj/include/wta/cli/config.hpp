#pragma once

#include "wta/dynamics.hpp"
#include "wta/graph.hpp"
#include "wta/integrate.hpp"
#include "wta/io.hpp"
#include "wta/optimize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wta::cli {

/// Seeds for random sources.  A command-line seed beats a seed given in the
/// source block, which beats the config's top-level "seed".  Graphs use the
/// master seed itself and states use master + 1.
struct SeedPolicy {
    std::optional<std::uint64_t> command_line;
    std::optional<std::uint64_t> config_level;

    std::optional<std::uint64_t> master() const { return command_line ? command_line : config_level; }
    std::uint64_t resolve(const Json& block, std::uint64_t offset) const;
};

/// One of "graph" (inline), "graph_file" or "random_graph" must be present.
Graph load_graph(const Json& config, const std::filesystem::path& base_dir, const SeedPolicy& seeds);

/// One of "initial_state", "state_file" or "random_state" must be present.
StateVector load_state(const Json& config, const std::filesystem::path& base_dir, const SeedPolicy& seeds,
                       std::size_t n);

struct OutputNames {
    std::string trajectory_csv = "trajectory.csv";
    std::string report = "report.json";
    std::string svg = "trajectory.svg";
};

struct RunConfig {
    Graph graph;
    StateVector x0;
    Direction direction = Direction::forward;
    IntegratorOptions options;
    std::optional<InteractionSpec> interaction;
    OutputNames outputs;
    std::optional<std::uint64_t> seed;
    std::string config_hash;
};

/// Throws ParseError for schema problems and the library codes for invalid
/// graphs or states.
RunConfig run_config_from_json(const Json& config, const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override);

struct SweepSpec {
    double lo = 0.0;
    double hi = 1.5;
    std::size_t count = 31;

    std::vector<double> grid() const;
};

/// "lo:hi:count".  Throws ParseError.
SweepSpec parse_sweep(const std::string& text);

enum class SearchMode { exhaustive, greedy };

struct OptimizeConfig {
    OptimizeProblem problem;
    SearchMode mode = SearchMode::exhaustive;
    std::size_t restarts = 8;
    std::uint64_t search_seed = 0;
    unsigned threads = 0;
    std::optional<SweepSpec> sweep;
    std::optional<std::uint64_t> seed;
    std::string config_hash;
};

/// Keys: a graph source over all n agents, "alpha", a state source giving all
/// n initial values, and optionally "x_alpha0", "candidate_weight",
/// "horizon", "integrator", "mode", "restarts", "threads", "sweep".
OptimizeConfig optimize_config_from_json(const Json& config, const std::filesystem::path& base_dir,
                                         std::optional<std::uint64_t> seed_override);

/// Hash of the config text together with the command-line seed.
std::string config_hash(const Json& config, std::optional<std::uint64_t> seed_override);

} // namespace wta::cli
