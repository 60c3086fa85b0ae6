#pragma once

#include "wta/cli/config.hpp"
#include "wta/graph.hpp"
#include "wta/io.hpp"
#include "wta/optimize.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wta::cli {

struct ExperimentParams {
    std::uint64_t seed = 1;
    /// Population for fig1_bars, fig2_trajectories and fig3_entropy.
    std::size_t n = 100;
    double p = 1.0;
    double t_end = 1.0;
    double tau = 1.0;
    double dt = 1e-3;
    /// Thinning of the fig2 and fig4 trajectory files.
    std::size_t record_stride = 10;
    /// Horizon of the nine-agent runs (fig4, fig5).
    double horizon = 10.0;
    SweepSpec grid;
    unsigned threads = 0;

    Json to_json() const;
    /// Accepts either a params object or a whole manifest carrying "params".
    /// Missing keys keep their defaults.  Throws ParseError.
    static ExperimentParams from_json(const Json& j);
};

/// The seeded nine-agent instance behind fig4 and fig5: a connected random
/// graph and initial values in [0.2, 1], with alpha the agent that starts
/// lowest.
struct NineAgentInstance {
    Graph graph;
    StateVector x0;
    NodeId alpha;
    double horizon;

    OptimizeProblem problem(const IntegratorOptions& options = {}) const;
};

NineAgentInstance nine_agent_instance(std::uint64_t seed, double horizon = 10.0);

struct ExperimentOutcome {
    Json manifest;
    /// Data files written, relative to the output directory.
    std::vector<std::string> data_files;
    std::vector<std::string> figure_files;
};

const std::vector<std::string>& experiment_names();

/// Writes data files, manifest.json and (with svg) figures into out_dir.
/// Throws InvalidArgument for an unknown name.
ExperimentOutcome run_experiment(const std::string& name, const ExperimentParams& params,
                                 const std::filesystem::path& out_dir, bool svg);

} // namespace wta::cli
