#include "wta/cli/commands.hpp"

#include "wta/analysis.hpp"
#include "wta/cli/config.hpp"
#include "wta/cli/experiments.hpp"
#include "wta/cli/svg.hpp"
#include "wta/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace wta::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool svg = false;
    bool quiet = false;
};

struct Loaded {
    Json json;
    fs::path base_dir;
};

Loaded load_config(const std::string& path) {
    if (path.empty())
        throw Error(ErrorCode::ParseError, "--config is required");
    fs::path p(path);
    return {parse_json_file(path), p.has_parent_path() ? p.parent_path() : fs::path(".")};
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << content;
}

fs::path output_dir(const Globals& g, const std::string& fallback) {
    fs::path dir = g.out.empty() ? fs::path(fallback) : fs::path(g.out);
    fs::create_directories(dir);
    return dir;
}

Json seed_json(const std::optional<std::uint64_t>& seed) { return seed ? Json(*seed) : Json(nullptr); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_simulate(const Globals& g, std::ostream& out) {
    const Loaded cfg = load_config(g.config);
    const RunConfig rc = run_config_from_json(cfg.json, cfg.base_dir, g.seed);

    const auto t0 = std::chrono::steady_clock::now();
    const SimulationResult result = simulate(Dynamics(rc.graph, rc.direction, rc.interaction), rc.x0, rc.options);
    const double integrate_s = seconds_since(t0);
    const auto t1 = std::chrono::steady_clock::now();
    const Trajectory& traj = result.trajectory;
    const EquilibriumReport rep = classify_equilibrium(rc.graph, traj.final_state());
    const double classify_s = seconds_since(t1);

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);

    Json report{{"command", "simulate"},
                {"version", kVersion},
                {"seed", seed_json(rc.seed)},
                {"config_hash", rc.config_hash},
                {"graph_hash", hash_hex(graph_to_json(rc.graph).dump())},
                {"n", rc.graph.size()},
                {"direction", rc.direction == Direction::forward ? "forward" : "reverse"},
                {"interaction", rc.interaction ? Json{{"f", rc.interaction->f_name}, {"g", rc.interaction->g_name}}
                                               : Json{{"f", "identity"}, {"g", "product"}}},
                {"integrator", options_to_json(rc.options)},
                {"audit", to_json(result.audit)},
                {"steps", result.steps},
                {"halvings", result.halvings},
                {"substeps", result.substeps},
                {"stopped_on_equilibrium", result.stopped_on_equilibrium},
                {"t_final", traj.times.back()},
                {"records", traj.size()},
                {"final_state", traj.final_state()},
                {"final_entropy", traj.entropy.back()},
                {"final_classification", to_json(rep)},
                {"winners_independent", is_independent_set(rc.graph, rep.winners)},
                {"timings", {{"integrate_seconds", integrate_s}, {"classify_seconds", classify_s}}}};

    const fs::path dir = output_dir(g, ".");
    write_file(dir / rc.outputs.trajectory_csv, csv.str());
    write_file(dir / rc.outputs.report, report.dump(2) + "\n");
    if (g.svg) {
        const bool reverse = rc.direction == Direction::reverse;
        Panel states{"agent states", reverse ? "tau" : "t", "x", false, {}, {}};
        for (std::size_t i = 0; i < rc.graph.size(); ++i) {
            Series s;
            s.x = traj.times;
            for (const StateVector& x : traj.states)
                s.y.push_back(x[i]);
            s.color = palette(i);
            states.series.push_back(std::move(s));
        }
        Panel h{reverse ? "entropy (log scale)" : "entropy", reverse ? "tau" : "t", reverse ? "log10 H" : "H",
                reverse, {Series{traj.times, traj.entropy, palette(1)}}, {}};
        write_file(dir / rc.outputs.svg, render_svg({states, h}));
    }
    if (!g.quiet)
        out << "simulate: n=" << rc.graph.size() << " steps=" << result.steps << " t=" << format_number(traj.times.back())
            << " class=" << to_string(rep.cls) << " winners=" << rep.winners.size()
            << " drift=" << format_number(result.audit.max_abs_drift) << " -> " << (dir / rc.outputs.trajectory_csv).string()
            << "\n";
    return kExitOk;
}

struct ClassifyArgs {
    std::string graph_file;
    std::string state_file;
    double zero_tol = 1e-8;
    double equal_tol = 1e-6;
    bool spectrum = false;
};

int cmd_classify(const Globals& g, const ClassifyArgs& a, std::ostream& out) {
    std::optional<Graph> graph;
    StateVector x;
    if (!g.config.empty()) {
        if (!a.graph_file.empty() || !a.state_file.empty())
            throw Error(ErrorCode::ParseError, "use either --config or --graph/--state");
        const Loaded cfg = load_config(g.config);
        RunConfig rc = run_config_from_json(cfg.json, cfg.base_dir, g.seed);
        graph.emplace(std::move(rc.graph));
        x = std::move(rc.x0);
    } else {
        if (a.graph_file.empty() || a.state_file.empty())
            throw Error(ErrorCode::ParseError, "classify needs --graph and --state, or --config");
        graph.emplace(graph_from_json(parse_json_file(a.graph_file)));
        x = state_from_json(parse_json_file(a.state_file));
    }
    const EquilibriumReport rep = classify_equilibrium(*graph, x, a.zero_tol, a.equal_tol);
    Json j = to_json(rep);
    j["n"] = graph->size();
    j["winners_independent"] = is_independent_set(*graph, rep.winners);
    if (a.spectrum && rep.cls == EquilibriumClass::unstable_set) {
        Json spectra = Json::array();
        for (std::size_t k = 0; k < rep.winner_components.size(); ++k)
            if (rep.winner_components[k].members.size() >= 2)
                spectra.push_back(to_json(linearize_at(*graph, rep, k)));
        j["spectra"] = spectra;
    }
    out << j.dump(2) << "\n";
    return kExitOk;
}

struct OptimizeArgs {
    std::string mode;
    std::optional<std::size_t> restarts;
    std::optional<unsigned> threads;
    std::string sweep;
};

int cmd_optimize(const Globals& g, const OptimizeArgs& a, std::ostream& out) {
    const Loaded cfg = load_config(g.config);
    OptimizeConfig oc = optimize_config_from_json(cfg.json, cfg.base_dir, g.seed);
    if (!a.mode.empty()) {
        if (a.mode == "exhaustive")
            oc.mode = SearchMode::exhaustive;
        else if (a.mode == "greedy")
            oc.mode = SearchMode::greedy;
        else
            throw Error(ErrorCode::ParseError, "--mode must be exhaustive or greedy");
    }
    if (a.restarts)
        oc.restarts = *a.restarts;
    if (a.threads)
        oc.threads = *a.threads;
    if (!a.sweep.empty())
        oc.sweep = parse_sweep(a.sweep);

    const OptimizeProblem& p = oc.problem;
    Json meta{{"command", "optimize"},
              {"version", kVersion},
              {"seed", seed_json(oc.seed)},
              {"config_hash", oc.config_hash},
              {"graph_hash", hash_hex(graph_to_json(p.base_graph).dump())},
              {"candidates", p.candidates()},
              {"candidate_ids", p.candidate_ids()},
              {"horizon", p.horizon},
              {"total_mass", p.total_mass()}};

    if (oc.sweep) {
        if (p.candidates() > kMaxCandidates)
            throw Error(ErrorCode::TooManyCandidates, std::to_string(p.candidates()) + " candidates");
        const std::vector<double> grid = oc.sweep->grid();
        const SweepResult sweep = sweep_initial_value(p, grid, oc.threads);
        std::ostringstream csv;
        write_sweep_csv(csv, sweep);
        meta["mode"] = "sweep";
        meta["grid"] = grid;
        meta["sweep_csv_hash"] = hash_hex(csv.str());
        const fs::path dir = output_dir(g, ".");
        write_file(dir / "sweep.csv", csv.str());
        write_file(dir / "sweep.json", meta.dump(2) + "\n");
        if (g.svg) {
            Panel panel{"final vs initial value of alpha", "x_alpha(0)", "x_alpha(T)", false, {}, {}};
            Series dots;
            dots.points = true;
            dots.color = palette(0);
            for (const SweepPoint& pt : sweep.points) {
                dots.x.push_back(pt.x_alpha0);
                dots.y.push_back(pt.final_value);
            }
            panel.series.push_back(dots);
            panel.series.push_back(Series{grid, sweep.total_mass, "#000000", true});
            panel.series.push_back(Series{grid, grid, "#888888", true});
            write_file(dir / "sweep.svg", render_svg({panel}));
        }
        if (!g.quiet)
            out << "optimize: swept " << grid.size() << " values x " << (std::size_t{1} << sweep.candidates)
                << " masks -> " << (dir / "sweep.csv").string() << "\n";
        return kExitOk;
    }

    const OptimizeResult r =
        oc.mode == SearchMode::exhaustive ? exhaustive_search(p, oc.threads) : greedy_search(p, oc.restarts, oc.search_seed);
    Json j = to_json(r);
    j["mode"] = oc.mode == SearchMode::exhaustive ? "exhaustive" : "greedy";
    if (oc.mode == SearchMode::greedy) {
        j["restarts"] = oc.restarts;
        j["search_seed"] = oc.search_seed;
    }
    for (const auto& [key, value] : meta.items())
        j[key] = value;
    const fs::path dir = output_dir(g, ".");
    write_file(dir / "optimize.json", j.dump(2) + "\n");
    if (g.svg && !r.table.empty()) {
        Panel panel{"x_alpha(T) by opponent mask", "mask", "x_alpha(T)", false, {}, {}};
        for (const MaskValue& mv : r.table)
            panel.bars.push_back(mv.value);
        write_file(dir / "optimize.svg", render_svg({panel}));
    }
    if (!g.quiet)
        out << j.dump(2) << "\n";
    return kExitOk;
}

struct ExperimentArgs {
    std::string name;
    std::optional<std::size_t> n;
    std::optional<double> p;
    std::optional<double> t_end;
    std::optional<double> tau;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<std::size_t> stride;
    std::optional<unsigned> threads;
    std::string grid;
};

int cmd_experiment(const Globals& g, const ExperimentArgs& a, std::ostream& out) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), a.name) == names.end())
        throw Error(ErrorCode::InvalidArgument, "unknown experiment \"" + a.name + "\"");
    ExperimentParams params;
    if (!g.config.empty())
        params = ExperimentParams::from_json(load_config(g.config).json);
    if (g.seed)
        params.seed = *g.seed;
    if (a.n)
        params.n = *a.n;
    if (a.p)
        params.p = *a.p;
    if (a.t_end)
        params.t_end = *a.t_end;
    if (a.tau)
        params.tau = *a.tau;
    if (a.dt)
        params.dt = *a.dt;
    if (a.horizon)
        params.horizon = *a.horizon;
    if (a.stride)
        params.record_stride = *a.stride;
    if (a.threads)
        params.threads = *a.threads;
    if (!a.grid.empty())
        params.grid = parse_sweep(a.grid);

    const fs::path dir = output_dir(g, (fs::path("out") / a.name).string());
    const ExperimentOutcome outcome = run_experiment(a.name, params, dir, g.svg);
    if (!g.quiet)
        out << outcome.manifest.at("summary").dump(2) << "\n";
    return kExitOk;
}

} // namespace

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::PositivityFailure: return kExitNumerical;
    case ErrorCode::TooManyCandidates: return kExitGuard;
    default: return kExitConfig;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Winners-take-all network dynamics: simulate, classify, optimize, experiment", "wta"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config, "JSON config file");
    auto* seed_opt = app.add_option("--seed", seed, "Master seed for random graphs and states");
    app.add_option("--out", g.out, "Output directory");
    app.add_flag("--svg", g.svg, "Also write SVG figures");
    app.add_flag("--quiet", g.quiet, "Print nothing on success");

    auto* sim = app.add_subcommand("simulate", "Integrate a run config; write trajectory CSV and report JSON");

    ClassifyArgs ca;
    auto* cls = app.add_subcommand("classify", "Classify a state as E_s, E_u or not an equilibrium");
    cls->add_option("--graph", ca.graph_file, "Graph JSON file");
    cls->add_option("--state", ca.state_file, "State JSON file");
    cls->add_option("--zero-tol", ca.zero_tol, "Values below this are losers");
    cls->add_option("--equal-tol", ca.equal_tol, "Relative tolerance for equal adjacent winners");
    cls->add_flag("--spectrum", ca.spectrum, "Add the linearization spectrum of each E_u component");

    OptimizeArgs oa;
    auto* opt = app.add_subcommand("optimize", "Choose opponents for agent alpha");
    opt->add_option("--mode", oa.mode, "exhaustive or greedy");
    opt->add_option("--restarts", oa.restarts, "Greedy restarts");
    opt->add_option("--threads", oa.threads, "Worker threads (0 = hardware)");
    opt->add_option("--sweep", oa.sweep, "Sweep alpha's initial value over lo:hi:count");

    ExperimentArgs ea;
    auto* exp = app.add_subcommand("experiment", "Regenerate one of the figure experiments");
    exp->add_option("name", ea.name, "fig1_bars, fig2_trajectories, fig3_entropy, fig4_nine_agents or fig5_sweep")
        ->required();
    exp->add_option("--n", ea.n, "Population size for fig1-fig3");
    exp->add_option("--p", ea.p, "Edge probability for fig1-fig3");
    exp->add_option("--t-end", ea.t_end, "Forward horizon");
    exp->add_option("--tau", ea.tau, "Reverse horizon");
    exp->add_option("--dt", ea.dt, "Step size");
    exp->add_option("--horizon", ea.horizon, "Horizon of the nine-agent runs");
    exp->add_option("--stride", ea.stride, "Record every k-th step in trajectory files");
    exp->add_option("--threads", ea.threads, "Worker threads for fig5 (0 = hardware)");
    exp->add_option("--grid", ea.grid, "fig5 grid lo:hi:count");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (*seed_opt)
        g.seed = seed;

    try {
        if (*sim)
            return cmd_simulate(g, out);
        if (*cls)
            return cmd_classify(g, ca, out);
        if (*opt)
            return cmd_optimize(g, oa, out);
        return cmd_experiment(g, ea, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const nlohmann::json::exception& e) {
        err << "error: ParseError: " << e.what() << "\n";
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace wta::cli
