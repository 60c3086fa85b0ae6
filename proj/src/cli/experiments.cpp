#include "wta/cli/experiments.hpp"

#include "wta/analysis.hpp"
#include "wta/cli/svg.hpp"
#include "wta/error.hpp"
#include "wta/integrate.hpp"
#include "wta/random.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace wta::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

struct Population {
    Graph graph;
    StateVector x0;
};

Population population(const ExperimentParams& p) {
    Graph g = random_graph(p.n, p.p, WeightSpec::unit(), p.seed);
    Rng rng(p.seed + 1);
    StateVector x(p.n);
    for (double& v : x)
        v = rng.uniform01();
    return {std::move(g), std::move(x)};
}

IntegratorOptions options_for(const ExperimentParams& p, double t_end, std::size_t stride) {
    IntegratorOptions o;
    o.dt = p.dt;
    o.t_end = t_end;
    o.record_stride = stride;
    return o;
}

/// Collects files so the manifest can list a hash of each one.
class Writer {
public:
    Writer(fs::path dir, bool svg) : dir_(std::move(dir)), svg_(svg) { fs::create_directories(dir_); }

    void data(const std::string& name, const std::string& content) {
        write(name, content);
        hashes_[name] = hash_hex(content);
        outcome_.data_files.push_back(name);
    }
    void figure(const std::string& name, const std::function<std::vector<Panel>()>& build) {
        if (!svg_)
            return;
        write(name, render_svg(build()));
        outcome_.figure_files.push_back(name);
    }

    ExperimentOutcome finish(Json manifest) {
        Json files = Json::object();
        for (const auto& [name, hash] : hashes_)
            files[name] = hash;
        manifest["files"] = files;
        const std::string text = manifest.dump(2) + "\n";
        write("manifest.json", text);
        outcome_.manifest = std::move(manifest);
        return std::move(outcome_);
    }

private:
    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::InvalidArgument, "cannot write " + (dir_ / name).string());
        out << content;
    }

    fs::path dir_;
    bool svg_;
    std::map<std::string, std::string> hashes_;
    ExperimentOutcome outcome_;
};

std::string trajectory_text(const Trajectory& traj) {
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    return os.str();
}

Json population_json(const ExperimentParams& p, const Population& pop) {
    return {{"graph_seed", p.seed},
            {"state_seed", p.seed + 1},
            {"graph_hash", hash_hex(graph_to_json(pop.graph).dump())},
            {"edges", pop.graph.edge_count()},
            {"connected", is_connected(pop.graph)},
            {"initial_mass", std::accumulate(pop.x0.begin(), pop.x0.end(), 0.0)}};
}

std::vector<Series> fan(const Trajectory& traj, double sign) {
    std::vector<Series> out;
    const std::size_t n = traj.states.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        Series s;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            s.x.push_back(sign * traj.times[k]);
            s.y.push_back(traj.states[k][i]);
        }
        s.color = palette(i);
        out.push_back(std::move(s));
    }
    return out;
}

Json fig1(const ExperimentParams& p, Writer& w) {
    const Population pop = population(p);
    const auto run = simulate(pop.graph, pop.x0, options_for(p, p.t_end, 1000000));
    const StateVector& xf = run.trajectory.final_state();
    const EquilibriumReport rep = classify_equilibrium(pop.graph, xf);

    std::ostringstream csv;
    csv << "agent,x_initial,x_final,winner\n";
    for (std::size_t i = 0; i < p.n; ++i)
        csv << i << "," << format_number(pop.x0[i]) << "," << format_number(xf[i]) << ","
            << (rep.winners.contains(i) ? 1 : 0) << "\n";
    w.data("fig1_bars.csv", csv.str());

    w.figure("fig1_bars.svg", [&] {
        Panel top{"initial state", "agent", "x(0)", false, {}, pop.x0};
        Panel bottom{"state at t = " + format_number(p.t_end), "agent", "x(T)", false, {}, xf};
        return std::vector<Panel>{top, bottom};
    });

    return {{"population", population_json(p, pop)},
            {"winner_count", rep.winners.size()},
            {"winners", to_json(rep.winners)},
            {"winners_independent", is_independent_set(pop.graph, rep.winners)},
            {"classification", to_json(rep)},
            {"audit", to_json(run.audit)}};
}

Json fig2(const ExperimentParams& p, Writer& w) {
    const Population pop = population(p);
    const auto fwd = simulate(pop.graph, pop.x0, options_for(p, p.t_end, p.record_stride));
    const auto rev = simulate_reverse(pop.graph, pop.x0, options_for(p, p.tau, p.record_stride));
    w.data("fig2_forward.csv", trajectory_text(fwd.trajectory));
    w.data("fig2_reverse.csv", trajectory_text(rev.trajectory));

    w.figure("fig2_trajectories.svg", [&] {
        Panel panel{"trajectories over positive and negative time", "t", "x", false, {}, {}};
        panel.series = fan(fwd.trajectory, 1.0);
        for (Series& s : fan(rev.trajectory, -1.0))
            panel.series.push_back(std::move(s));
        return std::vector<Panel>{panel};
    });

    const auto& rt = rev.trajectory;
    return {{"population", population_json(p, pop)},
            {"forward_final_class",
             std::string(to_string(classify_equilibrium(pop.graph, fwd.trajectory.final_state()).cls))},
            {"reverse_final_spread", rt.max.back() - rt.min.back()},
            {"forward_audit", to_json(fwd.audit)},
            {"reverse_audit", to_json(rev.audit)}};
}

bool nondecreasing(const std::vector<double>& v, double slack) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] < v[k - 1] - slack * std::max(1.0, std::abs(v[k - 1])))
            return false;
    return true;
}

Json fig3(const ExperimentParams& p, Writer& w) {
    const Population pop = population(p);
    const auto fwd = simulate(pop.graph, pop.x0, options_for(p, p.t_end, 1));
    const auto rev = simulate_reverse(pop.graph, pop.x0, options_for(p, p.tau, 1));
    const Trajectory& ft = fwd.trajectory;
    const Trajectory& rt = rev.trajectory;

    std::ostringstream csv;
    csv << "branch,t,entropy\n";
    for (std::size_t k = 0; k < ft.size(); ++k)
        csv << "forward," << format_number(ft.times[k]) << "," << format_number(ft.entropy[k]) << "\n";
    for (std::size_t k = 0; k < rt.size(); ++k)
        csv << "reverse," << format_number(rt.times[k]) << "," << format_number(rt.entropy[k]) << "\n";
    w.data("fig3_entropy.csv", csv.str());

    w.figure("fig3_entropy.svg", [&] {
        Panel f{"entropy, forward time", "t", "H", false, {Series{ft.times, ft.entropy, palette(0)}}, {}};
        Panel r{"entropy, reverse time (log scale)", "tau", "log10 H", true,
                {Series{rt.times, rt.entropy, palette(1)}}, {}};
        return std::vector<Panel>{f, r};
    });

    bool reverse_contracts = true;
    for (std::size_t k = 1; k < rt.size(); ++k)
        if (rt.max[k] - rt.min[k] > rt.max[k - 1] - rt.min[k - 1] + 1e-9)
            reverse_contracts = false;

    return {{"population", population_json(p, pop)},
            {"forward_entropy_nondecreasing", nondecreasing(ft.entropy, 1e-9)},
            {"forward_final_entropy", ft.entropy.back()},
            {"reverse_final_entropy", rt.entropy.back()},
            {"reverse_spread_nonincreasing", reverse_contracts},
            {"log_floor", kLogFloor}};
}

Json nine_agent_json(const NineAgentInstance& inst) {
    return {{"graph", graph_to_json(inst.graph)}, {"x0", inst.x0}, {"alpha", inst.alpha}, {"horizon", inst.horizon}};
}

Json fig4(const ExperimentParams& p, Writer& w) {
    const NineAgentInstance inst = nine_agent_instance(p.seed, p.horizon);
    IntegratorOptions o = options_for(p, p.horizon, p.record_stride);
    const auto run = simulate(inst.graph, inst.x0, o);
    w.data("fig4_trajectories.csv", trajectory_text(run.trajectory));

    w.figure("fig4_nine_agents.svg", [&] {
        Panel panel{"nine agents", "t", "x", false, fan(run.trajectory, 1.0), {}};
        return std::vector<Panel>{panel};
    });

    const StateVector& xf = run.trajectory.final_state();
    const EquilibriumReport rep = classify_equilibrium(inst.graph, xf);
    const auto top = static_cast<NodeId>(std::max_element(inst.x0.begin(), inst.x0.end()) - inst.x0.begin());
    const bool max_lost = rep.losers.contains(top);
    bool other_won = false;
    for (NodeId i : rep.winners)
        other_won = other_won || i != top;
    return {{"instance", nine_agent_json(inst)},
            {"max_initial_agent", top},
            {"winners", to_json(rep.winners)},
            {"classification", std::string(to_string(rep.cls))},
            {"max_initial_agent_lost", max_lost},
            {"non_max_agent_won", other_won},
            {"final_state", xf}};
}

Json fig5(const ExperimentParams& p, Writer& w) {
    const NineAgentInstance inst = nine_agent_instance(p.seed, p.horizon);
    IntegratorOptions o;
    o.dt = p.dt;
    const OptimizeProblem problem = inst.problem(o);
    const std::vector<double> grid = p.grid.grid();
    const SweepResult sweep = sweep_initial_value(problem, grid, p.threads);

    std::ostringstream csv;
    write_sweep_csv(csv, sweep);
    w.data("fig5_sweep.csv", csv.str());

    const std::size_t masks = std::size_t{1} << sweep.candidates;
    std::ostringstream best;
    best << "x_alpha0,total_mass,best_mask,best_value,min_value\n";
    bool structure = false;
    Json witness;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const auto first = sweep.points.begin() + static_cast<std::ptrdiff_t>(gi * masks);
        const auto last = first + static_cast<std::ptrdiff_t>(masks);
        MaskValue top{first->mask, first->final_value};
        double lowest = first->final_value;
        for (auto it = first; it != last; ++it) {
            const MaskValue mv{it->mask, it->final_value};
            if (better_choice(mv, top, sweep.candidates))
                top = mv;
            lowest = std::min(lowest, it->final_value);
        }
        const double total = sweep.total_mass[gi];
        best << format_number(grid[gi]) << "," << format_number(total) << ","
             << mask_to_string(top.mask, sweep.candidates) << "," << format_number(top.value) << ","
             << format_number(lowest) << "\n";
        if (!structure && grid[gi] > 0.0 && lowest <= 1e-3 * total && top.value >= (1.0 - 1e-2) * total) {
            structure = true;
            witness = {{"x_alpha0", grid[gi]}, {"min_value", lowest}, {"max_value", top.value}, {"total_mass", total}};
        }
    }
    w.data("fig5_best.csv", best.str());

    w.figure("fig5_sweep.svg", [&] {
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
        return std::vector<Panel>{panel};
    });

    return {{"instance", nine_agent_json(inst)},
            {"candidates", sweep.candidates},
            {"masks_per_point", masks},
            {"grid", grid},
            {"near_zero_and_near_total_at_some_point", structure},
            {"witness", witness}};
}

} // namespace

Json ExperimentParams::to_json() const {
    return {{"seed", seed},
            {"n", n},
            {"p", p},
            {"t_end", t_end},
            {"tau", tau},
            {"dt", dt},
            {"record_stride", record_stride},
            {"horizon", horizon},
            {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"count", grid.count}}}};
}

ExperimentParams ExperimentParams::from_json(const Json& j) {
    if (!j.is_object())
        bad("experiment config must be a JSON object");
    const Json& src = j.contains("params") ? j.at("params") : j;
    if (!src.is_object())
        bad("params must be a JSON object");
    ExperimentParams out;
    for (const auto& [key, v] : src.items()) {
        auto num = [&]() {
            if (!v.is_number())
                bad(key + " must be a number");
            return v.get<double>();
        };
        auto count = [&]() -> std::uint64_t {
            if (!v.is_number_unsigned())
                bad(key + " must be a nonnegative integer");
            return v.get<std::uint64_t>();
        };
        if (key == "seed")
            out.seed = count();
        else if (key == "n")
            out.n = static_cast<std::size_t>(count());
        else if (key == "p")
            out.p = num();
        else if (key == "t_end")
            out.t_end = num();
        else if (key == "tau")
            out.tau = num();
        else if (key == "dt")
            out.dt = num();
        else if (key == "record_stride")
            out.record_stride = static_cast<std::size_t>(count());
        else if (key == "horizon")
            out.horizon = num();
        else if (key == "threads")
            out.threads = static_cast<unsigned>(count());
        else if (key == "grid") {
            if (!v.is_object() || !v.contains("lo") || !v.contains("hi") || !v.contains("count"))
                bad("grid needs lo, hi and count");
            out.grid = parse_sweep(format_number(v.at("lo").get<double>()) + ":" +
                                   format_number(v.at("hi").get<double>()) + ":" +
                                   std::to_string(v.at("count").get<std::uint64_t>()));
        } else {
            bad("unknown experiment parameter \"" + key + "\"");
        }
    }
    return out;
}

OptimizeProblem NineAgentInstance::problem(const IntegratorOptions& options) const {
    std::vector<double> others;
    for (NodeId i = 0; i < x0.size(); ++i)
        if (i != alpha)
            others.push_back(x0[i]);
    return OptimizeProblem{graph, alpha, 1.0, std::move(others), x0[alpha], horizon, options};
}

NineAgentInstance nine_agent_instance(std::uint64_t seed, double horizon) {
    constexpr std::size_t n = 9;
    Graph g = random_connected_graph(n, 0.35, WeightSpec::unit(), seed);
    Rng rng(seed + 1);
    StateVector x(n);
    for (double& v : x)
        v = rng.uniform(0.2, 1.0);
    const auto alpha = static_cast<NodeId>(std::min_element(x.begin(), x.end()) - x.begin());
    return {std::move(g), std::move(x), alpha, horizon};
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"fig1_bars", "fig2_trajectories", "fig3_entropy",
                                                "fig4_nine_agents", "fig5_sweep"};
    return names;
}

ExperimentOutcome run_experiment(const std::string& name, const ExperimentParams& params, const fs::path& out_dir,
                                 bool svg) {
    using Body = Json (*)(const ExperimentParams&, Writer&);
    static const std::map<std::string, Body> bodies{{"fig1_bars", fig1},
                                                    {"fig2_trajectories", fig2},
                                                    {"fig3_entropy", fig3},
                                                    {"fig4_nine_agents", fig4},
                                                    {"fig5_sweep", fig5}};
    const auto it = bodies.find(name);
    if (it == bodies.end())
        throw Error(ErrorCode::InvalidArgument, "unknown experiment \"" + name + "\"");

    Writer writer(out_dir, svg);
    Json summary = it->second(params, writer);
    const Json p = params.to_json();
    Json manifest{{"experiment", name},
                  {"version", kVersion},
                  {"seed", params.seed},
                  {"config_hash", hash_hex(p.dump())},
                  {"params", p},
                  {"summary", std::move(summary)}};
    return writer.finish(std::move(manifest));
}

} // namespace wta::cli
