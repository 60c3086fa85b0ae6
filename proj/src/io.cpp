#include "wta/io.hpp"

#include "wta/error.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wta {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double number_at(const Json& j, const char* what) {
    if (!j.is_number())
        schema_error(std::string(what) + " must be a number");
    return j.get<double>();
}

std::size_t index_at(const Json& j, const char* what) {
    if (!j.is_number_integer())
        schema_error(std::string(what) + " must be an integer");
    const auto v = j.get<std::int64_t>();
    if (v < 0)
        throw Error(ErrorCode::IndexOutOfRange, std::string(what) + " is negative");
    return static_cast<std::size_t>(v);
}

bool bool_at(const Json& j, const char* what) {
    if (!j.is_boolean())
        schema_error(std::string(what) + " must be true or false");
    return j.get<bool>();
}

std::string string_at(const Json& j, const char* what) {
    if (!j.is_string())
        schema_error(std::string(what) + " must be a string");
    return j.get<std::string>();
}

} // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Graph graph_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        schema_error("graph must be an object with \"n\" and \"edges\"");
    const std::size_t n = index_at(j["n"], "n");
    const Json& list = j["edges"];
    if (!list.is_array())
        schema_error("\"edges\" must be an array");
    std::vector<Edge> edges;
    for (const Json& e : list) {
        if (!e.is_array() || e.size() != 3)
            schema_error("each edge must be [i, j, w]");
        const std::size_t a = index_at(e[0], "edge endpoint");
        const std::size_t b = index_at(e[1], "edge endpoint");
        const double w = number_at(e[2], "edge weight");
        if (a > b && a < n && b < n)
            schema_error("edge [" + std::to_string(a) + ", " + std::to_string(b) + "] must list i < j");
        edges.push_back({a, b, w});
    }
    return Graph(n, edges);
}

Json graph_to_json(const Graph& g) {
    Json edges = Json::array();
    for (const Edge& e : g.edges())
        edges.push_back({e.i, e.j, e.weight});
    return {{"n", g.size()}, {"edges", edges}};
}

StateVector state_from_json(const Json& j) {
    if (!j.is_array())
        schema_error("state must be an array of numbers");
    StateVector x;
    for (const Json& v : j)
        x.push_back(number_at(v, "state entry"));
    return x;
}

IntegratorOptions options_from_json(const Json& j) {
    IntegratorOptions o;
    if (j.is_null())
        return o;
    if (!j.is_object())
        schema_error("integrator options must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "dt")
            o.dt = number_at(value, "dt");
        else if (key == "t_end")
            o.t_end = number_at(value, "t_end");
        else if (key == "record_stride")
            o.record_stride = index_at(value, "record_stride");
        else if (key == "stop_on_equilibrium")
            o.stop_on_equilibrium = bool_at(value, "stop_on_equilibrium");
        else if (key == "equilibrium_threshold")
            o.equilibrium_threshold = number_at(value, "equilibrium_threshold");
        else if (key == "stability_control")
            o.stability_control = bool_at(value, "stability_control");
        else if (key == "positivity_shrink")
            o.positivity_shrink = static_cast<int>(index_at(value, "positivity_shrink"));
        else if (key == "method") {
            const auto m = string_at(value, "method");
            if (m == "rk4")
                o.method = Method::rk4;
            else if (m == "euler")
                o.method = Method::euler;
            else
                schema_error("method must be \"rk4\" or \"euler\"");
        } else if (key == "conservation") {
            const auto m = string_at(value, "conservation");
            if (m == "audit")
                o.conservation = ConservationMode::audit;
            else if (m == "renormalize")
                o.conservation = ConservationMode::renormalize;
            else
                schema_error("conservation must be \"audit\" or \"renormalize\"");
        } else {
            schema_error("unknown integrator option \"" + key + "\"");
        }
    }
    o.validate();
    return o;
}

Json options_to_json(const IntegratorOptions& o) {
    return {{"dt", o.dt},
            {"method", o.method == Method::rk4 ? "rk4" : "euler"},
            {"t_end", o.t_end},
            {"record_stride", o.record_stride},
            {"stop_on_equilibrium", o.stop_on_equilibrium},
            {"equilibrium_threshold", o.equilibrium_threshold},
            {"conservation", o.conservation == ConservationMode::audit ? "audit" : "renormalize"},
            {"positivity_shrink", o.positivity_shrink},
            {"stability_control", o.stability_control}};
}

std::optional<InteractionSpec> interaction_from_json(const Json& j) {
    if (j.is_null())
        return std::nullopt;
    if (!j.is_object())
        schema_error("interaction must be an object");
    const std::string f = j.value("f", "identity");
    const std::string g = j.value("g", "product");
    const double scale = j.value("g_scale", 1.0);
    if (f == "identity" && g == "product")
        return std::nullopt;
    return InteractionSpec::builtin(f, g, scale);
}

Json to_json(const NodeSet& s) { return Json(std::vector<NodeId>(s.begin(), s.end())); }

Json to_json(const EquilibriumReport& r) {
    Json comps = Json::array();
    for (const WinnerComponent& c : r.winner_components)
        comps.push_back({{"members", to_json(c.members)}, {"value", c.value}});
    return {{"class", std::string(to_string(r.cls))},
            {"winners", to_json(r.winners)},
            {"losers", to_json(r.losers)},
            {"residual", r.residual},
            {"winner_components", comps},
            {"zero_tol", r.zero_tol},
            {"equal_tol", r.equal_tol}};
}

Json to_json(const SpectrumReport& r) {
    return {{"subgraph", to_json(r.subgraph)},
            {"value", r.value},
            {"eigenvalues", r.eigenvalues},
            {"verdict", std::string(to_string(r.verdict))},
            {"zero_eigenvalue_tol", 1e-10}};
}

Json to_json(const ConservationAudit& a) {
    return {{"initial_mass", a.initial_mass},
            {"max_abs_drift", a.max_abs_drift},
            {"drift_per_unit_time", a.drift_per_unit_time}};
}

Json to_json(const EscapeReport& r) {
    return {{"escaped", r.escaped},
            {"delta", r.delta},
            {"max_deviation", r.max_deviation},
            {"escape_time", r.escape_time ? Json(*r.escape_time) : Json(nullptr)},
            {"perturbed", r.perturbed},
            {"final_state", r.final_state},
            {"final_report", to_json(r.final_report)}};
}

Json to_json(const InteractionReport& r) {
    return {{"passed", r.passed},
            {"samples_checked", r.samples_checked},
            {"violation", r.violation},
            {"detail", r.detail}};
}

Json to_json(const OptimizeResult& r) {
    Json table = Json::array();
    for (const MaskValue& mv : r.table)
        table.push_back({{"mask", mask_to_string(mv.mask, r.candidates)}, {"final_value", mv.value}});
    return {{"alpha", r.alpha},
            {"best_mask", mask_to_string(r.best_mask, r.candidates)},
            {"best_value", r.best_value},
            {"evaluations", r.evaluations},
            {"tie_break_applied", r.tie_break_applied},
            {"heuristic", r.heuristic},
            {"min_value", r.min_value},
            {"max_value", r.max_value},
            {"mean_value", r.mean_value},
            {"table", table}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    os << 't';
    for (std::size_t i = 0; i < n; ++i)
        os << ",x_" << i;
    os << ",mass,entropy,max,min,residual\n";
    for (std::size_t s = 0; s < traj.size(); ++s) {
        os << format_number(traj.times[s]);
        for (double v : traj.states[s])
            os << ',' << format_number(v);
        os << ',' << format_number(traj.mass[s]) << ',' << format_number(traj.entropy[s]) << ','
           << format_number(traj.max[s]) << ',' << format_number(traj.min[s]) << ','
           << format_number(traj.residual[s]) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "x_alpha0,mask,final_value\n";
    for (const SweepPoint& pt : sweep.points)
        os << format_number(pt.x_alpha0) << ',' << mask_to_string(pt.mask, sweep.candidates) << ','
           << format_number(pt.final_value) << '\n';
}

std::string hash_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

Json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

} // namespace wta
