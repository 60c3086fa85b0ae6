#include "wta/cli/config.hpp"

#include "wta/error.hpp"
#include "wta/random.hpp"

#include <algorithm>
#include <charconv>
#include <initializer_list>

namespace wta::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

void require_object(const Json& j, const char* what) {
    if (!j.is_object())
        bad(std::string(what) + " must be a JSON object");
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
    for (const auto& item : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known)
            bad(std::string("unknown key \"") + item.key() + "\" in " + what);
    }
}

double number(const Json& j, const char* key, double fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        bad(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

std::uint64_t unsigned_number(const Json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key))
        return fallback;
    const Json& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        bad(std::string(key) + " must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string text(const Json& j, const char* key, const std::string& fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_string())
        bad(std::string(key) + " must be a string");
    return j.at(key).get<std::string>();
}

fs::path resolve(const fs::path& base, const std::string& name) {
    fs::path p(name);
    if (p.is_relative())
        p = base / p;
    if (!fs::exists(p))
        bad("file not found: " + p.string());
    return p;
}

int count_present(const Json& j, std::initializer_list<const char*> keys) {
    int c = 0;
    for (const char* k : keys)
        c += j.contains(k) ? 1 : 0;
    return c;
}

WeightSpec weight_spec(const Json& rg) {
    if (!rg.contains("weights"))
        return WeightSpec::unit();
    const Json& w = rg.at("weights");
    if (w.is_string() && w.get<std::string>() == "unit")
        return WeightSpec::unit();
    if (w.is_object() && w.contains("uniform")) {
        const Json& range = w.at("uniform");
        if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number())
            bad("weights.uniform must be [lo, hi]");
        return WeightSpec::uniform(range[0].get<double>(), range[1].get<double>());
    }
    bad("weights must be \"unit\" or {\"uniform\": [lo, hi]}");
}

} // namespace

std::uint64_t SeedPolicy::resolve(const Json& block, std::uint64_t offset) const {
    if (command_line)
        return *command_line + offset;
    if (block.contains("seed"))
        return unsigned_number(block, "seed", 0);
    return config_level.value_or(0) + offset;
}

Graph load_graph(const Json& config, const fs::path& base_dir, const SeedPolicy& seeds) {
    const int sources = count_present(config, {"graph", "graph_file", "random_graph"});
    if (sources != 1)
        bad("config needs exactly one of \"graph\", \"graph_file\", \"random_graph\"");
    if (config.contains("graph"))
        return graph_from_json(config.at("graph"));
    if (config.contains("graph_file")) {
        if (!config.at("graph_file").is_string())
            bad("graph_file must be a string");
        return graph_from_json(parse_json_file(resolve(base_dir, config.at("graph_file").get<std::string>()).string()));
    }
    const Json& rg = config.at("random_graph");
    require_object(rg, "random_graph");
    only_keys(rg, {"n", "p", "weights", "seed", "connected"}, "random_graph");
    if (!rg.contains("n") || !rg.contains("p"))
        bad("random_graph needs \"n\" and \"p\"");
    const auto n = static_cast<std::size_t>(unsigned_number(rg, "n", 0));
    const double p = number(rg, "p", 0.0);
    const WeightSpec w = weight_spec(rg);
    const std::uint64_t seed = seeds.resolve(rg, 0);
    bool connected = false;
    if (rg.contains("connected")) {
        if (!rg.at("connected").is_boolean())
            bad("connected must be true or false");
        connected = rg.at("connected").get<bool>();
    }
    return connected ? random_connected_graph(n, p, w, seed) : random_graph(n, p, w, seed);
}

StateVector load_state(const Json& config, const fs::path& base_dir, const SeedPolicy& seeds, std::size_t n) {
    const int sources = count_present(config, {"initial_state", "state_file", "random_state"});
    if (sources != 1)
        bad("config needs exactly one of \"initial_state\", \"state_file\", \"random_state\"");
    StateVector x;
    if (config.contains("initial_state")) {
        x = state_from_json(config.at("initial_state"));
    } else if (config.contains("state_file")) {
        if (!config.at("state_file").is_string())
            bad("state_file must be a string");
        x = state_from_json(parse_json_file(resolve(base_dir, config.at("state_file").get<std::string>()).string()));
    } else {
        const Json& rs = config.at("random_state");
        require_object(rs, "random_state");
        only_keys(rs, {"lo", "hi", "seed"}, "random_state");
        const double lo = number(rs, "lo", 0.0);
        const double hi = number(rs, "hi", 1.0);
        if (!(lo >= 0.0 && hi >= lo))
            throw Error(ErrorCode::InvalidArgument, "random_state needs 0 <= lo <= hi");
        Rng rng(seeds.resolve(rs, 1));
        x.resize(n);
        for (double& v : x)
            v = rng.uniform(lo, hi);
    }
    return admit_state(x, n);
}

std::string config_hash(const Json& config, std::optional<std::uint64_t> seed_override) {
    std::string text = config.dump();
    if (seed_override)
        text += "|seed=" + std::to_string(*seed_override);
    return hash_hex(text);
}

RunConfig run_config_from_json(const Json& config, const fs::path& base_dir,
                               std::optional<std::uint64_t> seed_override) {
    require_object(config, "config");
    only_keys(config,
              {"graph", "graph_file", "random_graph", "initial_state", "state_file", "random_state", "direction",
               "integrator", "interaction", "outputs", "seed"},
              "config");
    SeedPolicy seeds{seed_override, std::nullopt};
    if (config.contains("seed"))
        seeds.config_level = unsigned_number(config, "seed", 0);

    Graph g = load_graph(config, base_dir, seeds);
    StateVector x0 = load_state(config, base_dir, seeds, g.size());

    const std::string direction = text(config, "direction", "forward");
    if (direction != "forward" && direction != "reverse")
        bad("direction must be \"forward\" or \"reverse\"");

    OutputNames outputs;
    if (config.contains("outputs")) {
        const Json& o = config.at("outputs");
        require_object(o, "outputs");
        only_keys(o, {"trajectory_csv", "report", "svg"}, "outputs");
        outputs.trajectory_csv = text(o, "trajectory_csv", outputs.trajectory_csv);
        outputs.report = text(o, "report", outputs.report);
        outputs.svg = text(o, "svg", outputs.svg);
    }

    return RunConfig{std::move(g),
                     std::move(x0),
                     direction == "forward" ? Direction::forward : Direction::reverse,
                     options_from_json(config.value("integrator", Json())),
                     interaction_from_json(config.value("interaction", Json())),
                     outputs,
                     seeds.master(),
                     config_hash(config, seed_override)};
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g;
    if (count == 1) {
        g.push_back(lo);
        return g;
    }
    for (std::size_t k = 0; k < count; ++k)
        g.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
    return g;
}

SweepSpec parse_sweep(const std::string& s) {
    const auto first = s.find(':');
    const auto second = first == std::string::npos ? std::string::npos : s.find(':', first + 1);
    if (second == std::string::npos)
        bad("sweep must look like lo:hi:count");
    SweepSpec spec;
    try {
        std::size_t used = 0;
        const std::string a = s.substr(0, first);
        const std::string b = s.substr(first + 1, second - first - 1);
        const std::string c = s.substr(second + 1);
        spec.lo = std::stod(a, &used);
        if (used != a.size())
            bad("bad sweep lower bound");
        spec.hi = std::stod(b, &used);
        if (used != b.size())
            bad("bad sweep upper bound");
        const unsigned long long count = std::stoull(c, &used);
        if (used != c.size() || c.empty() || c[0] == '-')
            bad("bad sweep count");
        spec.count = static_cast<std::size_t>(count);
    } catch (const std::logic_error&) {
        bad("sweep must look like lo:hi:count");
    }
    if (spec.count == 0 || !(spec.lo >= 0.0) || !(spec.hi >= spec.lo))
        bad("sweep needs 0 <= lo <= hi and count >= 1");
    return spec;
}

OptimizeConfig optimize_config_from_json(const Json& config, const fs::path& base_dir,
                                         std::optional<std::uint64_t> seed_override) {
    require_object(config, "config");
    only_keys(config,
              {"graph", "graph_file", "random_graph", "initial_state", "state_file", "random_state", "alpha",
               "x_alpha0", "candidate_weight", "horizon", "integrator", "mode", "restarts", "threads", "sweep",
               "seed"},
              "config");
    SeedPolicy seeds{seed_override, std::nullopt};
    if (config.contains("seed"))
        seeds.config_level = unsigned_number(config, "seed", 0);

    Graph g = load_graph(config, base_dir, seeds);
    const StateVector x = load_state(config, base_dir, seeds, g.size());
    if (!config.contains("alpha"))
        bad("config needs \"alpha\"");
    const auto alpha = static_cast<NodeId>(unsigned_number(config, "alpha", 0));
    if (alpha >= g.size())
        throw Error(ErrorCode::IndexOutOfRange, "alpha is not a node of the graph");

    std::vector<double> others;
    for (NodeId i = 0; i < x.size(); ++i)
        if (i != alpha)
            others.push_back(x[i]);

    IntegratorOptions opts = options_from_json(config.value("integrator", Json()));
    OptimizeConfig out{OptimizeProblem{std::move(g), alpha, number(config, "candidate_weight", 1.0),
                                       std::move(others), number(config, "x_alpha0", x[alpha]),
                                       number(config, "horizon", 10.0), opts},
                       SearchMode::exhaustive, 8, 0, 0, std::nullopt, std::nullopt, {}};

    const std::string mode = text(config, "mode", "exhaustive");
    if (mode == "exhaustive")
        out.mode = SearchMode::exhaustive;
    else if (mode == "greedy")
        out.mode = SearchMode::greedy;
    else
        bad("mode must be \"exhaustive\" or \"greedy\"");
    out.restarts = static_cast<std::size_t>(unsigned_number(config, "restarts", 8));
    out.threads = static_cast<unsigned>(unsigned_number(config, "threads", 0));
    if (config.contains("sweep")) {
        const Json& s = config.at("sweep");
        if (s.is_string()) {
            out.sweep = parse_sweep(s.get<std::string>());
        } else {
            require_object(s, "sweep");
            only_keys(s, {"lo", "hi", "count"}, "sweep");
            SweepSpec spec;
            spec.lo = number(s, "lo", spec.lo);
            spec.hi = number(s, "hi", spec.hi);
            spec.count = static_cast<std::size_t>(unsigned_number(s, "count", spec.count));
            if (spec.count == 0 || !(spec.lo >= 0.0) || !(spec.hi >= spec.lo))
                bad("sweep needs 0 <= lo <= hi and count >= 1");
            out.sweep = spec;
        }
    }
    out.seed = seeds.master();
    out.search_seed = seeds.resolve(Json::object(), 2);
    out.config_hash = config_hash(config, seed_override);
    out.problem.validate();
    return out;
}

} // namespace wta::cli
