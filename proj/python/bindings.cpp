#include "wta/analysis.hpp"
#include "wta/cli/commands.hpp"
#include "wta/cli/experiments.hpp"
#include "wta/dynamics.hpp"
#include "wta/error.hpp"
#include "wta/graph.hpp"
#include "wta/integrate.hpp"
#include "wta/io.hpp"
#include "wta/optimize.hpp"

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/gil_safe_call_once.h>
#include <pybind11/stl.h>

#include <sstream>
#include <tuple>

namespace py = pybind11;
using namespace wta;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
    if (o.is_none())
        return Json();
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Graph make_graph(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
    std::vector<Edge> list;
    for (const auto& [i, j, w] : edges)
        list.push_back({i, j, w});
    return Graph(n, list);
}

WeightSpec weights_from(const std::optional<std::pair<double, double>>& range) {
    return range ? WeightSpec::uniform(range->first, range->second) : WeightSpec::unit();
}

std::vector<std::vector<double>> rows(const SquareMatrix& m) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto r = m.row(i);
        out.emplace_back(r.begin(), r.end());
    }
    return out;
}

SquareMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> values;
    for (const auto& r : rows) {
        if (r.size() != n)
            throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
        values.insert(values.end(), r.begin(), r.end());
    }
    return SquareMatrix(n, values);
}

Direction direction_from(const std::string& s) {
    if (s == "forward")
        return Direction::forward;
    if (s == "reverse")
        return Direction::reverse;
    throw Error(ErrorCode::InvalidArgument, "direction must be \"forward\" or \"reverse\"");
}

py::dict simulation_dict(const SimulationResult& r) {
    const Trajectory& t = r.trajectory;
    py::dict d;
    d["times"] = t.times;
    d["states"] = t.states;
    d["mass"] = t.mass;
    d["entropy"] = t.entropy;
    d["max"] = t.max;
    d["min"] = t.min;
    d["residual"] = t.residual;
    d["audit"] = to_python(to_json(r.audit));
    d["steps"] = r.steps;
    d["halvings"] = r.halvings;
    d["substeps"] = r.substeps;
    d["stopped_on_equilibrium"] = r.stopped_on_equilibrium;
    d["direction"] = t.direction == Direction::forward ? "forward" : "reverse";
    return d;
}

OptimizeProblem problem_from(const Graph& g, NodeId alpha, const std::vector<double>& x0, double horizon,
                             double candidate_weight, const IntegratorOptions& options) {
    if (x0.size() != g.size())
        throw Error(ErrorCode::DimensionMismatch, "x0 must give every agent's initial value");
    if (alpha >= g.size())
        throw Error(ErrorCode::IndexOutOfRange, "alpha is not a node of the graph");
    std::vector<double> others;
    for (NodeId i = 0; i < x0.size(); ++i)
        if (i != alpha)
            others.push_back(x0[i]);
    return OptimizeProblem{g, alpha, candidate_weight, others, x0[alpha], horizon, options};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Winners-take-all network dynamics";
    m.attr("__version__") = kVersion;

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::object(py::exception<Error>(m, "WtaError", PyExc_RuntimeError)); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object& type = error_type.get_stored();
            py::object exc = type(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(type.ptr(), exc.ptr());
        }
    });

    py::class_<Graph>(m, "Graph")
        .def(py::init(&make_graph), py::arg("n"), py::arg("edges") = std::vector<std::tuple<NodeId, NodeId, double>>{})
        .def_property_readonly("n", &Graph::size)
        .def("__len__", &Graph::size)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("weight", &Graph::weight)
        .def("edges",
             [](const Graph& g) {
                 std::vector<std::tuple<NodeId, NodeId, double>> out;
                 for (const Edge& e : g.edges())
                     out.emplace_back(e.i, e.j, e.weight);
                 return out;
             })
        .def("neighbors",
             [](const Graph& g, NodeId i) {
                 if (i >= g.size())
                     throw Error(ErrorCode::IndexOutOfRange, "node out of range");
                 std::vector<std::pair<NodeId, double>> out;
                 for (const Neighbor& nb : g.neighbors(i))
                     out.emplace_back(nb.id, nb.weight);
                 return out;
             })
        .def("to_json", [](const Graph& g) { return to_python(graph_to_json(g)); })
        .def_static("from_json", [](const py::object& o) { return graph_from_json(from_python(o)); })
        .def("hash", [](const Graph& g) { return graph_hash(g); })
        .def(py::self == py::self)
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.size()) + ", edges=" + std::to_string(g.edge_count()) + ")";
        });

    m.def("random_graph", [](std::size_t n, double p, std::uint64_t seed, std::optional<std::pair<double, double>> w) {
        return random_graph(n, p, weights_from(w), seed);
    }, py::arg("n"), py::arg("p"), py::arg("seed"), py::arg("weights") = py::none());
    m.def("random_connected_graph",
          [](std::size_t n, double p, std::uint64_t seed, std::optional<std::pair<double, double>> w) {
              return random_connected_graph(n, p, weights_from(w), seed);
          },
          py::arg("n"), py::arg("p"), py::arg("seed"), py::arg("weights") = py::none());
    m.def("connected_components", [](const Graph& g) {
        std::vector<std::vector<NodeId>> out;
        for (const NodeSet& s : connected_components(g))
            out.emplace_back(s.begin(), s.end());
        return out;
    });
    m.def("is_connected", &is_connected);
    m.def("is_independent_set",
          [](const Graph& g, const std::vector<NodeId>& s) { return is_independent_set(g, NodeSet(s)); });
    m.def("induced_subgraph", [](const Graph& g, const std::vector<NodeId>& s) {
        Subgraph sub = induced_subgraph(g, NodeSet(s));
        return std::make_pair(std::move(sub.graph), sub.original_ids);
    });

    m.def("vector_field", [](const Graph& g, const std::vector<double>& x) { return vector_field(g, x); });
    m.def("reverse_vector_field", [](const Graph& g, const std::vector<double>& y) { return reverse_vector_field(g, y); });
    m.def("laplacian", [](const Graph& g, const std::vector<double>& y) { return rows(laplacian(g, y)); });

    py::class_<IntegratorOptions>(m, "IntegratorOptions")
        .def(py::init([](const py::kwargs& kw) {
            Json j = Json::object();
            for (const auto& [k, v] : kw)
                j[k.cast<std::string>()] = from_python(py::reinterpret_borrow<py::object>(v));
            return options_from_json(j);
        }))
        .def_readwrite("dt", &IntegratorOptions::dt)
        .def_readwrite("t_end", &IntegratorOptions::t_end)
        .def_readwrite("record_stride", &IntegratorOptions::record_stride)
        .def_readwrite("stop_on_equilibrium", &IntegratorOptions::stop_on_equilibrium)
        .def_readwrite("equilibrium_threshold", &IntegratorOptions::equilibrium_threshold)
        .def_readwrite("positivity_shrink", &IntegratorOptions::positivity_shrink)
        .def_readwrite("stability_control", &IntegratorOptions::stability_control)
        .def("to_dict", [](const IntegratorOptions& o) { return to_python(options_to_json(o)); });

    m.def("simulate",
          [](const Graph& g, const std::vector<double>& x0, std::optional<IntegratorOptions> options,
             const std::string& direction, const py::object& interaction) {
              const auto spec = interaction_from_json(from_python(interaction));
              return simulation_dict(simulate(Dynamics(g, direction_from(direction), spec), x0,
                                              options.value_or(IntegratorOptions{})));
          },
          py::arg("graph"), py::arg("x0"), py::arg("options") = py::none(), py::arg("direction") = "forward",
          py::arg("interaction") = py::none());

    m.def("entropy", [](const std::vector<double>& x) { return entropy(x); });
    m.def("classify",
          [](const Graph& g, const std::vector<double>& x, double zero_tol, double equal_tol) {
              return to_python(to_json(classify_equilibrium(g, x, zero_tol, equal_tol)));
          },
          py::arg("graph"), py::arg("x"), py::arg("zero_tol") = 1e-8, py::arg("equal_tol") = 1e-6);
    m.def("symmetric_eigenvalues",
          [](const std::vector<std::vector<double>>& rows) { return symmetric_eigenvalues(matrix_from(rows)); });
    m.def("linearize",
          [](const Graph& g, const std::vector<double>& x, std::size_t component) {
              const EquilibriumReport rep = classify_equilibrium(g, x);
              return to_python(to_json(linearize_at(g, rep, component)));
          },
          py::arg("graph"), py::arg("x"), py::arg("component") = 0);
    m.def("escape",
          [](const Graph& g, const std::vector<double>& x, std::optional<double> delta, std::uint64_t seed, double t_end,
             double dt) {
              EscapeOptions o;
              o.delta = delta;
              o.seed = seed;
              o.t_end = t_end;
              o.dt = dt;
              return to_python(to_json(perturb_and_escape(g, x, o)));
          },
          py::arg("graph"), py::arg("x"), py::arg("delta") = py::none(), py::arg("seed") = 0, py::arg("t_end") = 50.0,
          py::arg("dt") = 1e-3);

    m.def("exhaustive_search",
          [](const Graph& g, NodeId alpha, const std::vector<double>& x0, double horizon, double candidate_weight,
             unsigned threads) {
              const OptimizeProblem p = problem_from(g, alpha, x0, horizon, candidate_weight, {});
              py::gil_scoped_release release;
              const OptimizeResult r = exhaustive_search(p, threads);
              py::gil_scoped_acquire acquire;
              return to_python(to_json(r));
          },
          py::arg("graph"), py::arg("alpha"), py::arg("x0"), py::arg("horizon") = 10.0,
          py::arg("candidate_weight") = 1.0, py::arg("threads") = 0);
    m.def("greedy_search",
          [](const Graph& g, NodeId alpha, const std::vector<double>& x0, double horizon, double candidate_weight,
             std::size_t restarts, std::uint64_t seed) {
              const OptimizeProblem p = problem_from(g, alpha, x0, horizon, candidate_weight, {});
              return to_python(to_json(greedy_search(p, restarts, seed)));
          },
          py::arg("graph"), py::arg("alpha"), py::arg("x0"), py::arg("horizon") = 10.0,
          py::arg("candidate_weight") = 1.0, py::arg("restarts") = 8, py::arg("seed") = 0);
    m.def("evaluate_choice",
          [](const Graph& g, NodeId alpha, const std::vector<double>& x0, OpponentMask mask, double horizon,
             double candidate_weight) {
              return evaluate_choice(problem_from(g, alpha, x0, horizon, candidate_weight, {}), mask);
          },
          py::arg("graph"), py::arg("alpha"), py::arg("x0"), py::arg("mask"), py::arg("horizon") = 10.0,
          py::arg("candidate_weight") = 1.0);
    m.def("sweep_initial_value",
          [](const Graph& g, NodeId alpha, const std::vector<double>& x0, const std::vector<double>& grid,
             double horizon, unsigned threads) {
              const OptimizeProblem p = problem_from(g, alpha, x0, horizon, 1.0, {});
              const SweepResult r = sweep_initial_value(p, grid, threads);
              py::dict d;
              d["candidates"] = r.candidates;
              d["grid"] = r.grid;
              d["total_mass"] = r.total_mass;
              std::vector<std::tuple<double, OpponentMask, double>> points;
              for (const SweepPoint& pt : r.points)
                  points.emplace_back(pt.x_alpha0, pt.mask, pt.final_value);
              d["points"] = points;
              return d;
          },
          py::arg("graph"), py::arg("alpha"), py::arg("x0"), py::arg("grid"), py::arg("horizon") = 10.0,
          py::arg("threads") = 0);

    m.def("nine_agent_instance", [](std::uint64_t seed) {
        cli::NineAgentInstance inst = cli::nine_agent_instance(seed);
        py::dict d;
        d["graph"] = inst.graph;
        d["x0"] = inst.x0;
        d["alpha"] = inst.alpha;
        d["horizon"] = inst.horizon;
        return d;
    }, py::arg("seed") = 1);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
    });
}
