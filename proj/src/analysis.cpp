#include "wta/analysis.hpp"

#include "wta/error.hpp"
#include "wta/random.hpp"

#include <algorithm>
#include <cmath>

namespace wta {

double entropy(std::span<const double> x) {
    if (x.empty())
        throw Error(ErrorCode::EmptyState, "entropy of an empty state");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= n;
    // corrected two-pass: the second sum cancels the rounding left in the mean
    double squares = 0.0;
    double deviations = 0.0;
    for (double v : x) {
        squares += (v - mean) * (v - mean);
        deviations += v - mean;
    }
    return std::max(0.0, (squares - deviations * deviations / n) / n);
}

std::string_view to_string(EquilibriumClass c) noexcept {
    switch (c) {
    case EquilibriumClass::stable_set: return "E_s";
    case EquilibriumClass::unstable_set: return "E_u";
    case EquilibriumClass::not_equilibrium: return "not_equilibrium";
    }
    return "unknown";
}

std::string_view to_string(Verdict v) noexcept { return v == Verdict::unstable ? "unstable" : "inconclusive"; }

EquilibriumReport classify_equilibrium(const Graph& g, std::span<const double> x, double zero_tol, double equal_tol) {
    if (!(zero_tol > 0.0) || !(equal_tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    const StateVector state = admit_state(x, g.size());

    EquilibriumReport report;
    report.zero_tol = zero_tol;
    report.equal_tol = equal_tol;

    std::vector<NodeId> winners, losers;
    for (NodeId i = 0; i < state.size(); ++i)
        (state[i] < zero_tol ? losers : winners).push_back(i);
    report.winners = NodeSet(std::move(winners));
    report.losers = NodeSet(std::move(losers));

    double max_value = 0.0;
    for (double v : state)
        max_value = std::max(max_value, v);
    for (double v : vector_field(g, state))
        report.residual = std::max(report.residual, std::abs(v));

    bool agree = true;
    bool winner_edge = false;
    if (!report.winners.empty()) {
        const Subgraph sub = induced_subgraph(g, report.winners);
        for (const NodeSet& local : connected_components(sub.graph)) {
            std::vector<NodeId> members;
            double c = 0.0;
            for (NodeId k : local) {
                members.push_back(sub.original_ids[k]);
                c += state[sub.original_ids[k]];
            }
            c /= static_cast<double>(members.size());
            for (NodeId id : members)
                if (std::abs(state[id] - c) > equal_tol * std::max(1.0, c))
                    agree = false;
            if (members.size() >= 2)
                winner_edge = true;
            report.winner_components.push_back({NodeSet(std::move(members)), c});
        }
    }

    if (report.residual >= 1e-6 * (1.0 + max_value) || !agree)
        report.cls = EquilibriumClass::not_equilibrium;
    else if (winner_edge)
        report.cls = EquilibriumClass::unstable_set;
    else
        report.cls = EquilibriumClass::stable_set;
    return report;
}

std::vector<double> symmetric_eigenvalues(const SquareMatrix& m) {
    const std::size_t n = m.size();
    const double norm = m.frobenius_norm();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12 * norm)
                throw Error(ErrorCode::NotSymmetric, "entries (" + std::to_string(i) + ", " + std::to_string(j) +
                                                         ") and its transpose differ");

    SquareMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + m(j, i));

    auto off_norm = [&a, n] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    const double target = 1e-12 * norm;
    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q)
                        continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = c * arp - s * arq;
                    a(r, q) = a(q, r) = s * arp + c * arq;
                }
            }
        }
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a(i, i);
    std::sort(out.begin(), out.end());
    return out;
}

SpectrumReport linearize_at(const Graph& g, const EquilibriumReport& report, std::size_t component_index) {
    if (report.cls != EquilibriumClass::unstable_set)
        throw Error(ErrorCode::NotEu, std::string("state is classified ") + std::string(to_string(report.cls)));
    if (component_index >= report.winner_components.size())
        throw Error(ErrorCode::IndexOutOfRange, "winner component " + std::to_string(component_index) + " of " +
                                                    std::to_string(report.winner_components.size()));
    const WinnerComponent& comp = report.winner_components[component_index];
    if (comp.members.size() < 2)
        throw Error(ErrorCode::ComponentTooSmall, "winner component has a single agent");

    const Graph sub = induced_subgraph(g, comp.members).graph;
    const std::size_t m = sub.size();
    const double c2 = comp.value * comp.value;

    SpectrumReport out;
    out.subgraph = comp.members;
    out.value = comp.value;
    out.matrix = SquareMatrix(m);
    for (NodeId i = 0; i < m; ++i) {
        double degree = 0.0;
        for (const Neighbor& nb : sub.neighbors(i)) {
            out.matrix(i, nb.id) = -c2 * nb.weight;
            degree += nb.weight;
        }
        out.matrix(i, i) = c2 * degree;
    }
    out.eigenvalues = symmetric_eigenvalues(out.matrix);
    out.verdict = out.eigenvalues[1] > 1e-10 ? Verdict::unstable : Verdict::inconclusive;
    return out;
}

EscapeReport perturb_and_escape(const Graph& g, std::span<const double> x_eq, const EscapeOptions& options) {
    const StateVector base = admit_state(x_eq, g.size());
    const EquilibriumReport report = classify_equilibrium(g, base);
    if (report.cls != EquilibriumClass::unstable_set)
        throw Error(ErrorCode::NotEu, std::string("state is classified ") + std::string(to_string(report.cls)));

    double max_value = 0.0;
    double min_winner = INFINITY;
    for (NodeId i : report.winners) {
        max_value = std::max(max_value, base[i]);
        min_winner = std::min(min_winner, base[i]);
    }
    const double delta = options.delta.value_or(1e-4 * max_value);
    if (!(delta >= 0.0) || delta >= min_winner)
        throw Error(ErrorCode::InvalidArgument, "perturbation size must lie in [0, smallest winner value)");

    EscapeReport out;
    out.delta = delta;
    out.perturbed = base;

    // zero-sum direction over the winners, scaled to sup-norm delta
    Rng rng(options.seed);
    std::vector<double> direction;
    double mean = 0.0;
    for (std::size_t k = 0; k < report.winners.size(); ++k) {
        direction.push_back(rng.uniform(-1.0, 1.0));
        mean += direction.back();
    }
    mean /= static_cast<double>(direction.size());
    double peak = 0.0;
    for (double& d : direction) {
        d -= mean;
        peak = std::max(peak, std::abs(d));
    }
    if (peak > 0.0 && delta > 0.0)
        for (std::size_t k = 0; k < report.winners.size(); ++k)
            out.perturbed[report.winners[k]] += delta * direction[k] / peak;

    IntegratorOptions opts;
    opts.dt = options.dt;
    opts.t_end = options.t_end;
    opts.stop_on_equilibrium = true;
    const SimulationResult sim = simulate(g, out.perturbed, opts);

    const double threshold = 100.0 * delta;
    for (std::size_t s = 0; s < sim.trajectory.size(); ++s) {
        double dev = 0.0;
        const StateVector& xs = sim.trajectory.states[s];
        for (std::size_t i = 0; i < xs.size(); ++i)
            dev = std::max(dev, std::abs(xs[i] - base[i]));
        out.max_deviation = std::max(out.max_deviation, dev);
        if (!out.escape_time && dev > threshold)
            out.escape_time = sim.trajectory.times[s];
    }
    out.escaped = out.escape_time.has_value();
    out.final_state = sim.trajectory.final_state();
    out.final_report = classify_equilibrium(g, out.final_state);
    return out;
}

} // namespace wta
