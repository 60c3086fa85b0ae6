#include "wta/dynamics.hpp"

#include "wta/error.hpp"
#include "wta/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wta {

namespace {

// a_ij * f * g with f = (x_i - x_j), g = (x_i * x_j); the grouping matches
// generalized_field_into so the default interaction reproduces it bit for bit.
void field_into(const Graph& g, std::span<const double> x, std::span<double> dx) {
    for (NodeId i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(i))
            acc += nb.weight * (x[i] - x[nb.id]) * (x[i] * x[nb.id]);
        dx[i] = acc;
    }
}

void generalized_field_into(const Graph& g, std::span<const double> x, std::span<double> dx,
                            const InteractionSpec& spec) {
    for (NodeId i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(i))
            acc += nb.weight * spec.f(x[i] - x[nb.id]) * spec.g(x[i], x[nb.id]);
        dx[i] = acc;
    }
}

std::string sample_text(std::initializer_list<double> values) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (double v : values) {
        os << (first ? "" : ", ") << v;
        first = false;
    }
    return os.str();
}

} // namespace

StateVector admit_state(std::span<const double> x, std::size_t n) {
    if (x.size() != n)
        throw Error(ErrorCode::DimensionMismatch,
                    "state has length " + std::to_string(x.size()) + ", graph has " + std::to_string(n) + " nodes");
    StateVector out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (std::isnan(out[i]) || out[i] < -kClampWindow)
            throw Error(ErrorCode::NegativeState, "x[" + std::to_string(i) + "] = " + std::to_string(out[i]));
        if (out[i] < 0.0)
            out[i] = 0.0;
    }
    return out;
}

StateVector vector_field(const Graph& g, std::span<const double> x) {
    const StateVector state = admit_state(x, g.size());
    StateVector dx(g.size());
    field_into(g, state, dx);
    return dx;
}

StateVector reverse_vector_field(const Graph& g, std::span<const double> y) {
    StateVector dy = vector_field(g, y);
    for (double& v : dy)
        v = -v;
    return dy;
}

LaplacianMatrix laplacian(const Graph& g, std::span<const double> y) {
    const std::size_t n = g.size();
    if (y.size() != n)
        throw Error(ErrorCode::DimensionMismatch,
                    "state has length " + std::to_string(y.size()) + ", graph has " + std::to_string(n) + " nodes");
    LaplacianMatrix lap(n);
    for (NodeId i = 0; i < n; ++i) {
        double diag = 0.0;
        for (const Neighbor& nb : g.neighbors(i)) {
            const double off = -nb.weight * (y[i] * y[nb.id]);
            lap(i, nb.id) = off;
            diag -= off;
        }
        lap(i, i) = diag;
    }
    return lap;
}

InteractionSpec InteractionSpec::builtin(const std::string& f_name, const std::string& g_name, double g_scale) {
    InteractionSpec spec;
    spec.f_name = f_name;
    spec.g_name = g_name;
    if (f_name == "identity")
        spec.f = [](double a) { return a; };
    else if (f_name == "cubic")
        spec.f = [](double a) { return a * a * a; };
    else if (f_name == "tanh")
        spec.f = [](double a) { return std::tanh(a); };
    else
        throw Error(ErrorCode::InvalidArgument, "unknown interaction f '" + f_name + "'");

    if (g_name == "product") {
        spec.g = [](double u, double v) { return u * v; };
    } else if (g_name == "scaled_product") {
        if (!(g_scale > 0.0))
            throw Error(ErrorCode::InvalidArgument, "g_scale must be positive");
        spec.g_name = "scaled_product(" + sample_text({g_scale}) + ")";
        spec.g = [g_scale](double u, double v) { return g_scale * u * v; };
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown interaction g '" + g_name + "'");
    }
    return spec;
}

StateVector generalized_vector_field(const Graph& g, std::span<const double> x, const InteractionSpec& spec) {
    const StateVector state = admit_state(x, g.size());
    StateVector dx(g.size());
    generalized_field_into(g, state, dx, spec);
    return dx;
}

InteractionReport check_interactions(const InteractionSpec& spec, std::size_t samples, double lo, double hi,
                                     std::uint64_t seed) {
    if (samples == 0)
        throw Error(ErrorCode::InvalidArgument, "need at least one sample");
    if (!(lo >= 0.0 && hi >= lo))
        throw Error(ErrorCode::InvalidArgument, "sample range must satisfy 0 <= lo <= hi");

    constexpr double tol = 1e-12;
    InteractionReport report;
    Rng rng(seed);
    auto fail = [&report](const char* kind, std::string detail) {
        report.passed = false;
        report.violation = kind;
        report.detail = std::move(detail);
        return report;
    };
    for (std::size_t k = 0; k < samples; ++k) {
        const double a = rng.uniform(lo, hi);
        const double u = rng.uniform(lo, hi);
        const double v = rng.uniform(lo, hi);
        report.samples_checked = k + 1;

        const double fa = spec.f(a);
        const double fm = spec.f(-a);
        if (!(std::abs(fa + fm) <= tol * std::max(1.0, std::abs(fa))))
            return fail("f_odd", "f(a) + f(-a) != 0 at a = " + sample_text({a}) + ": " + sample_text({fa, fm}));
        if (a > 0.0 && !(fa > 0.0))
            return fail("f_positive", "f(a) <= 0 at a = " + sample_text({a}));

        const double guv = spec.g(u, v);
        const double gvu = spec.g(v, u);
        if (!(std::abs(guv - gvu) <= tol * std::max(1.0, std::abs(guv))))
            return fail("g_symmetric", "g(u, v) != g(v, u) at (u, v) = (" + sample_text({u, v}) + ")");
        if (!(std::abs(spec.g(0.0, u)) <= tol) || !(std::abs(spec.g(u, 0.0)) <= tol))
            return fail("g_boundary", "g(0, a) or g(a, 0) nonzero at a = " + sample_text({u}));
    }
    return report;
}

Dynamics::Dynamics(const Graph& g, Direction direction, std::optional<InteractionSpec> spec)
    : graph_(&g), direction_(direction), spec_(std::move(spec)) {}

void Dynamics::operator()(std::span<const double> x, std::span<double> dx) const {
    if (spec_)
        generalized_field_into(*graph_, x, dx, *spec_);
    else
        field_into(*graph_, x, dx);
    if (direction_ == Direction::reverse)
        for (double& v : dx)
            v = -v;
}

double Dynamics::jacobian_bound(std::span<const double> x) const {
    const Graph& g = *graph_;
    std::vector<double> column(g.size(), 0.0);
    for (NodeId i = 0; i < g.size(); ++i) {
        for (const Neighbor& nb : g.neighbors(i)) {
            const double xi = x[i];
            const double xj = x[nb.id];
            double d_self = 0.0;
            double d_other = 0.0;
            if (!spec_) {
                d_self = nb.weight * (2.0 * xi * xj - xj * xj);
                d_other = nb.weight * (xi * xi - 2.0 * xi * xj);
            } else {
                auto h = [&](double u, double v) { return nb.weight * spec_->f(u - v) * spec_->g(u, v); };
                const double ei = 1e-6 * std::max(1.0, std::abs(xi));
                const double ej = 1e-6 * std::max(1.0, std::abs(xj));
                d_self = (h(xi + ei, xj) - h(xi - ei, xj)) / (2.0 * ei);
                d_other = (h(xi, xj + ej) - h(xi, xj - ej)) / (2.0 * ej);
            }
            column[i] += std::abs(d_self);
            column[nb.id] += std::abs(d_other);
        }
    }
    double bound = 0.0;
    for (double c : column)
        if (std::isfinite(c))
            bound = std::max(bound, c);
        else
            return std::numeric_limits<double>::infinity();
    return bound;
}

} // namespace wta
