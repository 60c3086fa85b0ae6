#pragma once

#include "wta/graph.hpp"
#include "wta/matrix.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wta {

/// Nonnegative resource levels, one entry per agent.
using StateVector = std::vector<double>;

/// Components in [-kClampWindow, 0) are treated as round-off and set to zero;
/// anything below raises NegativeState.
inline constexpr double kClampWindow = 1e-12;

/// Checks length and sign, clamping round-off negatives.
/// Throws DimensionMismatch or NegativeState.
StateVector admit_state(std::span<const double> x, std::size_t n);

/// dx_i = sum_j a_ij (x_i - x_j) x_i x_j
StateVector vector_field(const Graph& g, std::span<const double> x);

/// Negation of vector_field, entry by entry.
StateVector reverse_vector_field(const Graph& g, std::span<const double> y);

/// State-dependent Laplacian with l_ij = -a_ij y_i y_j off the diagonal and
/// rows summing to zero, so that reverse_vector_field(g, y) == -L y.
using LaplacianMatrix = SquareMatrix;
LaplacianMatrix laplacian(const Graph& g, std::span<const double> y);

/// Replacement interaction terms: a_ij f(x_i - x_j) g(x_i, x_j).
///
/// f must be odd with f(a) > 0 for a > 0; g must be symmetric and vanish
/// when either argument is zero.  These are checked by sampling, see
/// check_interactions.
struct InteractionSpec {
    std::string f_name = "identity";
    std::string g_name = "product";
    std::function<double(double)> f = [](double a) { return a; };
    std::function<double(double, double)> g = [](double u, double v) { return u * v; };

    static InteractionSpec standard() { return {}; }

    /// Built-ins:
    ///   f: "identity" a, "cubic" a^3, "tanh" tanh(a)
    ///   g: "product" u v, "scaled_product" g_scale * u * v
    /// Throws InvalidArgument for unknown names or g_scale <= 0.
    static InteractionSpec builtin(const std::string& f_name, const std::string& g_name, double g_scale = 1.0);
};

StateVector generalized_vector_field(const Graph& g, std::span<const double> x, const InteractionSpec& spec);

struct InteractionReport {
    bool passed = true;
    std::size_t samples_checked = 0;
    /// Empty when passed; otherwise one of f_odd, f_positive, g_symmetric,
    /// g_boundary.
    std::string violation;
    std::string detail;
};

/// Samples points in [lo, hi] and checks the hypotheses on f and g.
/// Violations are reported, never thrown; invalid arguments throw.
InteractionReport check_interactions(const InteractionSpec& spec, std::size_t samples, double lo, double hi,
                                     std::uint64_t seed);

enum class Direction { forward, reverse };

/// Right-hand side bound to a graph, for use inside integrators.  Does no
/// sign checking: Runge-Kutta stages may legitimately leave the orthant.
/// The graph must outlive this object.
class Dynamics {
public:
    explicit Dynamics(const Graph& g, Direction direction = Direction::forward,
                      std::optional<InteractionSpec> spec = std::nullopt);

    void operator()(std::span<const double> x, std::span<double> dx) const;

    /// Upper bound on the 1-norm of the Jacobian at x, which also bounds its
    /// spectral radius.  Analytic for the standard interaction, central
    /// differences otherwise.
    double jacobian_bound(std::span<const double> x) const;

    const Graph& graph() const noexcept { return *graph_; }
    Direction direction() const noexcept { return direction_; }
    std::size_t size() const noexcept { return graph_->size(); }

private:
    const Graph* graph_;
    Direction direction_;
    std::optional<InteractionSpec> spec_;
};

} // namespace wta
