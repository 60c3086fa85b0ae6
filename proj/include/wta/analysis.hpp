#pragma once

#include "wta/dynamics.hpp"
#include "wta/graph.hpp"
#include "wta/integrate.hpp"
#include "wta/matrix.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace wta {

/// Population variance (1/n) sum (x_i - mean)^2, two-pass.  Throws EmptyState.
double entropy(std::span<const double> x);

enum class EquilibriumClass { stable_set, unstable_set, not_equilibrium };

/// "E_s", "E_u", "not_equilibrium".
std::string_view to_string(EquilibriumClass c) noexcept;

struct WinnerComponent {
    NodeSet members;
    /// Mean of the members' values.
    double value;
};

struct EquilibriumReport {
    NodeSet winners;
    NodeSet losers;
    EquilibriumClass cls = EquilibriumClass::not_equilibrium;
    double residual = 0.0;
    std::vector<WinnerComponent> winner_components;
    double zero_tol = 1e-8;
    double equal_tol = 1e-6;
};

/// Splits agents into losers (below zero_tol) and winners and decides whether
/// x is a winners-take-all equilibrium:
///  - not_equilibrium when the field residual is at least 1e-6 * (1 + max x),
///    or when some connected group of winners disagrees by more than
///    equal_tol * max(1, c) around its mean c;
///  - E_u when two winners share an edge;
///  - E_s otherwise (winners form an independent set).
EquilibriumReport classify_equilibrium(const Graph& g, std::span<const double> x, double zero_tol = 1e-8,
                                       double equal_tol = 1e-6);

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi
/// rotations.  Throws NotSymmetric.
std::vector<double> symmetric_eigenvalues(const SquareMatrix& m);

enum class Verdict { unstable, inconclusive };
std::string_view to_string(Verdict v) noexcept;

struct SpectrumReport {
    NodeSet subgraph;
    double value = 0.0;
    /// c^2 times the Laplacian of the winner component.
    SquareMatrix matrix;
    std::vector<double> eigenvalues;
    Verdict verdict = Verdict::inconclusive;
};

/// Linearization of the dynamics restricted to one connected group of equal
/// winners around its common value c: d/dt dx = c^2 L dx, L the graph
/// Laplacian of the group.  Unstable when the second-smallest eigenvalue
/// exceeds 1e-10.  Throws NotEu, ComponentTooSmall, IndexOutOfRange.
SpectrumReport linearize_at(const Graph& g, const EquilibriumReport& report, std::size_t component_index);

struct EscapeOptions {
    /// Perturbation size; defaults to 1e-4 times the largest value.
    std::optional<double> delta;
    std::uint64_t seed = 0;
    double t_end = 50.0;
    double dt = 1e-3;
};

struct EscapeReport {
    bool escaped = false;
    double delta = 0.0;
    /// Largest sup-norm distance from the equilibrium along the run.
    double max_deviation = 0.0;
    /// First stamp where the distance exceeded 100 delta, if it did.
    std::optional<double> escape_time;
    StateVector perturbed;
    StateVector final_state;
    EquilibriumReport final_report;
};

/// Nudges the winners of an E_u point by a zero-sum perturbation of size
/// delta and integrates forward, recording whether the trajectory moves
/// more than 100 delta away.  Throws NotEu.
EscapeReport perturb_and_escape(const Graph& g, std::span<const double> x_eq, const EscapeOptions& options = {});

} // namespace wta
