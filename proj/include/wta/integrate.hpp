#pragma once

#include "wta/dynamics.hpp"
#include "wta/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wta {

enum class Method { rk4, euler };
enum class ConservationMode { audit, renormalize };

struct IntegratorOptions {
    double dt = 1e-3;
    Method method = Method::rk4;
    double t_end = 1.0;
    std::size_t record_stride = 1;
    bool stop_on_equilibrium = false;
    /// Stop once the sup-norm of the field drops below this.
    double equilibrium_threshold = 1e-10;
    ConservationMode conservation = ConservationMode::audit;
    /// Maximum number of times one step may be halved to stay nonnegative.
    int positivity_shrink = 40;
    /// Split a step into substeps so that h * ||J||_1 stays below the
    /// method's stability limit (2.5 for rk4, 1 for euler).
    bool stability_control = true;

    /// Throws InvalidArgument.
    void validate() const;
};

struct StepResult {
    StateVector state;
    double dt_used;
    int halvings;
};

/// One explicit step of the given dynamics.
///
/// A step that would push a component below -kClampWindow is retried at
/// half the length, at most max_halvings times; round-off negatives inside
/// the clamp window are zeroed.  The returned state advanced by dt_used.
/// Throws PositivityFailure when halving runs out.
StepResult step(const Dynamics& dynamics, std::span<const double> x, double dt, Method method,
                int max_halvings = 40);
StepResult step(const Graph& g, std::span<const double> x, double dt, Method method, int max_halvings = 40);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<double> mass;
    std::vector<double> entropy;
    std::vector<double> max;
    std::vector<double> min;
    /// Sup-norm of the field at each stamp.
    std::vector<double> residual;

    std::uint64_t graph_hash = 0;
    IntegratorOptions options;
    std::optional<std::uint64_t> seed;
    Direction direction = Direction::forward;

    std::size_t size() const noexcept { return times.size(); }
    const StateVector& final_state() const { return states.back(); }
};

struct ConservationAudit {
    double initial_mass = 0.0;
    /// Largest |sum x(t) - sum x(0)| over every step, recorded or not.  In
    /// renormalize mode this is measured before the correction.
    double max_abs_drift = 0.0;
    double drift_per_unit_time = 0.0;
};

struct SimulationResult {
    Trajectory trajectory;
    ConservationAudit audit;
    bool stopped_on_equilibrium = false;
    std::size_t steps = 0;
    std::size_t halvings = 0;
    /// Extra substeps taken for stability control.
    std::size_t substeps = 0;
};

/// Integrates dx/dt = f(x) from t = 0.  Stamps are k * dt computed from the
/// step count; the last step is shortened to land on t_end.
SimulationResult simulate(const Graph& g, std::span<const double> x0, const IntegratorOptions& options,
                          const std::optional<InteractionSpec>& spec = std::nullopt);

/// Integrates dy/dtau = -f(y) from tau = 0, the same dynamics in negative
/// time.  Stamps are reported as tau >= 0.
SimulationResult simulate_reverse(const Graph& g, std::span<const double> y0, const IntegratorOptions& options,
                                  const std::optional<InteractionSpec>& spec = std::nullopt);

SimulationResult simulate(const Dynamics& dynamics, std::span<const double> x0, const IntegratorOptions& options);

} // namespace wta
