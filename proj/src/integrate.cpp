#include "wta/integrate.hpp"

#include "wta/analysis.hpp"
#include "wta/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wta {

namespace {

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

double total(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

/// Owns the stage buffers so repeated steps do not allocate.
class Stepper {
public:
    Stepper(const Dynamics& dynamics, Method method, int max_halvings)
        : dyn_(dynamics), method_(method), max_halvings_(max_halvings), n_(dynamics.size()),
          k1_(n_), k2_(n_), k3_(n_), k4_(n_), stage_(n_), out_(n_) {}

    /// k1 must hold the field at x.  Writes the result into x.
    StepResult advance(StateVector& x, std::span<const double> k1, double dt) {
        double h = dt;
        for (int halvings = 0;; ++halvings) {
            attempt(x, k1, h);
            const double lowest = *std::min_element(out_.begin(), out_.end());
            if (lowest >= -kClampWindow) {
                for (double& v : out_)
                    if (v < 0.0)
                        v = 0.0;
                x.swap(out_);
                return {{}, h, halvings};
            }
            if (halvings == max_halvings_)
                throw Error(ErrorCode::PositivityFailure,
                            "component reached " + std::to_string(lowest) + " after " +
                                std::to_string(max_halvings_) + " step halvings");
            h *= 0.5;
        }
    }

private:
    void attempt(std::span<const double> x, std::span<const double> k1, double h) {
        if (method_ == Method::euler) {
            for (std::size_t i = 0; i < n_; ++i)
                out_[i] = x[i] + h * k1[i];
            return;
        }
        const double half = 0.5 * h;
        for (std::size_t i = 0; i < n_; ++i)
            stage_[i] = x[i] + half * k1[i];
        dyn_(stage_, k2_);
        for (std::size_t i = 0; i < n_; ++i)
            stage_[i] = x[i] + half * k2_[i];
        dyn_(stage_, k3_);
        for (std::size_t i = 0; i < n_; ++i)
            stage_[i] = x[i] + h * k3_[i];
        dyn_(stage_, k4_);
        const double sixth = h / 6.0;
        for (std::size_t i = 0; i < n_; ++i)
            out_[i] = x[i] + sixth * (k1[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    const Dynamics& dyn_;
    Method method_;
    int max_halvings_;
    std::size_t n_;
    StateVector k1_, k2_, k3_, k4_, stage_, out_;
};

std::size_t step_count(double t_end, double dt) {
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest))
        return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(ratio));
}

void record(Trajectory& traj, double t, const StateVector& x, double residual) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.mass.push_back(total(x));
    traj.entropy.push_back(entropy(x));
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    traj.max.push_back(*hi);
    traj.min.push_back(*lo);
    traj.residual.push_back(residual);
}

} // namespace

void IntegratorOptions::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
    if (record_stride < 1)
        throw Error(ErrorCode::InvalidArgument, "record_stride must be at least 1");
    if (!(equilibrium_threshold > 0.0))
        throw Error(ErrorCode::InvalidArgument, "equilibrium threshold must be positive");
    if (positivity_shrink < 0)
        throw Error(ErrorCode::InvalidArgument, "positivity_shrink must be nonnegative");
}

StepResult step(const Dynamics& dynamics, std::span<const double> x, double dt, Method method, int max_halvings) {
    if (!(dt > 0.0))
        throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    StateVector state = admit_state(x, dynamics.size());
    StateVector k1(state.size());
    dynamics(state, k1);
    Stepper stepper(dynamics, method, max_halvings);
    StepResult r = stepper.advance(state, k1, dt);
    r.state = std::move(state);
    return r;
}

StepResult step(const Graph& g, std::span<const double> x, double dt, Method method, int max_halvings) {
    return step(Dynamics(g), x, dt, method, max_halvings);
}

SimulationResult simulate(const Dynamics& dynamics, std::span<const double> x0, const IntegratorOptions& options) {
    options.validate();
    const std::size_t n = dynamics.size();
    StateVector x = admit_state(x0, n);

    SimulationResult result;
    Trajectory& traj = result.trajectory;
    traj.graph_hash = graph_hash(dynamics.graph());
    traj.options = options;
    traj.direction = dynamics.direction();

    const double mass0 = total(x);
    result.audit.initial_mass = mass0;

    StateVector dx(n);
    dynamics(x, dx);
    double residual = sup_norm(dx);
    record(traj, 0.0, x, residual);

    double t_reached = 0.0;
    if (options.stop_on_equilibrium && residual < options.equilibrium_threshold) {
        result.stopped_on_equilibrium = true;
    } else {
        Stepper stepper(dynamics, options.method, options.positivity_shrink);
        const double limit = options.method == Method::rk4 ? 2.5 : 1.0;
        const std::size_t total_steps = step_count(options.t_end, options.dt);
        for (std::size_t k = 1; k <= total_steps; ++k) {
            const double t_prev = static_cast<double>(k - 1) * options.dt;
            const double t_k = k == total_steps ? options.t_end : static_cast<double>(k) * options.dt;
            double remaining = t_k - t_prev;
            bool fresh = true;
            while (remaining > 0.0) {
                if (!fresh)
                    dynamics(x, dx);
                double h = remaining;
                if (options.stability_control) {
                    const double cap = limit / dynamics.jacobian_bound(x);
                    if (h > cap) {
                        const double pieces = std::ceil(remaining / cap);
                        h = remaining / pieces;
                        ++result.substeps;
                    }
                }
                const StepResult r = stepper.advance(x, dx, h);
                result.halvings += static_cast<std::size_t>(r.halvings);
                remaining -= r.dt_used;
                fresh = false;
            }
            ++result.steps;
            t_reached = t_k;

            const double mass = total(x);
            result.audit.max_abs_drift = std::max(result.audit.max_abs_drift, std::abs(mass - mass0));
            if (options.conservation == ConservationMode::renormalize && mass > 0.0) {
                const double scale = mass0 / mass;
                for (double& v : x)
                    v *= scale;
            }

            dynamics(x, dx);
            residual = sup_norm(dx);
            const bool at_equilibrium = options.stop_on_equilibrium && residual < options.equilibrium_threshold;
            if (k % options.record_stride == 0 || k == total_steps || at_equilibrium)
                record(traj, t_k, x, residual);
            if (at_equilibrium) {
                result.stopped_on_equilibrium = true;
                break;
            }
        }
    }
    result.audit.drift_per_unit_time = t_reached > 0.0 ? result.audit.max_abs_drift / t_reached : 0.0;
    return result;
}

SimulationResult simulate(const Graph& g, std::span<const double> x0, const IntegratorOptions& options,
                          const std::optional<InteractionSpec>& spec) {
    return simulate(Dynamics(g, Direction::forward, spec), x0, options);
}

SimulationResult simulate_reverse(const Graph& g, std::span<const double> y0, const IntegratorOptions& options,
                                  const std::optional<InteractionSpec>& spec) {
    return simulate(Dynamics(g, Direction::reverse, spec), y0, options);
}

} // namespace wta
