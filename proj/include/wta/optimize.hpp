#pragma once

#include "wta/graph.hpp"
#include "wta/integrate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wta {

/// Bit k selects the k-th agent other than alpha, in increasing id order.
using OpponentMask = std::uint32_t;

inline constexpr std::size_t kMaxCandidates = 24;
inline constexpr std::size_t kMaxTableCandidates = 16;

/// Choose which agents alpha competes with so that x_alpha(T) is largest.
struct OptimizeProblem {
    /// Edges among the other agents are kept; edges touching alpha are
    /// replaced by the mask.
    Graph base_graph;
    NodeId alpha = 0;
    double candidate_weight = 1.0;
    /// Initial values of every agent but alpha, in increasing id order.
    std::vector<double> x0_others;
    double x_alpha0 = 0.0;
    double horizon = 10.0;
    IntegratorOptions options;

    std::size_t candidates() const noexcept { return base_graph.size() - 1; }
    /// Ids of the agents behind each mask bit.
    std::vector<NodeId> candidate_ids() const;
    StateVector initial_state() const;
    double total_mass() const;
    Graph graph_for(OpponentMask mask) const;

    /// Throws IndexOutOfRange, DimensionMismatch, NegativeState, InvalidArgument.
    void validate() const;
};

/// "1" at position k when candidate k is an opponent.
std::string mask_to_string(OpponentMask mask, std::size_t candidates);

struct MaskValue {
    OpponentMask mask;
    double value;
};

struct OptimizeResult {
    NodeId alpha = 0;
    std::size_t candidates = 0;
    OpponentMask best_mask = 0;
    double best_value = 0.0;
    /// Every evaluated mask, in mask order; left empty by exhaustive search
    /// above kMaxTableCandidates candidates.
    std::vector<MaskValue> table;
    std::size_t evaluations = 0;
    bool tie_break_applied = false;
    bool heuristic = false;
    /// Streamed over all evaluations, whether or not the table is kept.
    double min_value = 0.0;
    double max_value = 0.0;
    double mean_value = 0.0;
};

/// x_alpha(T) for one opponent choice.
double evaluate_choice(const OptimizeProblem& p, OpponentMask mask);

/// Masks compare by value; values within 1e-12 count as tied, and ties go to
/// fewer opponents, then to the lexicographically smaller bit string.
bool better_choice(const MaskValue& a, const MaskValue& b, std::size_t candidates);

/// Evaluates all 2^(n-1) masks.  threads == 0 uses the hardware concurrency;
/// the result does not depend on the thread count.  Throws TooManyCandidates.
OptimizeResult exhaustive_search(const OptimizeProblem& p, unsigned threads = 0);

/// Best-improvement hill climbing over single-bit flips from `restarts`
/// random masks.
OptimizeResult greedy_search(const OptimizeProblem& p, std::size_t restarts, std::uint64_t seed);

struct SweepPoint {
    double x_alpha0;
    OpponentMask mask;
    double final_value;
};

struct SweepResult {
    std::size_t candidates = 0;
    std::vector<double> grid;
    /// Sum of all initial values at each grid point.
    std::vector<double> total_mass;
    /// Grid-major, masks ascending within a grid point.
    std::vector<SweepPoint> points;
};

/// Exhaustive evaluation at every alpha starting value in the grid.
/// Throws InvalidArgument for negative grid values, TooManyCandidates.
SweepResult sweep_initial_value(const OptimizeProblem& p, const std::vector<double>& grid, unsigned threads = 0);

} // namespace wta
