#include "wta/optimize.hpp"

#include "wta/error.hpp"
#include "wta/random.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace wta {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr std::size_t kChunk = 4096;

void check_candidates(const OptimizeProblem& p) {
    if (p.candidates() > kMaxCandidates)
        throw Error(ErrorCode::TooManyCandidates, std::to_string(p.candidates()) + " candidates exceed the limit of " +
                                                      std::to_string(kMaxCandidates) + "; use greedy search");
}

/// Fills values[mask] for every mask, splitting the range across threads.
std::vector<double> evaluate_all(const OptimizeProblem& p, unsigned threads) {
    const std::size_t count = std::size_t{1} << p.candidates();
    std::vector<double> values(count);
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, (count + kChunk - 1) / kChunk));

    if (threads <= 1) {
        for (std::size_t m = 0; m < count; ++m)
            values[m] = evaluate_choice(p, static_cast<OpponentMask>(m));
        return values;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        try {
            for (;;) {
                const std::size_t m = next.fetch_add(1);
                if (m >= count)
                    return;
                values[m] = evaluate_choice(p, static_cast<OpponentMask>(m));
            }
        } catch (...) {
            std::lock_guard lock(failure_lock);
            if (!failure)
                failure = std::current_exception();
            next.store(count);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return values;
}

/// Scans in mask order so the winner is the same for any thread count.
void reduce(OptimizeResult& result, std::span<const double> values, std::size_t candidates, bool keep_table) {
    MaskValue best{0, values[0]};
    double sum = 0.0;
    result.min_value = result.max_value = values[0];
    for (std::size_t m = 0; m < values.size(); ++m) {
        const MaskValue cur{static_cast<OpponentMask>(m), values[m]};
        if (keep_table)
            result.table.push_back(cur);
        if (better_choice(cur, best, candidates))
            best = cur;
        sum += cur.value;
        result.min_value = std::min(result.min_value, cur.value);
        result.max_value = std::max(result.max_value, cur.value);
    }
    result.best_mask = best.mask;
    result.best_value = best.value;
    result.evaluations = values.size();
    result.mean_value = sum / static_cast<double>(values.size());
    for (std::size_t m = 0; m < values.size(); ++m)
        if (m != best.mask && std::abs(values[m] - best.value) <= kTieTolerance)
            result.tie_break_applied = true;
}

} // namespace

std::vector<NodeId> OptimizeProblem::candidate_ids() const {
    std::vector<NodeId> ids;
    for (NodeId i = 0; i < base_graph.size(); ++i)
        if (i != alpha)
            ids.push_back(i);
    return ids;
}

StateVector OptimizeProblem::initial_state() const {
    StateVector x;
    x.reserve(base_graph.size());
    std::size_t k = 0;
    for (NodeId i = 0; i < base_graph.size(); ++i)
        x.push_back(i == alpha ? x_alpha0 : x0_others[k++]);
    return x;
}

double OptimizeProblem::total_mass() const {
    double s = x_alpha0;
    for (double v : x0_others)
        s += v;
    return s;
}

Graph OptimizeProblem::graph_for(OpponentMask mask) const {
    std::vector<Edge> edges;
    for (const Edge& e : base_graph.edges())
        if (e.i != alpha && e.j != alpha)
            edges.push_back(e);
    const std::vector<NodeId> ids = candidate_ids();
    for (std::size_t k = 0; k < ids.size(); ++k)
        if (mask & (OpponentMask{1} << k))
            edges.push_back({std::min(alpha, ids[k]), std::max(alpha, ids[k]), candidate_weight});
    return Graph(base_graph.size(), edges);
}

void OptimizeProblem::validate() const {
    if (alpha >= base_graph.size())
        throw Error(ErrorCode::IndexOutOfRange, "alpha " + std::to_string(alpha) + " outside the graph");
    if (x0_others.size() != candidates())
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(candidates()) +
                                                      " initial values for the other agents, got " +
                                                      std::to_string(x0_others.size()));
    for (double v : x0_others)
        if (!(v >= 0.0))
            throw Error(ErrorCode::NegativeState, "initial values must be nonnegative");
    if (!(x_alpha0 >= 0.0))
        throw Error(ErrorCode::NegativeState, "alpha's initial value must be nonnegative");
    if (!(horizon > 0.0))
        throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
    if (!(candidate_weight > 0.0))
        throw Error(ErrorCode::NonpositiveWeight, "candidate weight must be positive");
}

std::string mask_to_string(OpponentMask mask, std::size_t candidates) {
    std::string s(candidates, '0');
    for (std::size_t k = 0; k < candidates; ++k)
        if (mask & (OpponentMask{1} << k))
            s[k] = '1';
    return s;
}

bool better_choice(const MaskValue& a, const MaskValue& b, std::size_t candidates) {
    if (std::abs(a.value - b.value) > kTieTolerance)
        return a.value > b.value;
    const int bits_a = std::popcount(a.mask);
    const int bits_b = std::popcount(b.mask);
    if (bits_a != bits_b)
        return bits_a < bits_b;
    return mask_to_string(a.mask, candidates) < mask_to_string(b.mask, candidates);
}

double evaluate_choice(const OptimizeProblem& p, OpponentMask mask) {
    p.validate();
    if (p.candidates() < 32 && (mask >> p.candidates()) != 0)
        throw Error(ErrorCode::IndexOutOfRange, "mask has bits beyond the candidate count");
    const Graph g = p.graph_for(mask);
    IntegratorOptions opts = p.options;
    opts.t_end = p.horizon;
    const SimulationResult sim = simulate(g, p.initial_state(), opts);
    return sim.trajectory.final_state()[p.alpha];
}

OptimizeResult exhaustive_search(const OptimizeProblem& p, unsigned threads) {
    p.validate();
    check_candidates(p);
    OptimizeResult result;
    result.alpha = p.alpha;
    result.candidates = p.candidates();
    const std::vector<double> values = evaluate_all(p, threads);
    reduce(result, values, p.candidates(), p.candidates() <= kMaxTableCandidates);
    return result;
}

OptimizeResult greedy_search(const OptimizeProblem& p, std::size_t restarts, std::uint64_t seed) {
    p.validate();
    if (p.candidates() > 31)
        throw Error(ErrorCode::TooManyCandidates, "mask type holds at most 31 candidates");
    const std::size_t k = p.candidates();
    const std::uint64_t span = std::uint64_t{1} << k;

    std::map<OpponentMask, double> seen;
    auto value_of = [&](OpponentMask m) {
        auto it = seen.find(m);
        if (it == seen.end())
            it = seen.emplace(m, evaluate_choice(p, m)).first;
        return it->second;
    };

    Rng rng(seed);
    MaskValue best{0, value_of(0)};
    for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
        MaskValue cur;
        cur.mask = static_cast<OpponentMask>(rng.below(span));
        cur.value = value_of(cur.mask);
        for (;;) {
            MaskValue step = cur;
            for (std::size_t bit = 0; bit < k; ++bit) {
                const OpponentMask flipped = cur.mask ^ (OpponentMask{1} << bit);
                const MaskValue cand{flipped, value_of(flipped)};
                if (better_choice(cand, step, k))
                    step = cand;
            }
            if (step.mask == cur.mask)
                break;
            cur = step;
        }
        if (better_choice(cur, best, k))
            best = cur;
    }

    OptimizeResult result;
    result.alpha = p.alpha;
    result.candidates = k;
    result.heuristic = true;
    result.best_mask = best.mask;
    result.best_value = best.value;
    result.evaluations = seen.size();
    double sum = 0.0;
    result.min_value = result.max_value = best.value;
    for (const auto& [mask, value] : seen) {
        result.table.push_back({mask, value});
        sum += value;
        result.min_value = std::min(result.min_value, value);
        result.max_value = std::max(result.max_value, value);
        if (mask != best.mask && std::abs(value - best.value) <= kTieTolerance)
            result.tie_break_applied = true;
    }
    result.mean_value = sum / static_cast<double>(seen.size());
    return result;
}

SweepResult sweep_initial_value(const OptimizeProblem& p, const std::vector<double>& grid, unsigned threads) {
    p.validate();
    check_candidates(p);
    SweepResult out;
    out.candidates = p.candidates();
    out.grid = grid;
    for (double x : grid) {
        if (!(x >= 0.0))
            throw Error(ErrorCode::InvalidArgument, "grid values must be nonnegative");
        OptimizeProblem q = p;
        q.x_alpha0 = x;
        out.total_mass.push_back(q.total_mass());
        const std::vector<double> values = evaluate_all(q, threads);
        for (std::size_t m = 0; m < values.size(); ++m)
            out.points.push_back({x, static_cast<OpponentMask>(m), values[m]});
    }
    return out;
}

} // namespace wta
