#include "helpers.hpp"

#include "wta/optimize.hpp"

#include <doctest.h>

#include <bit>

using namespace wta;
using namespace wta::testing;

namespace {

OptimizeProblem pair_problem(double x_alpha0, double other, double horizon) {
    OptimizeProblem p{Graph(2, std::span<const Edge>{})};
    p.alpha = 0;
    p.x0_others = {other};
    p.x_alpha0 = x_alpha0;
    p.horizon = horizon;
    return p;
}

OptimizeProblem random_problem(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    OptimizeProblem p{random_graph(n, 0.4, WeightSpec::unit(), rng.next())};
    p.alpha = rng.below(n);
    p.x0_others = random_state(n - 1, 0.3, 1.0, rng.next());
    p.x_alpha0 = rng.uniform(0.3, 1.0);
    p.horizon = 5.0;
    p.options.stop_on_equilibrium = true;
    return p;
}

} // namespace

TEST_CASE("mask layout") {
    OptimizeProblem p{Graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}})};
    p.alpha = 2;
    p.x0_others = {0.1, 0.2, 0.3};
    p.x_alpha0 = 0.9;
    CHECK(p.candidate_ids() == std::vector<NodeId>{0, 1, 3});
    CHECK(p.initial_state() == std::vector{0.1, 0.2, 0.9, 0.3});
    // bit 0 -> agent 0, bit 2 -> agent 3; alpha's original edges are dropped
    const Graph g = p.graph_for(0b101);
    CHECK(g.weight(2, 0) == 1.0);
    CHECK(g.weight(2, 1) == 0.0);
    CHECK(g.weight(2, 3) == 1.0);
    CHECK(g.weight(0, 1) == 1.0);
    CHECK(mask_to_string(0b101, 3) == "101");
    CHECK(mask_to_string(0b001, 3) == "100");
}

TEST_CASE("evaluate choice") {
    const OptimizeProblem p = pair_problem(2.0, 1.0, 10.0);
    CHECK(evaluate_choice(p, 0) == 2.0);
    CHECK(evaluate_choice(p, 1) == doctest::Approx(3.0).epsilon(1e-6));

    const OptimizeProblem big = random_problem(7, 3);
    for (OpponentMask m = 0; m < 64; m += 7) {
        const double v = evaluate_choice(big, m);
        CHECK(v >= 0.0);
        CHECK(v <= big.total_mass() + 1e-6);
        CHECK(v == evaluate_choice(big, m));
    }
    CHECK(evaluate_choice(big, 0) == big.x_alpha0);
    CHECK_WTA_ERROR(evaluate_choice(big, 1u << 6), ErrorCode::IndexOutOfRange);
}

TEST_CASE("exhaustive search on two agents") {
    const OptimizeResult r = exhaustive_search(pair_problem(2.0, 1.0, 10.0));
    REQUIRE(r.table.size() == 2);
    CHECK(r.table[0].value == 2.0);
    CHECK(r.table[1].value == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(r.best_mask == 1);
    CHECK(r.evaluations == 2);

    const OptimizeResult lose = exhaustive_search(pair_problem(0.5, 1.0, 20.0));
    CHECK(lose.best_mask == 0);
    CHECK(lose.best_value == 0.5);
    CHECK(lose.table[1].value < 1e-6);
}

TEST_CASE("inert opponents give a tie resolved to the empty mask") {
    OptimizeProblem p = random_problem(6, 5);
    p.x0_others.assign(5, 0.0);
    const OptimizeResult r = exhaustive_search(p);
    for (const MaskValue& mv : r.table)
        CHECK(mv.value == p.x_alpha0);
    CHECK(r.best_mask == 0);
    CHECK(r.tie_break_applied);
}

TEST_CASE("tie breaking") {
    CHECK(better_choice({0b011, 1.0}, {0b100, 0.5}, 3));
    // equal values: fewer bits first, then the smaller bit string
    CHECK(better_choice({0b001, 1.0}, {0b011, 1.0 + 1e-13}, 3));
    CHECK(better_choice({0b100, 1.0}, {0b001, 1.0}, 3));  // "001" < "100"
    CHECK_FALSE(better_choice({0b001, 1.0}, {0b100, 1.0}, 3));
}

TEST_CASE("exhaustive search is independent of the thread count") {
    const OptimizeProblem p = random_problem(8, 12);
    const OptimizeResult one = exhaustive_search(p, 1);
    const OptimizeResult four = exhaustive_search(p, 4);
    CHECK(one.best_mask == four.best_mask);
    CHECK(one.best_value == four.best_value);
    REQUIRE(one.table.size() == four.table.size());
    for (std::size_t k = 0; k < one.table.size(); ++k) {
        CHECK(one.table[k].mask == four.table[k].mask);
        CHECK(one.table[k].value == four.table[k].value);
    }
    // table entries reproduce individually
    for (std::size_t k = 0; k < one.table.size(); k += 17)
        CHECK(evaluate_choice(p, one.table[k].mask) == one.table[k].value);
    double top = 0.0;
    for (const MaskValue& mv : one.table)
        top = std::max(top, mv.value);
    CHECK(one.best_value == top);
    CHECK(one.best_value <= p.total_mass() + 1e-6);
}

TEST_CASE("candidate guard") {
    OptimizeProblem p{Graph(26, std::span<const Edge>{})};
    p.x0_others.assign(25, 0.5);
    p.x_alpha0 = 0.5;
    CHECK_WTA_ERROR(exhaustive_search(p), ErrorCode::TooManyCandidates);
    CHECK_WTA_ERROR(sweep_initial_value(p, {0.5}), ErrorCode::TooManyCandidates);
}

TEST_CASE("greedy search") {
    const OptimizeResult two = greedy_search(pair_problem(2.0, 1.0, 10.0), 3, 1);
    CHECK(two.best_mask == 1);
    CHECK(two.heuristic);

    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const OptimizeProblem p = random_problem(7, 100 + seed);
        const OptimizeResult exact = exhaustive_search(p);
        const OptimizeResult a = greedy_search(p, 4, seed);
        const OptimizeResult b = greedy_search(p, 4, seed);
        CHECK(a.best_mask == b.best_mask);
        CHECK(a.best_value == b.best_value);
        CHECK(a.evaluations == b.evaluations);
        CHECK(a.best_value <= exact.best_value + 1e-12);
    }
}

TEST_CASE("initial value sweep") {
    const OptimizeProblem p = random_problem(5, 77);
    const SweepResult s = sweep_initial_value(p, {0.0, 0.5, 1.0});
    CHECK(s.points.size() == 3 * 16);
    for (const SweepPoint& pt : s.points) {
        if (pt.x_alpha0 == 0.0)
            CHECK(pt.final_value == 0.0);
        CHECK(pt.final_value >= 0.0);
    }
    for (std::size_t g = 0; g < 3; ++g)
        for (std::size_t m = 0; m < 16; ++m)
            CHECK(s.points[g * 16 + m].final_value <= s.total_mass[g] + 1e-6);
    CHECK_WTA_ERROR(sweep_initial_value(p, {-0.1}), ErrorCode::InvalidArgument);
}
