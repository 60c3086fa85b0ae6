#include "helpers.hpp"
#include "oracles.hpp"

#include "wta/analysis.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

using namespace wta;
using namespace wta::testing;

namespace {

SquareMatrix random_symmetric(std::size_t n, Rng& rng) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            m(i, j) = m(j, i) = rng.uniform(-5.0, 5.0);
    return m;
}

} // namespace

TEST_CASE("entropy") {
    CHECK(entropy(std::vector{0.4, 0.4, 0.4}) == 0.0);
    CHECK(entropy(std::vector{1.0, 0.0}) == 0.25);
    CHECK(entropy(std::vector{1.0, 0.0, 0.0, 0.0}) == 0.1875);
    CHECK_WTA_ERROR(entropy(std::vector<double>{}), ErrorCode::EmptyState);

    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_state(1 + rng.below(50), 0.0, 3.0, rng.next());
        const double alpha = rng.uniform(0.1, 10.0);
        std::vector<double> scaled(x);
        for (double& v : scaled)
            v *= alpha;
        CHECK(entropy(scaled) == doctest::Approx(alpha * alpha * entropy(x)).epsilon(1e-12));
    }
}

TEST_CASE("classification examples") {
    const EquilibriumReport s = classify_equilibrium(path3(), std::vector{1.0, 0.0, 1.0});
    CHECK(s.cls == EquilibriumClass::stable_set);
    CHECK(s.winners == NodeSet{0, 2});
    CHECK(s.losers == NodeSet{1});
    CHECK(s.residual == 0.0);

    const EquilibriumReport u = classify_equilibrium(single_edge(), std::vector{1.7, 1.7});
    CHECK(u.cls == EquilibriumClass::unstable_set);
    CHECK(u.winners == NodeSet{0, 1});
    REQUIRE(u.winner_components.size() == 1);
    CHECK(u.winner_components[0].value == 1.7);

    const EquilibriumReport origin = classify_equilibrium(triangle(), std::vector{0.0, 0.0, 0.0});
    CHECK(origin.cls == EquilibriumClass::stable_set);
    CHECK(origin.winners.empty());

    const EquilibriumReport moving = classify_equilibrium(single_edge(), std::vector{2.0, 1.0});
    CHECK(moving.cls == EquilibriumClass::not_equilibrium);
    CHECK(moving.residual == 2.0);

    CHECK(to_string(EquilibriumClass::stable_set) == "E_s");
    CHECK(to_string(EquilibriumClass::unstable_set) == "E_u");
    CHECK_WTA_ERROR(classify_equilibrium(single_edge(), std::vector{1.0}), ErrorCode::DimensionMismatch);
}

TEST_CASE("adjacent winners at nearly equal values are not forced into the set") {
    // residual (1e-3 * 1 * 1.001) is small but the pair disagrees by 1e-3
    const Graph g = single_edge(1e-4);
    const EquilibriumReport r = classify_equilibrium(g, std::vector{1.001, 1.0});
    CHECK(r.residual < 1e-6);
    CHECK(r.cls == EquilibriumClass::not_equilibrium);
}

TEST_CASE("classification recovers constructed equilibria") {
    Rng rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(20);
        const Graph g = random_graph(n, rng.uniform(0.1, 0.7), WeightSpec::uniform(0.5, 2.0), rng.next());
        std::vector<NodeId> picked;
        for (NodeId i = 0; i < n; ++i)
            if (rng.bernoulli(0.5))
                picked.push_back(i);
        const NodeSet winners(picked);
        std::vector<double> x(n, 0.0);
        bool shared_edge = false;
        if (!winners.empty()) {
            const Subgraph sub = induced_subgraph(g, winners);
            shared_edge = sub.graph.edge_count() > 0;
            for (const NodeSet& comp : connected_components(sub.graph)) {
                const double c = rng.uniform(1e-7, 5.0);
                for (NodeId k : comp)
                    x[sub.original_ids[k]] = c;
            }
        }
        const EquilibriumReport r = classify_equilibrium(g, x);
        CHECK(r.winners == winners);
        CHECK(r.cls == (shared_edge ? EquilibriumClass::unstable_set : EquilibriumClass::stable_set));
        if (r.cls == EquilibriumClass::stable_set)
            CHECK(is_independent_set(g, r.winners));
    }
}

TEST_CASE("symmetric eigenvalues") {
    CHECK(symmetric_eigenvalues(SquareMatrix(3, {3, 0, 0, 0, 1, 0, 0, 0, 2})) == std::vector{1.0, 2.0, 3.0});
    const auto two = symmetric_eigenvalues(SquareMatrix(2, {1, -1, -1, 1}));
    CHECK(two[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(two[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(symmetric_eigenvalues(SquareMatrix(4)) == std::vector<double>(4, 0.0));
    CHECK_WTA_ERROR(symmetric_eigenvalues(SquareMatrix(2, {1, 2, 3, 1})), ErrorCode::NotSymmetric);
}

TEST_CASE("eigenvalues match closed forms and preserve the trace") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const SquareMatrix m2 = random_symmetric(2, rng);
        const auto e2 = symmetric_eigenvalues(m2);
        const auto r2 = eig2(m2);
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(e2[k] - r2[k]) <= 1e-10);

        const SquareMatrix m3 = random_symmetric(3, rng);
        const auto e3 = symmetric_eigenvalues(m3);
        const auto r3 = eig3(m3);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(e3[k] - r3[k]) <= 1e-10);

        const SquareMatrix big = random_symmetric(2 + rng.below(40), rng);
        const auto eb = symmetric_eigenvalues(big);
        double sum = 0.0;
        for (double v : eb)
            sum += v;
        CHECK(std::abs(sum - big.trace()) <= 1e-10 * big.frobenius_norm());
        CHECK(std::is_sorted(eb.begin(), eb.end()));
    }
}

TEST_CASE("linearization at E_u points") {
    SUBCASE("single edge, c = 1.5") {
        const Graph g = single_edge();
        const auto r = classify_equilibrium(g, std::vector{1.5, 1.5});
        const SpectrumReport s = linearize_at(g, r, 0);
        CHECK(s.matrix == SquareMatrix(2, {2.25, -2.25, -2.25, 2.25}));
        CHECK(std::abs(s.eigenvalues[0]) <= 1e-12);
        CHECK(s.eigenvalues[1] == doctest::Approx(4.5).epsilon(1e-12));
        CHECK(s.verdict == Verdict::unstable);
    }
    SUBCASE("triangle and path") {
        const auto kt = linearize_at(triangle(), classify_equilibrium(triangle(), std::vector{1.0, 1.0, 1.0}), 0);
        const auto kt_ref = eig3(kt.matrix);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(kt.eigenvalues[k] - kt_ref[k]) <= 1e-10);
            CHECK(std::abs(kt.eigenvalues[k] - std::array{0.0, 3.0, 3.0}[k]) <= 1e-10);
        }
        const auto pt = linearize_at(path3(), classify_equilibrium(path3(), std::vector{1.0, 1.0, 1.0}), 0);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(pt.eigenvalues[k] - std::array{0.0, 1.0, 3.0}[k]) <= 1e-10);
        CHECK(pt.verdict == Verdict::unstable);
    }
    SUBCASE("component selection and errors") {
        // two winner groups: {0, 1} at 2 and the isolated winner 3 at 1
        const Graph g(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
        const auto r = classify_equilibrium(g, std::vector{2.0, 2.0, 0.0, 1.0});
        REQUIRE(r.cls == EquilibriumClass::unstable_set);
        REQUIRE(r.winner_components.size() == 2);
        CHECK(linearize_at(g, r, 0).eigenvalues.size() == 2);
        CHECK_WTA_ERROR(linearize_at(g, r, 1), ErrorCode::ComponentTooSmall);
        CHECK_WTA_ERROR(linearize_at(g, r, 2), ErrorCode::IndexOutOfRange);
        CHECK_WTA_ERROR(linearize_at(path3(), classify_equilibrium(path3(), std::vector{1.0, 0.0, 1.0}), 0),
                        ErrorCode::NotEu);
    }
}

TEST_CASE("E_u spectra have exactly one zero eigenvalue") {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 2 + rng.below(15);
        const Graph g = random_connected_graph(m, 0.4, WeightSpec::unit(), rng.next());
        const double c = rng.uniform(0.2, 3.0);
        const auto spec = linearize_at(g, classify_equilibrium(g, std::vector<double>(m, c)), 0);
        const auto zeros = std::count_if(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                                         [](double v) { return v < 1e-10; });
        CHECK(zeros == 1);
        CHECK(spec.verdict == Verdict::unstable);
    }
}

TEST_CASE("perturbations escape E_u points") {
    SUBCASE("single edge") {
        EscapeOptions o;
        o.delta = 1e-4;
        o.seed = 1;
        const EscapeReport r = perturb_and_escape(single_edge(), std::vector{1.0, 1.0}, o);
        CHECK(r.escaped);
        const bool first_wins = std::abs(r.final_state[0] - 2.0) <= 1e-4 && std::abs(r.final_state[1]) <= 1e-4;
        const bool second_wins = std::abs(r.final_state[1] - 2.0) <= 1e-4 && std::abs(r.final_state[0]) <= 1e-4;
        CHECK((first_wins || second_wins));
        CHECK(r.final_report.cls == EquilibriumClass::stable_set);
        CHECK(r.perturbed[0] + r.perturbed[1] == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("triangle") {
        EscapeOptions o;
        o.seed = 9;
        const EscapeReport r = perturb_and_escape(triangle(), std::vector{1.0, 1.0, 1.0}, o);
        CHECK(r.escaped);
        CHECK(r.final_report.cls == EquilibriumClass::stable_set);
        REQUIRE(r.final_report.winners.size() == 1);
        CHECK(r.final_state[r.final_report.winners[0]] == doctest::Approx(3.0).epsilon(1e-6));
    }
    SUBCASE("no perturbation, no escape") {
        EscapeOptions o;
        o.delta = 0.0;
        const EscapeReport r = perturb_and_escape(single_edge(), std::vector{1.0, 1.0}, o);
        CHECK_FALSE(r.escaped);
        CHECK(r.final_state == std::vector{1.0, 1.0});
    }
    SUBCASE("requires an E_u point") {
        CHECK_WTA_ERROR(perturb_and_escape(path3(), std::vector{1.0, 0.0, 1.0}), ErrorCode::NotEu);
    }
}
