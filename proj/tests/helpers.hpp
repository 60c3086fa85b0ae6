#pragma once

#include "wta/error.hpp"
#include "wta/graph.hpp"
#include "wta/random.hpp"

#include <doctest.h>

#include <vector>

namespace wta::testing {

#define CHECK_WTA_ERROR(expr, expected_code)                                                                 \
    do {                                                                                                     \
        bool thrown_ = false;                                                                                \
        try {                                                                                                \
            (void)(expr);                                                                                    \
        } catch (const ::wta::Error& e_) {                                                                   \
            thrown_ = true;                                                                                  \
            CHECK_MESSAGE(e_.code() == (expected_code), e_.what());                                          \
        }                                                                                                    \
        CHECK_MESSAGE(thrown_, "expected " #expected_code);                                                  \
    } while (0)

inline Graph path3() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }
inline Graph triangle() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }
inline Graph single_edge(double w = 1.0) { return Graph(2, {{0, 1, w}}); }

inline std::vector<double> random_state(std::size_t n, double lo, double hi, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x)
        v = rng.uniform(lo, hi);
    return x;
}

} // namespace wta::testing
