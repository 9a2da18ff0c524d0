#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsp/analysis.hpp"
#include "gsp/breeding.hpp"
#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"

using namespace gsp;

TEST_CASE("bit_marginal reads the sign-bit distribution") {
    Graph r = ring5();
    DiagState s = x_state(r, 0.4);
    for (int i = 0; i < 5; ++i) {
        BitMarginal m = bit_marginal(s, i);
        CHECK(m.a1 == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(m.a0 + m.a1 == doctest::Approx(1.0).epsilon(1e-12));
    }
    BitMarginal pure = bit_marginal(white_noise_state(r, 1.0), 2);
    CHECK(pure.a1 == doctest::Approx(0.0));
}

TEST_CASE("binary_entropy endpoints and symmetry") {
    CHECK(binary_entropy({1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(binary_entropy({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(binary_entropy({0.2, 0.8}) == doctest::Approx(binary_entropy({0.8, 0.2})).epsilon(1e-12));
}

TEST_CASE("a perfect state breeds with unit yield") {
    Graph r = ring5();
    Coloring c = ring5_coloring();
    CHECK(breeding_yield(white_noise_state(r, 1.0), c) == doctest::Approx(1.0));
}

TEST_CASE("the ring yield curve is monotone above f = 0.8") {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.8 + 0.005 * i);
    auto rows = ring_yield_curve(grid);
    REQUIRE(rows.size() == grid.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].f == doctest::Approx(grid[i]));
        REQUIRE(rows[i].s_max.size() == 3);
    }
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].y > rows[i - 1].y);
    CHECK(rows.back().y == doctest::Approx(1.0));
}

TEST_CASE("ring yield rows match breeding_yield on white noise") {
    Graph r = ring5();
    Coloring c = ring5_coloring();
    auto rows = ring_yield_curve({0.9, 0.99});
    for (const auto& row : rows)
        CHECK(row.y == doctest::Approx(breeding_yield(white_noise_state(r, row.f), c)).epsilon(1e-12));
}

TEST_CASE("the yield crosses 2/3 just below f = 0.988") {
    Graph r = ring5();
    Coloring c = ring5_coloring();
    auto margin = [&](double f) { return breeding_yield(white_noise_state(r, f), c) - 2.0 / 3.0; };
    double lo = 0.95, hi = 1.0;
    REQUIRE(margin(lo) < 0.0);
    REQUIRE(margin(hi) > 0.0);
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (margin(mid) < 0.0 ? lo : hi) = mid;
    }
    double crossing = 0.5 * (lo + hi);
    CHECK(crossing == doctest::Approx(0.987677).epsilon(1e-4));
    CHECK(crossing > 0.987);
    CHECK(crossing < 0.989);
}
