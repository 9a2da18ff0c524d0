#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"

using namespace gsp;

namespace {

double total(const DiagState& s) {
    return std::accumulate(s.lam.begin(), s.lam.end(), 0.0);
}

DiagState random_state(const Graph& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DiagState s{g, std::vector<double>(size_t{1} << g.n)};
    for (auto& v : s.lam) v = u(rng);
    double t = total(s);
    for (auto& v : s.lam) v /= t;
    return s;
}

}  // namespace

TEST_CASE("white_noise_state puts f on the target and spreads the rest") {
    Graph r = ring_graph(5);
    DiagState s = white_noise_state(r, 0.8);
    CHECK(s.fidelity() == doctest::Approx(0.8));
    CHECK(s.lam[17] == doctest::Approx(0.2 / 31.0));
    CHECK(total(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(white_noise_state(r, 1.2));
}

TEST_CASE("x parameterization round trips and matches x_state") {
    Graph r = ring_graph(5);
    CHECK(x_to_fidelity(5, 0.2) == doctest::Approx(0.225).epsilon(1e-12));
    for (double x : {0.0, 0.1, 1.0 / 3.0, 0.9, 1.0})
        CHECK(fidelity_to_x(5, x_to_fidelity(5, x)) == doctest::Approx(x).epsilon(1e-12));
    DiagState s = x_state(r, 0.4);
    CHECK(s.fidelity() == doctest::Approx(x_to_fidelity(5, 0.4)).epsilon(1e-12));
    CHECK(s.lam[9] == doctest::Approx(0.6 / 32.0).epsilon(1e-12));
}

TEST_CASE("pauli_index_action flips the stabilizer signs the operator anticommutes with") {
    Graph r = ring_graph(5);
    CHECK(pauli_index_action(r, 'Z', 2) == 0b00100u);
    CHECK(pauli_index_action(r, 'X', 2) == 0b01010u);
    CHECK(pauli_index_action(r, 'Y', 2) == 0b01110u);
    CHECK_THROWS(pauli_index_action(r, 'W', 0));
}

TEST_CASE("apply_depolarizing is trace preserving and fixes the maximally mixed state") {
    Graph r = ring_graph(4);
    std::mt19937 rng(11);
    DiagState s = random_state(r, rng);
    for (double p : {0.0, 0.3, 0.97, 1.0}) {
        DiagState out = apply_depolarizing(s, 2, p);
        CHECK(total(out) == doctest::Approx(1.0).epsilon(1e-12));
    }
    DiagState same = apply_depolarizing(s, 1, 1.0);
    for (size_t mu = 0; mu < s.dim(); ++mu)
        CHECK(same.lam[mu] == doctest::Approx(s.lam[mu]).epsilon(1e-14));

    DiagState mixed = x_state(r, 0.0);
    DiagState still = apply_depolarizing(mixed, 3, 0.2);
    for (size_t mu = 0; mu < mixed.dim(); ++mu)
        CHECK(still.lam[mu] == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("fully depolarizing one qubit averages the four sign orbits") {
    Graph p2 = path_graph(2);
    DiagState s{p2, {0.5, 0.3, 0.1, 0.1}};
    DiagState out = apply_depolarizing(s, 0, 0.0);
    // orbit of any mu under {0, Z0=01, X0=10, Y0=11} is everything on 2 vertices
    for (size_t mu = 0; mu < 4; ++mu)
        CHECK(out.lam[mu] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("apply_depolarizing_masked hits every vertex in the mask once") {
    Graph r = ring_graph(5);
    std::mt19937 rng(12);
    DiagState s = random_state(r, rng);
    DiagState a = apply_depolarizing_masked(s, 0b01101u, 0.9);
    DiagState b = apply_depolarizing(apply_depolarizing(apply_depolarizing(s, 0, 0.9), 2, 0.9), 3, 0.9);
    for (size_t mu = 0; mu < s.dim(); ++mu)
        CHECK(a.lam[mu] == doctest::Approx(b.lam[mu]).epsilon(1e-13));
}

TEST_CASE("check_normalization repairs small drift and rejects large drift") {
    Graph p2 = path_graph(2);
    DiagState ok{p2, {0.25, 0.25, 0.25, 0.25 + 3e-8}};
    check_normalization(ok);
    CHECK(total(ok) == doctest::Approx(1.0).epsilon(1e-14));

    DiagState tiny{p2, {0.25, 0.25, 0.25, 0.25 + 1e-11}};
    check_normalization(tiny);
    CHECK(tiny.lam[0] == 0.25);  // below the repair threshold nothing moves

    DiagState broken{p2, {0.5, 0.5, 0.5, 0.5}};
    CHECK_THROWS(check_normalization(broken));
}

TEST_CASE("shannon_entropy_bits handles zeros and uniform distributions") {
    CHECK(shannon_entropy_bits({1.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(shannon_entropy_bits({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(shannon_entropy_bits({0.5, 0.5, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
}
