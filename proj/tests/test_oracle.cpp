#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"
#include "gsp/oracle.hpp"

using namespace gsp;
using oracle::Dense;

namespace {

DiagState random_state(const Graph& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DiagState s{g, std::vector<double>(size_t{1} << g.n)};
    double t = 0;
    for (auto& v : s.lam) t += (v = u(rng));
    for (auto& v : s.lam) v /= t;
    return s;
}

}  // namespace

TEST_CASE("graph_basis_amps on a single vertex and one edge") {
    Graph one = build_graph(1, {});
    auto plus = oracle::graph_basis_amps(one, 0);
    CHECK(plus[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(plus[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    auto minus = oracle::graph_basis_amps(one, 1);
    CHECK(minus[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(minus[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));

    Graph edge = build_graph(2, {{0, 1}});
    auto bell = oracle::graph_basis_amps(edge, 0);
    CHECK(bell[0] == doctest::Approx(0.5));
    CHECK(bell[1] == doctest::Approx(0.5));
    CHECK(bell[2] == doctest::Approx(0.5));
    CHECK(bell[3] == doctest::Approx(-0.5));
}

TEST_CASE("the 32 ring-state basis vectors are orthonormal") {
    Graph r = ring_graph(5);
    std::vector<std::vector<double>> amps;
    for (uint32_t mu = 0; mu < 32; ++mu) amps.push_back(oracle::graph_basis_amps(r, mu));
    for (uint32_t mu = 0; mu < 32; ++mu) {
        CHECK(std::fabs(amps[mu][3]) == doctest::Approx(1.0 / std::sqrt(32.0)));
        for (uint32_t nu = 0; nu < 32; ++nu) {
            double dot = 0;
            for (size_t i = 0; i < 32; ++i) dot += amps[mu][i] * amps[nu][i];
            CHECK(dot == doctest::Approx(mu == nu ? 1.0 : 0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("each basis vector carries its stabilizer sign pattern") {
    Graph r = ring_graph(5);
    for (uint32_t mu : {0u, 5u, 21u, 31u}) {
        Dense rho = oracle::dense_from_diag(
            DiagState{r, [&] { std::vector<double> l(32, 0.0); l[mu] = 1.0; return l; }()});
        for (int a = 0; a < 5; ++a) {
            Dense p = rho;
            oracle::project_stabilizer(p, 1u << a, r.adj[size_t(a)]);
            double expect = (mu >> a & 1u) ? 0.0 : 1.0;
            CHECK(oracle::trace_real(p) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("dense_from_diag and extract_diag round trip") {
    Graph r = ring_graph(4);
    std::mt19937 rng(31);
    DiagState s = random_state(r, rng);
    Dense rho = oracle::dense_from_diag(s);
    CHECK(oracle::trace_real(rho) == doctest::Approx(1.0).epsilon(1e-12));
    auto back = oracle::extract_diag(rho, r);
    CHECK(back.max_offdiag < 1e-12);
    for (size_t mu = 0; mu < s.dim(); ++mu)
        CHECK(back.state.lam[mu] == doctest::Approx(s.lam[mu]).epsilon(1e-12));
}

TEST_CASE("tensor stacks hi above lo in the bit order") {
    Dense lo = oracle::zero_dm(1);
    lo.at(1, 1) = 1.0;  // |1>
    Dense hi = oracle::zero_dm(1);
    hi.at(0, 0) = 1.0;  // |0>
    Dense both = oracle::tensor(lo, hi);
    CHECK(both.m == 2);
    CHECK(both.at(1, 1).real() == doctest::Approx(1.0));
    CHECK(oracle::trace_real(both) == doctest::Approx(1.0));
}

TEST_CASE("apply_cnot permutes computational basis indices") {
    Dense rho = oracle::zero_dm(2);
    rho.at(1, 1) = 1.0;  // control qubit 0 is set
    oracle::apply_cnot(rho, 0, 1);
    CHECK(rho.at(3, 3).real() == doctest::Approx(1.0));
    Dense idle = oracle::zero_dm(2);
    idle.at(2, 2) = 1.0;  // control clear, target set
    oracle::apply_cnot(idle, 0, 1);
    CHECK(idle.at(2, 2).real() == doctest::Approx(1.0));
}

TEST_CASE("z and x projectors keep half of a balanced state") {
    Dense plus = oracle::zero_dm(1);
    for (int rI = 0; rI < 2; ++rI)
        for (int cI = 0; cI < 2; ++cI) plus.at(size_t(rI), size_t(cI)) = 0.5;
    Dense pz = plus;
    oracle::project_z(pz, 0, 0);
    CHECK(oracle::trace_real(pz) == doctest::Approx(0.5));
    CHECK(pz.at(1, 1).real() == doctest::Approx(0.0));

    Dense zero = oracle::zero_dm(1);
    zero.at(0, 0) = 1.0;
    oracle::project_x(zero, 0, -1);
    CHECK(oracle::trace_real(zero) == doctest::Approx(0.5));
}

TEST_CASE("pauli conjugation of a diagonal state matches pauli_index_action") {
    Graph r = ring_graph(5);
    std::mt19937 rng(32);
    DiagState s = random_state(r, rng);
    struct Probe {
        char letter;
        uint32_t xmask, zmask;
    };
    int a = 2;
    std::vector<Probe> probes = {{'Z', 0u, 1u << a}, {'X', 1u << a, 0u}, {'Y', 1u << a, 1u << a}};
    for (const auto& pr : probes) {
        Dense rho = oracle::dense_from_diag(s);
        oracle::conj_pauli_word(rho, pr.xmask, pr.zmask);
        auto got = oracle::extract_diag(rho, r);
        CHECK(got.max_offdiag < 1e-12);
        uint32_t flip = pauli_index_action(r, pr.letter, a);
        for (uint32_t mu = 0; mu < 32; ++mu)
            CHECK(got.state.lam[mu] == doctest::Approx(s.lam[mu ^ flip]).epsilon(1e-12));
    }
}

TEST_CASE("dense depolarizing agrees with the diagonal channel") {
    Graph r = ring_graph(4);
    std::mt19937 rng(33);
    DiagState s = random_state(r, rng);
    for (double p : {1.0, 0.9, 0.4}) {
        Dense rho = oracle::dense_from_diag(s);
        oracle::depolarize_dense(rho, 1, p);
        auto got = oracle::extract_diag(rho, r);
        DiagState want = apply_depolarizing(s, 1, p);
        CHECK(got.max_offdiag < 1e-12);
        for (size_t mu = 0; mu < s.dim(); ++mu)
            CHECK(got.state.lam[mu] == doctest::Approx(want.lam[mu]).epsilon(1e-12));
    }
}

TEST_CASE("partial_trace_keep recovers tensor factors and ring entropies") {
    Dense lo = oracle::zero_dm(1);
    lo.at(0, 0) = 0.7;
    lo.at(1, 1) = 0.3;
    Dense hi = oracle::zero_dm(1);
    for (int rI = 0; rI < 2; ++rI)
        for (int cI = 0; cI < 2; ++cI) hi.at(size_t(rI), size_t(cI)) = 0.5;
    Dense both = oracle::tensor(lo, hi);
    Dense back = oracle::partial_trace_keep(both, 2, 0b01u);
    CHECK(back.at(0, 0).real() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(back.at(1, 1).real() == doctest::Approx(0.3).epsilon(1e-12));

    Graph r = ring_graph(5);
    Dense ring = oracle::dense_from_diag(white_noise_state(r, 1.0));
    for (uint32_t keep : {0b00011u, 0b00101u, 0b10010u}) {
        Dense red = oracle::partial_trace_keep(ring, 5, keep);
        CHECK(oracle::trace_real(red) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(oracle::vn_entropy_bits(red) == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("ppt minimum eigenvalue separates entangled from product pairs") {
    Graph edge = build_graph(2, {{0, 1}});
    Dense bell = oracle::dense_from_diag(white_noise_state(edge, 1.0));
    CHECK(oracle::ppt_min_eigenvalue(bell) == doctest::Approx(-0.5).epsilon(1e-10));

    Dense prod = oracle::zero_dm(2);
    prod.at(0, 0) = 1.0;
    CHECK(oracle::ppt_min_eigenvalue(prod) >= -1e-12);

    Dense mixed = oracle::dense_from_diag(white_noise_state(edge, 0.25));
    CHECK(oracle::ppt_min_eigenvalue(mixed) >= -1e-12);
}

TEST_CASE("vn_entropy_bits on pure and maximally mixed inputs") {
    Dense pure = oracle::zero_dm(2);
    pure.at(0, 0) = 1.0;
    CHECK(oracle::vn_entropy_bits(pure) == doctest::Approx(0.0).epsilon(1e-10));
    Dense mixed = oracle::zero_dm(2);
    for (size_t i = 0; i < 4; ++i) mixed.at(i, i) = 0.25;
    CHECK(oracle::vn_entropy_bits(mixed) == doctest::Approx(2.0).epsilon(1e-12));
}
