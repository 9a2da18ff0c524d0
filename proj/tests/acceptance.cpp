// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "gsp/analysis.hpp"
#include "gsp/bipartite.hpp"
#include "gsp/breeding.hpp"
#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"
#include "gsp/oracle.hpp"
#include "gsp/purify.hpp"
#include "gsp/report.hpp"

using namespace gsp;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", idx, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) ++failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DiagState random_state(const Graph& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DiagState s{g, std::vector<double>(size_t{1} << g.n)};
    double t = 0;
    for (auto& v : s.lam) t += (v = u(rng));
    for (auto& v : s.lam) v /= t;
    return s;
}

Graph random_graph(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (coin(rng)) edges.emplace_back(a, b);
    if (edges.empty() && n >= 2) edges.emplace_back(0, 1);
    return build_graph(n, std::move(edges));
}

double state_diff(const DiagState& a, const DiagState& b) {
    if (a.dim() != b.dim()) return 1.0;
    double w = 0.0;
    for (size_t mu = 0; mu < a.dim(); ++mu) w = std::max(w, std::fabs(a.lam[mu] - b.lam[mu]));
    return w;
}

// ---------------------------------------------------------------- criterion 1
void criterion_oracle_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int cases = 0;
    auto track = [&](double d) {
        worst = std::max(worst, d);
        ++cases;
    };

    Graph r = ring5();
    Coloring rc = ring5_coloring();
    for (int t = 0; t < 30; ++t) {
        int j = t % 3;
        double p_l = (t % 2) ? 1.0 : 0.9 + 0.1 * u(rng);
        NoiseParams noise;
        noise.p_l = p_l;

        DiagState main5 = random_state(r, rng);
        DiagState aux = random_state(cluster_graph(j), rng);
        StepReport got = subprotocol_pj(main5, aux, rc, j, noise);
        oracle::OracleStep want = oracle::subprotocol_pj(main5, aux, rc, j, p_l);
        track(std::fabs(got.p_success - want.p_success));
        track(state_diff(got.out, want.out));

        DiagState s2 = random_state(r, rng);
        bool purifying = (t % 2) == 0;
        StepReport gp = prepare_auxiliary(main5, s2, rc, j, purifying, noise);
        oracle::OracleStep wp = oracle::prepare_auxiliary(main5, s2, rc, j, purifying, p_l);
        track(std::fabs(gp.p_success - wp.p_success));
        track(state_diff(gp.out, wp.out));

        BellDiagState pair = extract_pair_from_ring(main5);
        oracle::PairExtract pe = oracle::extract_pair(main5);
        double pd = 0.0;
        for (int w = 0; w < 4; ++w) pd = std::max(pd, std::fabs(pair.p[size_t(w)] - pe.bell[size_t(w)]));
        track(pd);
    }

    for (int t = 0; t < 60; ++t) {
        int n = 2 + t % 4;
        Graph g = random_graph(n, rng);
        Coloring c = color_graph(g);
        int j = t % c.k();
        double p_l = (t % 3) ? 1.0 : 0.92 + 0.08 * u(rng);
        NoiseParams noise;
        noise.p_l = p_l;

        DiagState s1 = random_state(g, rng);
        DiagState aux = random_state(derive_gj(g, c, j), rng);
        StepReport got = subprotocol_pj(s1, aux, c, j, noise);
        oracle::OracleStep want = oracle::subprotocol_pj(s1, aux, c, j, p_l);
        track(std::fabs(got.p_success - want.p_success));
        track(state_diff(got.out, want.out));

        DiagState s2 = random_state(g, rng);
        bool purifying = (t % 2) == 0;
        StepReport gp = prepare_auxiliary(s1, s2, c, j, purifying, noise);
        oracle::OracleStep wp = oracle::prepare_auxiliary(s1, s2, c, j, purifying, p_l);
        track(std::fabs(gp.p_success - wp.p_success));
        track(state_diff(gp.out, wp.out));
    }

    for (int t = 0; t < 40; ++t) {
        int n1 = 2 + t % 3, n2 = 2 + (t / 3) % 3;
        Graph g1 = random_graph(n1, rng), g2 = random_graph(n2, rng);
        DiagState s1 = random_state(g1, rng), s2 = random_state(g2, rng);
        int v1 = t % n1, v2 = (t / 2) % n2;
        StepReport got = merge_states(s1, v1, s2, v2);
        oracle::OracleStep want = oracle::merge_states(s1, v1, s2, v2);
        track(std::fabs(got.p_success - want.p_success));
        track(state_diff(got.out, want.out));
    }

    bool ok = worst <= 1e-10 && cases >= 200;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "engine vs dense simulation: %d comparisons, worst |diff| = %.3e (%.1f s)",
                  cases, worst, elapsed_s(t0));
    report(1, ok, buf);
}

// ---------------------------------------------------------------- criterion 2
void criterion_ideal_fixed_point() {
    DiagState main5 = white_noise_state(ring5(), 0.9);
    Coloring rc = ring5_coloring();
    std::array<DiagState, 3> aux = {main5, main5, main5};
    for (int j = 0; j < 3; ++j) {
        DiagState seed = prepare_auxiliary(main5, main5, rc, j, true).out;
        ChainOrbit chain = chain_orbit(seed, cluster_coloring(j));
        aux[size_t(j)] = chain.phase[0];
    }
    RingOrbit orbit = ring_cycle_orbit(main5, aux);
    double gap = std::fabs(orbit.best() - 1.0);
    bool ok = orbit.iter.converged && gap <= 1e-9;
    char buf[120];
    std::snprintf(buf, sizeof buf, "ideal recurrence from f=0.9 settles at |F-1| = %.3e", gap);
    report(2, ok, buf);
}

// ---------------------------------------------------------------- criterion 3
void criterion_breeding_curve() {
    Graph r = ring5();
    Coloring c = ring5_coloring();
    double y1 = breeding_yield(white_noise_state(r, 1.0), c);

    auto margin = [&](double f) { return breeding_yield(white_noise_state(r, f), c) - 2.0 / 3.0; };
    double lo = 0.95, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (margin(mid) < 0.0 ? lo : hi) = mid;
    }
    double crossing = 0.5 * (lo + hi);

    bool monotone = true;
    double prev = breeding_yield(white_noise_state(r, 0.8), c);
    for (int i = 1; i <= 40; ++i) {
        double y = breeding_yield(white_noise_state(r, 0.8 + 0.005 * i), c);
        monotone = monotone && y > prev;
        prev = y;
    }

    bool ok = std::fabs(y1 - 1.0) < 1e-12 && crossing > 0.987 && crossing < 0.989 && monotone;
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "Y(1) = %.12f, Y crosses 2/3 at f = %.6f, monotone on [0.8,1]: %s", y1,
                  crossing, monotone ? "yes" : "no");
    report(3, ok, buf);
}

// ---------------------------------------------------------------- criterion 4
void criterion_thresholds() {
    double x_mepp = mepp_static_threshold_x();
    bool mepp_ok = std::fabs(x_mepp - 0.200) <= 0.005;
    double x_bepp = bepp_static_threshold_x();
    double bepp_gap = std::fabs(x_bepp - 1.0 / 3.0);
    bool bepp_ok = bepp_gap <= 1e-10;
    char buf[180];
    std::snprintf(buf, sizeof buf,
                  "direct-strategy x* = %.6f (target 0.200 +/- 0.005: %s); pair |x - 1/3| = "
                  "%.2e (%s)",
                  x_mepp, mepp_ok ? "ok" : "outside", bepp_gap, bepp_ok ? "ok" : "outside");
    report(4, mepp_ok && bepp_ok, buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion_yield_bound() {
    YieldBoundReport r = yield_bound_ring();
    bool entropies_ok = r.max_entropy_deviation <= 1e-10;
    bool decomp_ok = r.max_decomposition_error <= 1e-12;
    bool bound_ok = r.bound_num == 2 && r.bound_den == 3 && r.pair_split_count == 6 &&
                    r.pair_inside_count == 3;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "cut entropies 2 +/- %.2e, decompositions +/- %.2e, bound = %ld/%ld",
                  r.max_entropy_deviation, r.max_decomposition_error, r.bound_num, r.bound_den);
    report(5, entropies_ok && decomp_ok && bound_ok, buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion_noisy_orderings() {
    auto t0 = std::chrono::steady_clock::now();
    const std::array<Strategy, 4> order = {Strategy::Mepp, Strategy::Split52, Strategy::Split43,
                                           Strategy::Bepp};
    const std::array<double, 4> grid = {0.97, 0.98, 0.99, 0.995};
    bool ok = true;
    std::string note;
    for (double p_l : grid) {
        std::array<double, 4> fmax{}, fmin{};
        for (size_t i = 0; i < 4; ++i) {
            StrategyOutcome st = evaluate_strategy(order[i], Scenario::Static, p_l);
            StrategyOutcome co = evaluate_strategy(order[i], Scenario::Communication, p_l);
            if (!st.converged || !co.converged) {
                ok = false;
                note += " nonconverged@" + std::to_string(p_l);
                continue;
            }
            fmax[i] = st.f_max;
            fmin[i] = co.f_min;
            if (std::fabs(st.f_max - co.f_max) > 1e-6) {
                ok = false;
                note += " scenario-fmax-gap@" + std::to_string(p_l);
            }
        }
        for (size_t i = 1; i < 4; ++i) {
            if (!(fmax[i - 1] >= fmax[i] - 1e-12)) {
                ok = false;
                note += " fmax-order@" + std::to_string(p_l);
            }
            if (!(fmin[i - 1] >= fmin[i] - 1e-12)) {
                ok = false;
                note += " fmin-order@" + std::to_string(p_l);
            }
        }
    }
    double secs = elapsed_s(t0);
    ok = ok && secs < 300.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "F_max ladder and inverted F_min ladder hold on {0.97,0.98,0.99,0.995}%s "
                  "(%.1f s)",
                  note.empty() ? "" : note.c_str(), secs);
    report(6, ok, buf);
}

// ---------------------------------------------------------------- criterion 7
std::string compare_csv(const std::vector<double>& p_ls) {
    std::string csv = std::string(kOutcomeCsvHeader) + "\n";
    for (double p_l : p_ls)
        for (Strategy st : {Strategy::Mepp, Strategy::Split52, Strategy::Split43, Strategy::Bepp})
            csv += outcome_csv_row(evaluate_strategy(st, Scenario::Static, p_l), 1.0) + "\n";
    return csv;
}

void criterion_determinism() {
    std::vector<double> p_ls = {0.98, 0.995};
    std::string first = compare_csv(p_ls);
    std::string second = compare_csv(p_ls);
    bool ok = first == second && !first.empty();
    char buf[120];
    std::snprintf(buf, sizeof buf, "identical grid serialized twice: %zu bytes, byte-equal: %s",
                  first.size(), ok ? "yes" : "no");
    report(7, ok, buf);
}

}  // namespace

int main() {
    criterion_oracle_equivalence();
    criterion_ideal_fixed_point();
    criterion_breeding_curve();
    criterion_thresholds();
    criterion_yield_bound();
    criterion_noisy_orderings();
    criterion_determinism();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
