#include "gsp/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gsp/oracle.hpp"

namespace gsp {
namespace {

constexpr uint32_t kRingAll = 0b11111u;
constexpr double kReachTol = 1e-4;  // "reaches F_max" margin

NoiseParams ops_noise(double p_l) {
    NoiseParams n;
    n.p_l = p_l;
    return n;
}

DiagState perfect_state(const Graph& g) { return white_noise_state(g, 1.0); }

// perfect source, channel reliability q on the distributed qubits
DiagState channel_state(const Graph& g, uint32_t noisy, double q) {
    return apply_depolarizing_masked(perfect_state(g), noisy, q);
}

Coloring pair_coloring() { return Coloring{{0b01u, 0b10u}}; }

// the 3-vertex piece of the 4-3 split: ring path 3-4-0 renamed 1-2-0
Graph split43_small_graph() { return build_graph(3, {{0, 2}, {1, 2}}); }
Coloring split43_small_coloring() { return Coloring{{0b011u, 0b100u}}; }
Coloring path4_coloring() { return Coloring{{0b0101u, 0b1010u}}; }

BellDiagState to_pair(const DiagState& s) {
    BellDiagState p;
    for (size_t i = 0; i < 4; ++i) p.p[i] = s.lam[i];
    return p;
}

// ---- seeds -----------------------------------------------------------------
// Static scenario: every input descends from white-noise rings of fidelity f.
// Communication scenario: perfect sources, channel reliability q on every
// qubit except the builder's vertex 0 (pieces that carry no builder qubit are
// fully exposed).

std::array<DiagState, 3> mepp_seeds(Scenario sc, double v, const NoiseParams& noise) {
    std::array<DiagState, 3> seeds;
    if (sc == Scenario::Static) {
        DiagState ring = white_noise_state(ring5(), v);
        for (int j = 0; j < 3; ++j)
            seeds[size_t(j)] = prepare_auxiliary(ring, ring, ring5_coloring(), j, true, noise).out;
    } else {
        for (int j = 0; j < 3; ++j)
            seeds[size_t(j)] = channel_state(cluster_graph(j), kRingAll & ~1u, v);
    }
    return seeds;
}

DiagState mepp_main_seed(Scenario sc, double v) {
    return sc == Scenario::Static ? white_noise_state(ring5(), v)
                                  : channel_state(ring5(), kRingAll & ~1u, v);
}

struct SplitSeeds {
    DiagState big, small;
};

SplitSeeds split52_seeds(Scenario sc, double v, const NoiseParams& noise) {
    if (sc == Scenario::Static) {
        DiagState ring = white_noise_state(ring5(), v);
        return {prepare_auxiliary(ring, ring, ring5_coloring(), 0, true, noise).out,
                erase_vertices_z(ring, 0b00111u).out};
    }
    return {channel_state(cluster_graph(0), kRingAll & ~1u, v),
            channel_state(path_graph(2), 0b11u, v)};
}

SplitSeeds split43_seeds(Scenario sc, double v, const NoiseParams& noise) {
    if (sc == Scenario::Static) {
        DiagState ring = white_noise_state(ring5(), v);
        DiagState small =
            erase_vertices_z(prepare_auxiliary(ring, ring, ring5_coloring(), 2, true, noise).out,
                             0b00110u)
                .out;
        return {erase_vertices_z(ring, 0b10000u).out, std::move(small)};
    }
    return {channel_state(path_graph(4), 0b1110u, v),
            channel_state(split43_small_graph(), 0b110u, v)};
}

BellDiagState bepp_seed(Scenario sc, double v) {
    if (sc == Scenario::Static) return extract_pair_from_ring(white_noise_state(ring5(), v));
    return to_pair(channel_state(path_graph(2), 0b10u, v));
}

// ---- drives ----------------------------------------------------------------

struct MeppParts {
    std::array<ChainOrbit, 3> aux;
    IterationTrace trace;
};

MeppParts mepp_aux_orbits(const std::array<DiagState, 3>& seeds, const NoiseParams& noise) {
    MeppParts parts;
    parts.trace.converged = true;
    for (int j = 0; j < 3; ++j) {
        parts.aux[size_t(j)] = chain_orbit(seeds[size_t(j)], cluster_coloring(j), noise);
        parts.trace.steps += parts.aux[size_t(j)].iter.steps;
        parts.trace.converged &= parts.aux[size_t(j)].iter.converged;
    }
    return parts;
}

std::array<DiagState, 3> aux_phase(const MeppParts& parts, size_t ph) {
    return {parts.aux[0].phase[ph], parts.aux[1].phase[ph], parts.aux[2].phase[ph]};
}

// best settled cycle fidelity over both aux chain phases
double mepp_best(const DiagState& main, const MeppParts& parts, const NoiseParams& noise,
                 IterationTrace* trace) {
    double best = 0.0;
    IterationTrace sum{0, true};
    for (size_t ph = 0; ph < 2; ++ph) {
        RingOrbit o = ring_cycle_orbit(main, aux_phase(parts, ph), noise);
        best = std::max(best, o.best());
        sum.steps += o.iter.steps;
        sum.converged &= o.iter.converged;
    }
    if (trace) *trace = sum;
    return best;
}

struct PairOrbit {
    std::array<BellDiagState, 2> phase;
    IterationTrace iter;
};

PairOrbit pair_orbit(const BellDiagState& seed, const NoiseParams& noise, int cap = 10000,
                     double tol = 1e-9) {
    PairOrbit r{{seed, seed}, {}};
    BellDiagState p = seed;
    double prev = p.fidelity();
    while (r.iter.steps < cap) {
        p = bell_recurrence_step(p, p, noise, r.iter.steps & 1).first;
        r.phase[size_t(r.iter.steps & 1)] = p;
        ++r.iter.steps;
        if ((r.iter.steps & 1) == 0) {
            double f = p.fidelity();
            if (std::fabs(f - prev) < tol) {
                r.iter.converged = true;
                break;
            }
            prev = f;
        }
    }
    return r;
}

// Merging consumes one two-qubit gate per junction; its endpoints pass
// through E_{p_l} first like any other local operation.
DiagState assemble_split52(const DiagState& big, const DiagState& small, double p_l) {
    DiagState b = apply_depolarizing(big, 3, p_l);
    DiagState s = apply_depolarizing(small, 0, p_l);
    DiagState m = merge_states(b, 3, s, 0).out;
    m = apply_depolarizing(m, 4, p_l);
    m = apply_depolarizing(m, 5, p_l);
    DiagState out = merge_within(m, 4, 5).out;
    if (!(out.g == ring_graph(5))) throw std::logic_error("5-2 merge did not close the ring");
    return out;
}

DiagState assemble_split43(const DiagState& big, const DiagState& small, double p_l) {
    DiagState b = apply_depolarizing(big, 0, p_l);
    DiagState s = apply_depolarizing(small, 0, p_l);
    DiagState m = merge_states(b, 0, s, 0).out;
    m = apply_depolarizing(m, 3, p_l);
    m = apply_depolarizing(m, 4, p_l);
    DiagState out = merge_within(m, 3, 4).out;
    if (!(out.g == ring_graph(5))) throw std::logic_error("4-3 merge did not close the ring");
    return out;
}

template <typename Assemble>
double best_assembled(const ChainOrbit& big, const ChainOrbit& small, Assemble asmbl) {
    double best = 0.0;
    for (size_t i = 0; i < 2; ++i)
        for (size_t k = 0; k < 2; ++k)
            best = std::max(best, asmbl(big.phase[i], small.phase[k]).fidelity());
    return best;
}

// Component fixed points and the assembled output for the non-recursive
// strategies (splits and pairs); MEPP keeps its own drive.
struct AssembledRun {
    double fidelity = std::numeric_limits<double>::quiet_NaN();
    IterationTrace iter;
};

AssembledRun run_assembled(Strategy st, Scenario sc, double v, const NoiseParams& noise) {
    AssembledRun r;
    r.iter.converged = true;
    double p_l = noise.p_l;
    auto chain = [&](const DiagState& seed, const Coloring& col) {
        ChainOrbit o = chain_orbit(seed, col, noise);
        r.iter.steps += o.iter.steps;
        r.iter.converged &= o.iter.converged;
        return o;
    };
    if (st == Strategy::Split52) {
        SplitSeeds s = split52_seeds(sc, v, noise);
        ChainOrbit big = chain(s.big, cluster_coloring(0));
        ChainOrbit small = chain(s.small, pair_coloring());
        r.fidelity = best_assembled(big, small, [&](const DiagState& b, const DiagState& sm) {
            return assemble_split52(b, sm, p_l);
        });
    } else if (st == Strategy::Split43) {
        SplitSeeds s = split43_seeds(sc, v, noise);
        ChainOrbit big = chain(s.big, path4_coloring());
        ChainOrbit small = chain(s.small, split43_small_coloring());
        r.fidelity = best_assembled(big, small, [&](const DiagState& b, const DiagState& sm) {
            return assemble_split43(b, sm, p_l);
        });
    } else if (st == Strategy::Bepp) {
        PairOrbit o = pair_orbit(bepp_seed(sc, v), noise);
        r.iter = o.iter;
        DiagState local = locally_created_ring(p_l);
        for (size_t ph = 0; ph < 2; ++ph) {
            const BellDiagState& p = o.phase[ph];
            double f = teleport_ring_through_pairs(local, {p, p, p, p}).fidelity();
            r.fidelity = !(r.fidelity == r.fidelity) ? f : std::max(r.fidelity, f);
        }
    } else {
        throw std::logic_error("run_assembled covers the non-recursive strategies only");
    }
    return r;
}

bool strategy_reaches(Strategy st, Scenario sc, const NoiseParams& noise, double knob,
                      double target) {
    try {
        if (st == Strategy::Mepp) {
            double v = sc == Scenario::Static ? x_to_fidelity(5, knob) : knob;
            MeppParts parts = mepp_aux_orbits(mepp_seeds(sc, v, noise), noise);
            if (!parts.trace.converged) return false;
            return mepp_best(mepp_main_seed(sc, v), parts, noise, nullptr) >= target;
        }
        if (st == Strategy::Bepp && sc == Scenario::Static && noise.p_l >= 1.0) {
            // ideal operations: distillability of the extracted pair is the
            // partial-transpose criterion, exact for two qubits
            BellDiagState pair = extract_pair_from_ring(x_state(ring5(), knob));
            return pair_ppt_min_eigenvalue(pair) < 0.0;
        }
        double v = sc == Scenario::Static ? x_to_fidelity(5, knob) : knob;
        AssembledRun run = run_assembled(st, sc, v, noise);
        return run.iter.converged && run.fidelity >= target;
    } catch (const std::runtime_error&) {
        return false;  // a step rejected all weight: nothing to purify
    }
}

double entrywise_max_diff(const oracle::Dense& a, const oracle::Dense& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

// i^phase X^x Z^z with the phase tracked through multiplication
struct PauliWord {
    int phase = 0;
    uint32_t x = 0, z = 0;
};

PauliWord mul(const PauliWord& a, const PauliWord& b) {
    return {(a.phase + b.phase + 2 * std::popcount(a.z & b.x)) & 3, a.x ^ b.x, a.z ^ b.z};
}

oracle::Dense pauli_eigen_projector(char letter, int s) {
    oracle::Dense d = oracle::zero_dm(1);
    switch (letter) {
        case 'X':
            d.at(0, 0) = d.at(1, 1) = 0.5;
            d.at(0, 1) = d.at(1, 0) = 0.5 * s;
            break;
        case 'Y':
            d.at(0, 0) = d.at(1, 1) = 0.5;
            d.at(0, 1) = std::complex<double>(0.0, -0.5 * s);
            d.at(1, 0) = std::complex<double>(0.0, 0.5 * s);
            break;
        case 'Z':
            d.at(0, 0) = (1.0 + s) / 2.0;
            d.at(1, 1) = (1.0 - s) / 2.0;
            break;
        default:
            throw std::logic_error("projector needs a letter from {X,Y,Z}");
    }
    return d;
}

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Mepp: return "MEPP";
        case Strategy::Split52: return "SPLIT-5-2";
        case Strategy::Split43: return "SPLIT-4-3";
        case Strategy::Bepp: return "BEPP";
    }
    return "?";
}

const char* scenario_name(Scenario s) {
    return s == Scenario::Static ? "static" : "communication";
}

Graph ring5() { return ring_graph(5); }

Coloring ring5_coloring() { return Coloring{{0b00101u, 0b01010u, 0b10000u}}; }

Graph cluster_graph(int j) { return derive_gj(ring5(), ring5_coloring(), j); }

Coloring cluster_coloring(int j) {
    uint32_t m = ring5_coloring().mask(j);
    return Coloring{{kRingAll & ~m, m}};
}

ChainOrbit chain_orbit(const DiagState& seed, const Coloring& two_col, const NoiseParams& noise,
                       int cap, double tol) {
    if (two_col.k() != 2) throw std::invalid_argument("chain recursion needs a 2-coloring");
    ChainOrbit r{{seed, seed}, {}};
    DiagState s = seed;
    double prev = s.fidelity();
    while (r.iter.steps < cap) {
        s = subprotocol_pj(s, s, two_col, r.iter.steps & 1, noise).out;
        r.phase[size_t(r.iter.steps & 1)] = s;
        ++r.iter.steps;
        if ((r.iter.steps & 1) == 0) {
            double f = s.fidelity();
            if (std::fabs(f - prev) < tol) {
                r.iter.converged = true;
                break;
            }
            prev = f;
        }
    }
    return r;
}

double RingOrbit::best() const {
    return *std::max_element(phase_fidelity.begin(), phase_fidelity.end());
}

RingOrbit ring_cycle_orbit(const DiagState& main, const std::array<DiagState, 3>& aux,
                           const NoiseParams& noise, int cap, double tol) {
    Coloring c = ring5_coloring();
    DiagState s = main;
    RingOrbit o;
    double prev = -1.0;
    while (o.iter.steps < cap) {
        for (int j = 0; j < 3; ++j) {
            s = subprotocol_pj(s, aux[size_t(j)], c, j, noise).out;
            o.phase_fidelity[size_t(j)] = s.fidelity();
        }
        ++o.iter.steps;
        if (std::fabs(o.best() - prev) < tol) {
            o.iter.converged = true;
            break;
        }
        prev = o.best();
    }
    return o;
}

DiagState locally_created_ring(double p_l) {
    static const std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
    DiagState s;
    s.g = build_graph(5, {});
    s.lam.assign(32, 0.0);
    s.lam[0] = 1.0;
    std::vector<std::pair<int, int>> built;
    for (auto [a, b] : edges) {
        s = apply_depolarizing(s, a, p_l);
        s = apply_depolarizing(s, b, p_l);
        built.push_back({a, b});
        // the gate itself relabels the basis in step with the graph; the
        // coefficients carry over unchanged
        s.g = build_graph(5, built);
    }
    return s;
}

FixedPointResult fixed_point_fmax(Strategy st, Scenario sc, double p_l) {
    NoiseParams noise = ops_noise(p_l);
    const double seed_quality = 0.999;
    FixedPointResult r;
    try {
        if (st == Strategy::Mepp) {
            MeppParts parts = mepp_aux_orbits(mepp_seeds(sc, seed_quality, noise), noise);
            IterationTrace t;
            r.f_max = mepp_best(mepp_main_seed(sc, seed_quality), parts, noise, &t);
            r.iter.steps = parts.trace.steps + t.steps;
            r.iter.converged = parts.trace.converged && t.converged;
        } else {
            AssembledRun run = run_assembled(st, sc, seed_quality, noise);
            r.f_max = run.fidelity;
            r.iter = run.iter;
        }
    } catch (const std::runtime_error&) {
        r.iter.converged = false;  // f_max stays undefined
    }
    return r;
}

FminResult min_required_fidelity(Strategy st, Scenario sc, double p_l) {
    NoiseParams noise = ops_noise(p_l);
    FminResult r;
    FixedPointResult fm = fixed_point_fmax(st, sc, p_l);
    if (!fm.iter.converged || !(fm.f_max == fm.f_max)) return r;
    double target = fm.f_max - kReachTol;
    auto ok = [&](double knob) { return strategy_reaches(st, sc, noise, knob, target); };
    double lo = 0.0, hi = 1.0;
    r.evaluations = 2;
    if (!ok(hi)) return r;
    if (!ok(lo)) {
        while (hi - lo > 1e-4) {
            double mid = 0.5 * (lo + hi);
            ++r.evaluations;
            (ok(mid) ? hi : lo) = mid;
        }
    } else {
        hi = lo;  // succeeds over the whole bracket
    }
    r.defined = true;
    r.knob = hi;  // smallest knob value verified to succeed
    r.f_min = sc == Scenario::Static
                  ? x_to_fidelity(5, r.knob)
                  : channel_state(ring5(), kRingAll & ~1u, r.knob).fidelity();
    return r;
}

double lne(double fidelity, const Graph& g, uint32_t noisy_vertices, double tol) {
    auto forward = [&](double p) {
        return apply_depolarizing_masked(perfect_state(g), noisy_vertices, p).fidelity();
    };
    double floor_f = forward(0.0);
    if (fidelity > 1.0 + 1e-12 || fidelity < floor_f - 1e-9)
        throw std::invalid_argument("fidelity outside the reachable band");
    if (fidelity >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (forward(mid) < fidelity ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double mepp_static_threshold_x(double tol) {
    NoiseParams noise = ops_noise(1.0);
    auto ok = [&](double x) {
        return strategy_reaches(Strategy::Mepp, Scenario::Static, noise, x, 1.0 - kReachTol);
    };
    double lo = 0.0, hi = 1.0;
    if (ok(lo) || !ok(hi)) throw std::logic_error("threshold bracket failed");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double bepp_static_threshold_x(double tol) {
    auto ok = [&](double x) {
        return pair_ppt_min_eigenvalue(extract_pair_from_ring(x_state(ring5(), x))) < 0.0;
    };
    double lo = 0.0, hi = 1.0;
    if (ok(lo) || !ok(hi)) throw std::logic_error("threshold bracket failed");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

YieldBoundReport yield_bound_ring() {
    Graph g = ring5();
    oracle::Dense rho = oracle::dense_from_diag(perfect_state(g));
    YieldBoundReport rep;
    int cut = 0;
    for (int a1 = 0; a1 < 5; ++a1) {
        for (int a2 = a1 + 1; a2 < 5; ++a2) {
            uint32_t amask = (1u << a1) | (1u << a2);
            uint32_t bmask = kRingAll & ~amask;
            oracle::Dense rb = oracle::partial_trace_keep(rho, 5, bmask);
            double s = oracle::vn_entropy_bits(rb);
            rep.cut_entropies[size_t(cut)] = s;
            rep.max_entropy_deviation = std::max(rep.max_entropy_deviation, std::fabs(s - 2.0));

            // the one correlation-operator product supported away from the cut
            PauliWord found;
            int hits = 0;
            for (uint32_t sel = 1; sel < 32; ++sel) {
                PauliWord w;
                for (int a = 0; a < 5; ++a)
                    if (sel >> a & 1u) w = mul(w, PauliWord{0, 1u << a, g.adj[size_t(a)]});
                if ((w.x | w.z) & amask) continue;
                found = w;
                ++hits;
            }
            if (hits != 1) throw std::logic_error("expected one cut-supported stabilizer");
            int ny = std::popcount(found.x & found.z);
            int ph = (found.phase + 3 * ny) & 3;  // per-site XZ = -iY absorbs i^3 each
            if (ph != 0 && ph != 2) throw std::logic_error("stabilizer came out non-Hermitian");
            int sign = ph == 0 ? 1 : -1;
            char letter[3];
            int site = 0;
            for (int v = 0; v < 5; ++v) {
                if (!(bmask >> v & 1u)) continue;
                bool xs = found.x >> v & 1u, zs = found.z >> v & 1u;
                if (!xs && !zs) throw std::logic_error("stabilizer trivial on a kept vertex");
                letter[site++] = xs && zs ? 'Y' : xs ? 'X' : 'Z';
            }

            // (1 + sign * P)/8 as an even mixture of local eigen-projectors
            oracle::Dense mix = oracle::zero_dm(3);
            for (int pat = 0; pat < 8; ++pat) {
                int prod = 1;
                for (int i = 0; i < 3; ++i)
                    if (pat >> i & 1) prod = -prod;
                if (prod != sign) continue;
                oracle::Dense term = pauli_eigen_projector(letter[0], (pat & 1) ? -1 : 1);
                for (int i = 1; i < 3; ++i)
                    term = oracle::tensor(term, pauli_eigen_projector(letter[i], (pat >> i & 1) ? -1 : 1));
                for (size_t i = 0; i < mix.a.size(); ++i) mix.a[i] += 0.25 * term.a[i];
            }
            rep.max_decomposition_error =
                std::max(rep.max_decomposition_error, entrywise_max_diff(mix, rb));
            ++cut;
        }
    }

    // bipartition counts per qubit pair, uniform across pairs
    int usplit = -1, uinside = -1;
    for (int p1 = 0; p1 < 5; ++p1) {
        for (int p2 = p1 + 1; p2 < 5; ++p2) {
            int sc = 0, ic = 0;
            for (int a1 = 0; a1 < 5; ++a1) {
                for (int a2 = a1 + 1; a2 < 5; ++a2) {
                    int inA = (a1 == p1 || a1 == p2) + (a2 == p1 || a2 == p2);
                    if (inA == 1) ++sc;
                    if (inA == 0) ++ic;
                }
            }
            if (usplit < 0) {
                usplit = sc;
                uinside = ic;
            } else if (usplit != sc || uinside != ic) {
                throw std::logic_error("bipartition counts not pair-uniform");
            }
        }
    }
    rep.pair_split_count = usplit;
    rep.pair_inside_count = uinside;
    // entropy: usplit*Sum(m) >= 2*cuts*Mt; relative entropy adds
    // uinside*Sum(m) <= 2*cuts*M - usplit*Sum(m); together Mt/M <= usplit/(usplit+uinside)
    long num = usplit, den = usplit + uinside;
    long g_ = std::gcd(num, den);
    rep.bound_num = num / g_;
    rep.bound_den = den / g_;
    return rep;
}

StrategyOutcome evaluate_strategy(Strategy st, Scenario sc, double p_l) {
    StrategyOutcome o;
    o.strategy = st;
    o.scenario = sc;
    o.p_l = p_l;
    FixedPointResult fm = fixed_point_fmax(st, sc, p_l);
    o.f_max = fm.f_max;
    o.iterations = fm.iter.steps;
    o.converged = fm.iter.converged;
    if (!o.converged || !(o.f_max == o.f_max)) return o;
    FminResult fr = min_required_fidelity(st, sc, p_l);
    if (fr.defined) {
        o.f_min = fr.f_min;
        if (sc == Scenario::Communication) o.q_min = fr.knob;
    }
    o.converged = o.converged && fr.defined;
    try {
        o.lne_fmax = lne(o.f_max, ring5(), kRingAll & ~1u);
        if (fr.defined) o.lne_fmin = lne(o.f_min, ring5(), kRingAll & ~1u);
    } catch (const std::invalid_argument&) {
        // outside the four-qubit noise band; the column stays undefined
    }
    return o;
}

}  // namespace gsp
