#pragma once
#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gsp/bipartite.hpp"
#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"
#include "gsp/purify.hpp"

namespace gsp {

// Strategies for producing one high-fidelity 5-ring state: direct multiparty
// purification, purification of two sub-states merged afterwards (5+2 or 4+3
// vertices), and pair purification followed by teleportation.
enum class Strategy { Mepp, Split52, Split43, Bepp };
enum class Scenario { Static, Communication };

const char* strategy_name(Strategy s);
const char* scenario_name(Scenario s);

// The worked example: the 5-ring, its 2-2-1 coloring, and the three
// two-colorable color subgraphs.
Graph ring5();
Coloring ring5_coloring();
Graph cluster_graph(int j);

// Chain coloring for cluster j, complement class first: the alternating
// self-recurrence starts on the complement of A_j. Starting on A_j instead
// converges from a measurably smaller basin.
Coloring cluster_coloring(int j);

struct IterationTrace {
    int steps = 0;
    bool converged = false;
};

// Converged orbit of the two-colorable self-recurrence: alternate the
// coloring's two classes, each step consuming a copy of the current state,
// until the end-of-period fidelity settles. With noise the limit is a
// period-2 cycle, not a point; phase[k] is the state right after a class-k
// step. Throws std::runtime_error when a step rejects all weight.
struct ChainOrbit {
    std::array<DiagState, 2> phase;
    IterationTrace iter;
};
ChainOrbit chain_orbit(const DiagState& seed, const Coloring& two_col,
                       const NoiseParams& noise = {}, int cap = 10000, double tol = 1e-9);

// P1 P2 P3 cycles of the ring against fixed per-color aux states, driven
// until the best in-cycle fidelity settles. phase_fidelity[j] is the
// fidelity right after the color-j step of the last cycle.
struct RingOrbit {
    std::array<double, 3> phase_fidelity{};
    IterationTrace iter;
    double best() const;
};
RingOrbit ring_cycle_orbit(const DiagState& main, const std::array<DiagState, 3>& aux,
                           const NoiseParams& noise = {}, int cap = 10000, double tol = 1e-9);

// 5-ring built in place from |+>^5 by five controlled-phase gates, both
// endpoints of each gate depolarized with p_l first.
DiagState locally_created_ring(double p_l);

struct FixedPointResult {
    double f_max = std::numeric_limits<double>::quiet_NaN();
    IterationTrace iter;
};

// Maximal reachable fidelity at operation reliability p_l: drive every
// component of the strategy to its own fixed point from high-fidelity seeds,
// then assemble. Direct purification reports the best phase of the aux-fed
// color cycle, over both chain phases of the auxes; the splits merge their
// purified pieces with the merge gates' qubits depolarized like any other
// local operation, best phase combination; the pair strategy teleports a
// locally created (hence noisy) ring through four purified pairs, with the
// teleportation itself kept noise-free. The scenario only selects the seed
// states; attractive fixed points forget them, so both scenarios agree.
FixedPointResult fixed_point_fmax(Strategy st, Scenario sc, double p_l);

struct FminResult {
    bool defined = false;
    double f_min = std::numeric_limits<double>::quiet_NaN();  // ring-scale fidelity
    double knob = std::numeric_limits<double>::quiet_NaN();   // x (static) or q (communication)
    int evaluations = 0;
};

// Minimum required input quality: bisection on the scenario's noise knob
// (static: white-noise weight x of the source rings; communication: channel
// reliability q on every distributed qubit). Success means the strategy's
// output fidelity reaches within 1e-4 of its F_max.
FminResult min_required_fidelity(Strategy st, Scenario sc, double p_l);

// Local-noise equivalent: channel reliability p such that E_p applied to the
// listed vertices of the perfect state of g has the given fidelity.
// Increasing in the fidelity; the zero-reliability floor is the lower limit.
double lne(double fidelity, const Graph& g, uint32_t noisy_vertices, double tol = 1e-6);

// White-noise weight x below which ideal-operation direct purification stops
// converging on the 5-ring (bisection to tol).
double mepp_static_threshold_x(double tol = 1e-4);

// White-noise weight x at which the pair extracted from the ring loses its
// negative partial transpose (bisection to tol; analytically 1/3).
double bepp_static_threshold_x(double tol = 1e-10);

struct YieldBoundReport {
    std::array<double, 10> cut_entropies{};  // 2-vs-3 bipartitions, A-mask ascending
    double max_entropy_deviation = 0.0;      // from the common value 2
    double max_decomposition_error = 0.0;    // product mixture vs traced state
    int pair_split_count = 0;                // cuts separating a fixed pair (6)
    int pair_inside_count = 0;               // cuts with a fixed pair inside B (3)
    long bound_num = 0, bound_den = 0;       // assembled yield bound, reduced

    double bound() const { return double(bound_num) / double(bound_den); }
};

// Entropy and separability inputs to the ring -> pairs -> ring yield bound,
// recomputed from the dense state, and the assembled bound \tilde M/M <= 2/3.
YieldBoundReport yield_bound_ring();

struct StrategyOutcome {
    Strategy strategy{};
    Scenario scenario{};
    double p_l = 1.0;
    double f_max = std::numeric_limits<double>::quiet_NaN();
    double f_min = std::numeric_limits<double>::quiet_NaN();
    double lne_fmax = std::numeric_limits<double>::quiet_NaN();
    double lne_fmin = std::numeric_limits<double>::quiet_NaN();
    double q_min = std::numeric_limits<double>::quiet_NaN();  // communication only
    int iterations = 0;
    bool converged = false;
};

StrategyOutcome evaluate_strategy(Strategy st, Scenario sc, double p_l);

}  // namespace gsp
