#pragma once
#include <array>
#include <utility>

#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"

namespace gsp {

// Pair state diagonal in the 2-vertex graph basis; p[w] with bit 0 of w the
// first vertex's stabilizer sign. Fidelity is p[0].
struct BellDiagState {
    std::array<double, 4> p{1.0, 0.0, 0.0, 0.0};

    double fidelity() const { return p[0]; }
};

// Graph-basis analogue of a Werner pair: weight f on the perfect state, the
// rest spread evenly.
BellDiagState werner_pair(double f);

// z measurement of ring vertices 1,2,3 with outcome corrections on the two
// survivors; on diagonal coefficients the kept pair (0,4) is the exact
// marginal over the measured bits. Deterministic.
BellDiagState extract_pair_from_ring(const DiagState& ring);

// One bilateral recurrence round: source pair CNOTed into the target pair,
// source measured, kept on even joint parity. With p_l < 1 both qubits of
// both pairs are depolarized first. j picks the purified sign sector (0 =
// first vertex, 1 = second); alternating j each round purifies both sectors.
std::pair<BellDiagState, double> bell_recurrence_step(const BellDiagState& a,
                                                      const BellDiagState& b,
                                                      const NoiseParams& noise = {}, int j = 0);

// Minimum eigenvalue of the pair's partial transpose; negative means
// distillable (exact for two qubits).
double pair_ppt_min_eigenvalue(const BellDiagState& pair);
bool pair_distillable(const BellDiagState& pair);

// Teleport a locally created ring through four purified pairs, one per
// vertex 1..4 (the builder keeps vertex 0). Each teleported qubit passes
// through the Pauli channel read off its pair: identity from p[0], a phase
// flip from p[1], a bit flip from p[2], both from p[3].
DiagState teleport_ring_through_pairs(const DiagState& ring,
                                      const std::array<BellDiagState, 4>& pairs);

}  // namespace gsp
