#pragma once
#include <cstdint>
#include <vector>

#include "gsp/graph.hpp"

namespace gsp {

// Mixed state diagonal in the graph basis of its graph: lam[mu] is the weight
// of the basis projector indexed by the stabilizer-sign word mu. Bit a of mu
// belongs to vertex a (little-endian).
struct DiagState {
    Graph g;
    std::vector<double> lam;

    double fidelity() const { return lam[0]; }
    size_t dim() const { return lam.size(); }
};

struct NoiseParams {
    double p_l = 1.0;  // local two-qubit gate reliability
    double q = 1.0;    // channel reliability
    double p_m = 1.0;  // readout reliability
};

DiagState white_noise_state(const Graph& g, double f);

// x-parameterization: lam = x * delta_0 + (1-x)/2^n uniform.
DiagState x_state(const Graph& g, double x);
double x_to_fidelity(int n, double x);
double fidelity_to_x(int n, double f);

// Flip mask m with P |mu><mu| P = |mu^m><mu^m| for P in {X,Y,Z} at vertex a:
// Z flips bit a, X flips the neighbor bits, Y flips both.
uint32_t pauli_index_action(const Graph& g, char letter, int a);

// Single-qubit depolarizing channel with reliability p, expressed on the
// diagonal coefficients. Trace-preserving for any p in [0,1].
DiagState apply_depolarizing(const DiagState& s, int a, double p);

// E_p on every vertex in the mask.
DiagState apply_depolarizing_masked(const DiagState& s, uint32_t vertices, double p);

// Renormalizes when |sum-1| exceeds 1e-9; throws past 1e-6.
void check_normalization(DiagState& s);

double shannon_entropy_bits(const std::vector<double>& p);

}  // namespace gsp
