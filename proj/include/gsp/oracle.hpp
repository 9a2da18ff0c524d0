#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"

namespace gsp::oracle {

inline constexpr int kMaxQubits = 12;

// Dense density matrix on m qubits, row-major, little-endian bit order shared
// with BasisIndex. Used only as the independent truth source in tests.
struct Dense {
    int m = 0;
    std::vector<std::complex<double>> a;  // (1<<m) x (1<<m)

    size_t dim() const { return size_t{1} << m; }
    std::complex<double>& at(size_t r, size_t c) { return a[r * dim() + c]; }
    const std::complex<double>& at(size_t r, size_t c) const { return a[r * dim() + c]; }
};

Dense zero_dm(int m);
double trace_real(const Dense& rho);

// amplitudes of |mu>_G in the computational basis, all entries +-1/sqrt(2^n)
std::vector<double> graph_basis_amps(const Graph& g, uint32_t mu);

Dense dense_from_diag(const DiagState& s);

// lo keeps the low qubit positions, hi is appended above them
Dense tensor(const Dense& lo, const Dense& hi);

void apply_cnot(Dense& rho, int ctrl, int tgt);

// conjugation by the real Pauli word X^{xmask} Z^{zmask} (disjoint masks)
void conj_pauli_word(Dense& rho, uint32_t xmask, uint32_t zmask);

// rho <- P rho P with P = (1 + X^{xmask} Z^{zmask})/2, unnormalized
void project_stabilizer(Dense& rho, uint32_t xmask, uint32_t zmask);

// rho <- P rho P for P = |bit><bit| on one qubit, unnormalized
void project_z(Dense& rho, int qubit, int bit);

// rho <- P rho P for P = (1 + sign*X_qubit)/2, unnormalized
void project_x(Dense& rho, int qubit, int sign);

void conj_sigma_z(Dense& rho, int qubit);
void depolarize_dense(Dense& rho, int qubit, double p);

Dense partial_trace_keep(const Dense& rho, int m, uint32_t keep_mask);

struct DiagExtract {
    DiagState state;
    double max_offdiag = 0.0;
};

// diagonal of rho in the graph basis of g; also the largest off-diagonal
DiagExtract extract_diag(const Dense& rho, const Graph& g);

double ppt_min_eigenvalue(const Dense& rho_2qubit);
double vn_entropy_bits(const Dense& rho);

struct OracleStep {
    DiagState out;
    double p_success = 1.0;
    double max_offdiag = 0.0;
};

// Full-circuit simulations of the engine maps (CNOT pattern, measurements,
// byproduct corrections, post-selection), first principles only.
OracleStep subprotocol_pj(const DiagState& rho, const DiagState& aux, const Coloring& c, int j,
                          double p_l = 1.0);
OracleStep prepare_auxiliary(const DiagState& rho1, const DiagState& rho2, const Coloring& c,
                             int j, bool purifying, double p_l = 1.0);
OracleStep merge_states(const DiagState& s1, int v1, const DiagState& s2, int v2);

// same identification applied to two vertices of a single state: vb is
// projected onto va (both parity outcomes kept, the flipped one corrected by
// sigma_z on N_vb) and removed
OracleStep merge_within(const DiagState& s, int va, int vb);

// sigma_z measurement of every vertex in victims, all outcome branches kept
// after phasing each measured vertex's surviving neighbors, measured qubits
// traced out; result lives on the graph with those vertices deleted
OracleStep erase_vertices(const DiagState& s, uint32_t victims);

// sigma_z measurement of three consecutive ring vertices {1,2,3} with
// outcome corrections, keeping the edge (0,4) relabeled to bits (0,1)
struct PairExtract {
    std::vector<double> bell;  // 4 graph-basis weights of the 2-vertex edge graph
    double max_offdiag = 0.0;
};
PairExtract extract_pair(const DiagState& ring);

// one recurrence step of two Bell-diagonal pairs through the chosen bilateral
// circuit (source pair CNOTed into target, target measured), post-selected
std::pair<std::vector<double>, double> bell_recurrence_step_dense(
    const std::vector<double>& p, const std::vector<double>& q, double p_l = 1.0);

}  // namespace gsp::oracle
