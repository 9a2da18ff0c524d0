#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"

namespace gsp {

struct StepReport {
    DiagState out;
    double p_success = 1.0;
    std::string label;
};

// Index-pair permutation realized by the transversal CNOTs between a state
// over G and one over the color subgraph: class vertices receive, the rest
// send. Involution on (mu, nu).
struct IndexPairMap {
    uint32_t mask = 0;  // class-j vertex mask

    std::pair<uint32_t, uint32_t> operator()(uint32_t mu, uint32_t nu) const {
        return {mu ^ (nu & ~mask), nu ^ (mu & mask)};
    }
};

IndexPairMap multilateral_cnot_map(const Graph& g, const Coloring& c, int j);

// Distribution over parity-readout error syndromes for class j: each readout
// bit flips independently with probability (1-p_m)/2, and one z readout feeds
// every class parity it neighbors in gj. Entry [s] is the probability that
// the measured parities differ from the true ones by exactly the bits of s.
std::vector<double> readout_syndrome_weights(const Graph& gj, uint32_t class_mask, double p_m);

// One purification round: transversal CNOTs from the aux copy, parity
// readout on the aux, keep on the all-zero syndrome. Exact map on the
// diagonal coefficients; p_l depolarizes every qubit of both states first.
StepReport subprotocol_pj(const DiagState& rho, const DiagState& aux, const Coloring& c, int j,
                          const NoiseParams& noise = {});

// Two copies over G consumed into one state over the color subgraph. The
// plain variant keeps every measurement branch (deterministic); the
// purifying variant additionally post-selects the class parities, fusing
// creation with a first purification round. p_m is not consumed here.
StepReport prepare_auxiliary(const DiagState& rho1, const DiagState& rho2, const Coloring& c,
                             int j, bool purifying, const NoiseParams& noise = {});

enum class AuxSource { Fresh, Recycle, Fixed };

struct ScheduleStep {
    int color = 0;
    AuxSource aux = AuxSource::Fresh;
    int rounds = 1;  // kConverge repeats until the fidelity settles
};

inline constexpr int kConverge = -1;

struct Schedule {
    std::vector<ScheduleStep> steps;
};

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// [{"color": j, "aux": "fresh"|"recycle"|"fixed", "rounds": int|"converge"}]
Schedule parse_schedule(const std::string& json_text);

// Aux resolution per source: Fresh sends a perfect color-subgraph state
// through the channel (E_q with the q from NoiseParams on every vertex
// except 0, the keeper's); Recycle builds the aux from two copies of the
// current state; Fixed uses the caller's per-color states.
struct AuxContext {
    bool purifying_prep = true;
    std::vector<DiagState> fixed;  // indexed by color when used
};

std::vector<StepReport> run_schedule(const DiagState& rho, const Schedule& sched,
                                     const Coloring& c, const NoiseParams& noise = {},
                                     const AuxContext& aux = {});

// Projective identification of vertex v2 of s2 with v1 of s1, both parity
// outcomes kept after local correction. Exact map on the diagonal
// coefficients: the surviving bit at v1 becomes mu_v1 xor nu_v2, every other
// syndrome bit passes through unchanged.
StepReport merge_states(const DiagState& s1, int v1, const DiagState& s2, int v2);

// The same identification applied to two vertices of one state; vb is removed
// and its syndrome bit folds onto va.
StepReport merge_within(const DiagState& s, int va, int vb);

// sigma_z erasure of a vertex set: measure, correct, discard. On diagonal
// states this is exact marginalization of the erased bits.
StepReport erase_vertices_z(const DiagState& s, uint32_t victims);

}  // namespace gsp
