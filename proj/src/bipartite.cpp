#include "gsp/bipartite.hpp"

#include <stdexcept>
#include <vector>

#include "gsp/oracle.hpp"
#include "gsp/purify.hpp"

namespace gsp {

BellDiagState werner_pair(double f) {
    if (f < 0.0 || f > 1.0) throw std::invalid_argument("fidelity outside [0,1]");
    double rest = (1.0 - f) / 3.0;
    return BellDiagState{{f, rest, rest, rest}};
}

BellDiagState extract_pair_from_ring(const DiagState& ring) {
    if (!(ring.g == ring_graph(5)))
        throw std::invalid_argument("pair extraction expects the 5-ring");
    BellDiagState pair;
    pair.p.fill(0.0);
    for (uint32_t mu = 0; mu < 32; ++mu) {
        uint32_t w = (mu & 1u) | ((mu >> 3) & 2u);  // survivors 0 and 4
        pair.p[w] += ring.lam[mu];
    }
    return pair;
}

std::pair<BellDiagState, double> bell_recurrence_step(const BellDiagState& a,
                                                      const BellDiagState& b,
                                                      const NoiseParams& noise, int j) {
    Graph edge = path_graph(2);
    Coloring c;
    c.classes = {0b01u, 0b10u};
    DiagState sa{edge, {a.p[0], a.p[1], a.p[2], a.p[3]}};
    DiagState sb{edge, {b.p[0], b.p[1], b.p[2], b.p[3]}};
    StepReport rep = subprotocol_pj(sa, sb, c, j, noise);
    BellDiagState out;
    for (int i = 0; i < 4; ++i) out.p[size_t(i)] = rep.out.lam[size_t(i)];
    return {out, rep.p_success};
}

double pair_ppt_min_eigenvalue(const BellDiagState& pair) {
    DiagState s{path_graph(2), {pair.p[0], pair.p[1], pair.p[2], pair.p[3]}};
    return oracle::ppt_min_eigenvalue(oracle::dense_from_diag(s));
}

bool pair_distillable(const BellDiagState& pair) {
    return pair_ppt_min_eigenvalue(pair) < -1e-12;
}

DiagState teleport_ring_through_pairs(const DiagState& ring,
                                      const std::array<BellDiagState, 4>& pairs) {
    if (!(ring.g == ring_graph(5)))
        throw std::invalid_argument("teleportation expects the 5-ring");
    DiagState out = ring;
    for (int i = 0; i < 4; ++i) {
        int a = i + 1;
        uint32_t mz = pauli_index_action(ring.g, 'Z', a);
        uint32_t mx = pauli_index_action(ring.g, 'X', a);
        const auto& p = pairs[size_t(i)].p;
        std::vector<double> next(out.lam.size());
        for (size_t mu = 0; mu < out.lam.size(); ++mu)
            next[mu] = p[0] * out.lam[mu] + p[1] * out.lam[mu ^ mz] +
                       p[2] * out.lam[mu ^ mx] + p[3] * out.lam[mu ^ mz ^ mx];
        out.lam = std::move(next);
    }
    return out;
}

}  // namespace gsp
