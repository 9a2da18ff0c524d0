#include "gsp/diag_state.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gsp {

DiagState white_noise_state(const Graph& g, double f) {
    if (f < 0.0 || f > 1.0) throw std::invalid_argument("fidelity outside [0,1]");
    size_t N = size_t{1} << g.n;
    DiagState s{g, std::vector<double>(N, (1.0 - f) / double(N - 1))};
    s.lam[0] = f;
    return s;
}

double x_to_fidelity(int n, double x) {
    double N = double(size_t{1} << n);
    return x + (1.0 - x) / N;
}

double fidelity_to_x(int n, double f) {
    double N = double(size_t{1} << n);
    return f - (1.0 - f) / (N - 1.0);
}

DiagState x_state(const Graph& g, double x) {
    size_t N = size_t{1} << g.n;
    DiagState s{g, std::vector<double>(N, (1.0 - x) / double(N))};
    s.lam[0] += x;
    return s;
}

uint32_t pauli_index_action(const Graph& g, char letter, int a) {
    uint32_t mz = 1u << a;
    uint32_t mx = g.adj[static_cast<size_t>(a)];
    switch (letter) {
        case 'Z': return mz;
        case 'X': return mx;
        case 'Y': return mz ^ mx;
        default: throw std::invalid_argument("pauli letter must be X, Y or Z");
    }
}

DiagState apply_depolarizing(const DiagState& s, int a, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("reliability outside [0,1]");
    uint32_t mz = pauli_index_action(s.g, 'Z', a);
    uint32_t mx = pauli_index_action(s.g, 'X', a);
    uint32_t my = mz ^ mx;
    double keep = p + (1.0 - p) / 4.0, mix = (1.0 - p) / 4.0;
    size_t N = s.lam.size();
    DiagState out{s.g, std::vector<double>(N)};
    for (size_t mu = 0; mu < N; ++mu)
        out.lam[mu] = keep * s.lam[mu] + mix * (s.lam[mu ^ mz] + s.lam[mu ^ mx] + s.lam[mu ^ my]);
    return out;
}

DiagState apply_depolarizing_masked(const DiagState& s, uint32_t vertices, double p) {
    DiagState out = s;
    for (int a = 0; a < s.g.n; ++a)
        if (vertices >> a & 1u) out = apply_depolarizing(out, a, p);
    return out;
}

void check_normalization(DiagState& s) {
    double sum = std::accumulate(s.lam.begin(), s.lam.end(), 0.0);
    double drift = std::fabs(sum - 1.0);
    if (drift > 1e-6) throw std::runtime_error("diagonal state normalization lost");
    if (drift > 1e-9)
        for (double& v : s.lam) v /= sum;
}

double shannon_entropy_bits(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p)
        if (v > 0.0) s -= v * std::log2(v);
    return s;
}

}  // namespace gsp
