#include "gsp/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace gsp::oracle {

namespace {

using cplx = std::complex<double>;

void require_size(int m) {
    if (m < 1 || m > kMaxQubits) throw std::invalid_argument("oracle qubit limit exceeded");
}

int popcount32(uint32_t v) { return __builtin_popcount(v); }

// pure-state helpers; the transfer tensors below are built from basis runs
struct Vec {
    int m;
    std::vector<cplx> a;
};

void vec_cnot(Vec& v, int ctrl, int tgt) {
    size_t d = size_t{1} << v.m;
    for (size_t z = 0; z < d; ++z) {
        size_t z2 = z ^ ((z >> ctrl & 1u) << tgt);
        if (z2 > z) std::swap(v.a[z], v.a[z2]);
    }
}

void vec_project_stabilizer(Vec& v, uint32_t xmask, uint32_t zmask) {
    std::vector<cplx> out(v.a.size());
    for (size_t y = 0; y < v.a.size(); ++y) {
        double s = (popcount32(uint32_t(y) & zmask) & 1) ? -1.0 : 1.0;
        out[y ^ xmask] = s * v.a[y];
    }
    for (size_t y = 0; y < v.a.size(); ++y) v.a[y] = 0.5 * (v.a[y] + out[y]);
}

void vec_project_z(Vec& v, int qubit, int bit) {
    for (size_t y = 0; y < v.a.size(); ++y)
        if (int(y >> qubit & 1u) != bit) v.a[y] = 0.0;
}

void vec_project_x(Vec& v, int qubit, int sign) {
    size_t bit = size_t{1} << qubit;
    double s = sign < 0 ? -1.0 : 1.0;
    for (size_t y = 0; y < v.a.size(); ++y) {
        if (y & bit) continue;
        cplx lo = v.a[y], hi = v.a[y | bit];
        v.a[y] = 0.5 * (lo + s * hi);
        v.a[y | bit] = 0.5 * (hi + s * lo);
    }
}

void vec_conj_sigma_z(Vec& v, int qubit) {
    for (size_t y = 0; y < v.a.size(); ++y)
        if (y >> qubit & 1u) v.a[y] = -v.a[y];
}

}  // namespace

Dense zero_dm(int m) {
    require_size(m);
    Dense d;
    d.m = m;
    d.a.assign((size_t{1} << m) * (size_t{1} << m), cplx{0.0, 0.0});
    return d;
}

double trace_real(const Dense& rho) {
    double t = 0.0;
    for (size_t r = 0; r < rho.dim(); ++r) t += rho.at(r, r).real();
    return t;
}

std::vector<double> graph_basis_amps(const Graph& g, uint32_t mu) {
    size_t N = size_t{1} << g.n;
    std::vector<double> v(N, 1.0 / std::sqrt(double(N)));
    for (size_t y = 0; y < N; ++y) {
        int sgn = 0;
        for (auto [a, b] : g.edges) sgn ^= int(y >> a & 1u) & int(y >> b & 1u);
        for (int a = 0; a < g.n; ++a) sgn ^= int(mu >> a & 1u) & int(y >> a & 1u);
        if (sgn) v[y] = -v[y];
    }
    return v;
}

Dense dense_from_diag(const DiagState& s) {
    require_size(s.g.n);
    Dense rho = zero_dm(s.g.n);
    size_t N = rho.dim();
    for (uint32_t mu = 0; mu < N; ++mu) {
        if (s.lam[mu] == 0.0) continue;
        auto v = graph_basis_amps(s.g, mu);
        for (size_t r = 0; r < N; ++r)
            for (size_t c = 0; c < N; ++c) rho.at(r, c) += s.lam[mu] * v[r] * v[c];
    }
    return rho;
}

Dense tensor(const Dense& lo, const Dense& hi) {
    require_size(lo.m + hi.m);
    Dense out = zero_dm(lo.m + hi.m);
    size_t dl = lo.dim(), dh = hi.dim();
    for (size_t rh = 0; rh < dh; ++rh)
        for (size_t ch = 0; ch < dh; ++ch) {
            cplx h = hi.at(rh, ch);
            if (h == cplx{}) continue;
            for (size_t rl = 0; rl < dl; ++rl)
                for (size_t cl = 0; cl < dl; ++cl)
                    out.at((rh << lo.m) | rl, (ch << lo.m) | cl) = h * lo.at(rl, cl);
        }
    return out;
}

void apply_cnot(Dense& rho, int ctrl, int tgt) {
    size_t d = rho.dim();
    auto perm = [&](size_t z) { return z ^ ((z >> ctrl & 1u) << tgt); };
    Dense out = zero_dm(rho.m);
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c) out.at(perm(r), perm(c)) = rho.at(r, c);
    rho = std::move(out);
}

void conj_pauli_word(Dense& rho, uint32_t xmask, uint32_t zmask) {
    size_t d = rho.dim();
    std::vector<double> sgn(d);
    for (size_t y = 0; y < d; ++y) sgn[y] = (popcount32(uint32_t(y) & zmask) & 1) ? -1.0 : 1.0;
    Dense out = zero_dm(rho.m);
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c)
            out.at(r ^ xmask, c ^ xmask) = sgn[r] * sgn[c] * rho.at(r, c);
    rho = std::move(out);
}

void project_stabilizer(Dense& rho, uint32_t xmask, uint32_t zmask) {
    size_t d = rho.dim();
    std::vector<double> sgn(d);
    for (size_t y = 0; y < d; ++y) sgn[y] = (popcount32(uint32_t(y) & zmask) & 1) ? -1.0 : 1.0;
    Dense out = zero_dm(rho.m);
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c) {
            cplx plain = rho.at(r, c);
            cplx krhok = sgn[r ^ xmask] * sgn[c ^ xmask] * rho.at(r ^ xmask, c ^ xmask);
            cplx krho = sgn[r ^ xmask] * rho.at(r ^ xmask, c);
            cplx rhok = sgn[c ^ xmask] * rho.at(r, c ^ xmask);
            out.at(r, c) = 0.25 * (plain + krhok + krho + rhok);
        }
    rho = std::move(out);
}

void project_z(Dense& rho, int qubit, int bit) {
    size_t d = rho.dim();
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c)
            if (int(r >> qubit & 1u) != bit || int(c >> qubit & 1u) != bit)
                rho.at(r, c) = cplx{};
}

void project_x(Dense& rho, int qubit, int sign) {
    size_t d = rho.dim(), bit = size_t{1} << qubit;
    double s = sign < 0 ? -1.0 : 1.0;
    Dense out = zero_dm(rho.m);
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c)
            out.at(r, c) = 0.25 * (rho.at(r, c) + rho.at(r ^ bit, c ^ bit) +
                                   s * rho.at(r ^ bit, c) + s * rho.at(r, c ^ bit));
    rho = std::move(out);
}

void conj_sigma_z(Dense& rho, int qubit) { conj_pauli_word(rho, 0u, 1u << qubit); }

void depolarize_dense(Dense& rho, int qubit, double p) {
    Dense x = rho, z = rho, y = rho;
    conj_pauli_word(x, 1u << qubit, 0u);
    conj_pauli_word(z, 0u, 1u << qubit);
    conj_pauli_word(y, 1u << qubit, 1u << qubit);
    double mix = (1.0 - p) / 4.0;
    for (size_t i = 0; i < rho.a.size(); ++i)
        rho.a[i] = (p + mix) * rho.a[i] + mix * (x.a[i] + z.a[i] + y.a[i]);
}

Dense partial_trace_keep(const Dense& rho, int m, uint32_t keep_mask) {
    std::vector<int> keep, drop;
    for (int q = 0; q < m; ++q) (keep_mask >> q & 1u ? keep : drop).push_back(q);
    if (keep.empty()) throw std::invalid_argument("partial trace keeping nothing");
    int mk = int(keep.size());
    Dense out = zero_dm(mk);
    size_t dk = size_t{1} << mk, dd = size_t{1} << drop.size();
    for (size_t rk = 0; rk < dk; ++rk)
        for (size_t ck = 0; ck < dk; ++ck) {
            cplx s{};
            for (size_t zd = 0; zd < dd; ++zd) {
                size_t r = 0, c = 0;
                for (int i = 0; i < mk; ++i) {
                    r |= (rk >> i & 1u) << keep[size_t(i)];
                    c |= (ck >> i & 1u) << keep[size_t(i)];
                }
                for (size_t i = 0; i < drop.size(); ++i) {
                    r |= (zd >> i & 1u) << drop[i];
                    c |= (zd >> i & 1u) << drop[i];
                }
                s += rho.at(r, c);
            }
            out.at(rk, ck) = s;
        }
    return out;
}

DiagExtract extract_diag(const Dense& rho, const Graph& g) {
    size_t N = size_t{1} << g.n;
    if (rho.dim() != N) throw std::invalid_argument("extract_diag size mismatch");
    std::vector<std::vector<double>> B(N);
    for (uint32_t mu = 0; mu < N; ++mu) B[mu] = graph_basis_amps(g, mu);
    DiagExtract res{DiagState{g, std::vector<double>(N, 0.0)}, 0.0};
    std::vector<cplx> rb(N);
    for (uint32_t nu = 0; nu < N; ++nu) {
        for (size_t r = 0; r < N; ++r) {
            cplx s{};
            for (size_t c = 0; c < N; ++c) s += rho.at(r, c) * B[nu][c];
            rb[r] = s;
        }
        for (uint32_t mu = 0; mu < N; ++mu) {
            cplx m{};
            for (size_t r = 0; r < N; ++r) m += B[mu][r] * rb[r];
            if (mu == nu)
                res.state.lam[mu] = m.real();
            else
                res.max_offdiag = std::max(res.max_offdiag, std::abs(m));
        }
    }
    return res;
}

double ppt_min_eigenvalue(const Dense& rho) {
    if (rho.m != 2) throw std::invalid_argument("ppt check expects a 2-qubit state");
    Eigen::Matrix4cd pt;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            // partial transpose on the high qubit
            int rt = (r & 1) | (c & 2), ct = (c & 1) | (r & 2);
            pt(r, c) = rho.at(size_t(rt), size_t(ct));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt);
    return es.eigenvalues().minCoeff();
}

double vn_entropy_bits(const Dense& rho) {
    size_t d = rho.dim();
    Eigen::MatrixXcd m(d, d);
    for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c) m(long(r), long(c)) = rho.at(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    double s = 0.0;
    for (long i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()[i];
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return s;
}

namespace {

// variants: 0 = purification sub-protocol, 1 = plain creation, 2 = purifying creation
struct CircuitSpec {
    const Graph& G;        // graph of copy 1
    const Graph& G2;       // graph of copy 2 (aux basis for variant 0)
    const Graph& g_out;    // basis the output is read in
    const Graph& gj;       // color subgraph, supplies stabilizers and x-signs
    uint32_t mask;
    int variant;
};

struct ReducedDiag {
    std::vector<double> w;
    double max_offdiag;
};

// graph-basis diagonal of Tr_high |psi><psi| plus its largest off-diagonal
ReducedDiag reduced_diag(const Vec& psi, int n_low, const Graph& g_out) {
    size_t Nlo = size_t{1} << n_low;
    size_t Nhi = psi.a.size() / Nlo;
    size_t Nout = size_t{1} << g_out.n;
    std::vector<std::vector<cplx>> coef(Nout, std::vector<cplx>(Nhi));
    for (uint32_t mu = 0; mu < Nout; ++mu) {
        auto b = graph_basis_amps(g_out, mu);
        for (size_t y2 = 0; y2 < Nhi; ++y2) {
            cplx amp{};
            for (size_t y1 = 0; y1 < Nlo; ++y1) amp += b[y1] * psi.a[(y2 << n_low) | y1];
            coef[mu][y2] = amp;
        }
    }
    ReducedDiag rd{std::vector<double>(Nout, 0.0), 0.0};
    for (uint32_t mu = 0; mu < Nout; ++mu) {
        for (size_t y2 = 0; y2 < Nhi; ++y2) rd.w[mu] += std::norm(coef[mu][y2]);
        for (uint32_t nu = mu + 1; nu < Nout; ++nu) {
            cplx s{};
            for (size_t y2 = 0; y2 < Nhi; ++y2) s += coef[mu][y2] * std::conj(coef[nu][y2]);
            rd.max_offdiag = std::max(rd.max_offdiag, std::abs(s));
        }
    }
    return rd;
}

// transversal CNOTs between the copies: measured-class vertices receive, the
// rest send into copy 2
template <typename State, typename CnotFn>
void apply_copy_cnots(State& st, int n, uint32_t mask, CnotFn cnot) {
    for (int a = 0; a < n; ++a) {
        if (mask >> a & 1u)
            cnot(st, n + a, a);
        else
            cnot(st, a, n + a);
    }
}

ReducedDiag run_pair_circuit(const CircuitSpec& cs, uint32_t mu, uint32_t nu) {
    int n = cs.G.n;
    auto b1 = graph_basis_amps(cs.G, mu);
    auto b2 = graph_basis_amps(cs.G2, nu);
    Vec psi{2 * n, std::vector<cplx>(size_t{1} << (2 * n))};
    size_t N = size_t{1} << n;
    for (size_t y2 = 0; y2 < N; ++y2)
        for (size_t y1 = 0; y1 < N; ++y1) psi.a[(y2 << n) | y1] = b1[y1] * b2[y2];
    apply_copy_cnots(psi, n, cs.mask,
                     [](Vec& v, int c, int t) { vec_cnot(v, c, t); });
    if (cs.variant == 0) {
        for (int a = 0; a < n; ++a)
            if (cs.mask >> a & 1u)
                vec_project_stabilizer(psi, 1u << (n + a), cs.gj.adj[size_t(a)] << n);
        return reduced_diag(psi, n, cs.g_out);
    }
    std::vector<int> ab;
    for (int b = 0; b < n; ++b)
        if (!(cs.mask >> b & 1u)) ab.push_back(b);
    ReducedDiag acc{std::vector<double>(size_t{1} << cs.g_out.n, 0.0), 0.0};
    for (uint32_t zz = 0; zz < (1u << ab.size()); ++zz) {
        Vec branch = psi;
        uint32_t zeta = 0;
        for (size_t i = 0; i < ab.size(); ++i)
            if (zz >> i & 1u) zeta |= 1u << ab[i];
        for (int b : ab) vec_project_z(branch, n + b, int(zeta >> b & 1u));
        // a zeta hit on a measured vertex phase-flips its kept-copy neighbors
        // inside the measured set
        for (int b : ab)
            if (zeta >> b & 1u)
                for (int b2 : ab)
                    if (cs.G.adj[size_t(b)] >> b2 & 1u) vec_conj_sigma_z(branch, b2);
        if (cs.variant == 2) {
            // keep only the x readouts consistent with the zeta byproducts
            for (int a = 0; a < n; ++a) {
                if (!(cs.mask >> a & 1u)) continue;
                int par = popcount32(cs.G.adj[size_t(a)] & zeta) & 1;
                vec_project_x(branch, n + a, par ? -1 : +1);
            }
        }
        auto rd = reduced_diag(branch, n, cs.g_out);
        for (size_t i = 0; i < acc.w.size(); ++i) acc.w[i] += rd.w[i];
        acc.max_offdiag = std::max(acc.max_offdiag, rd.max_offdiag);
    }
    return acc;
}

struct TensorKey {
    std::vector<std::pair<int, int>> edges1, edges2;
    int n;
    uint32_t mask;
    int variant;
    bool operator<(const TensorKey& o) const {
        return std::tie(n, mask, variant, edges1, edges2) <
               std::tie(o.n, o.mask, o.variant, o.edges1, o.edges2);
    }
};

struct CachedTensor {
    std::vector<std::vector<double>> rows;  // indexed by (mu<<n)|nu
    double max_offdiag = 0.0;
};

std::map<TensorKey, CachedTensor> g_tensor_cache;
std::mutex g_tensor_mutex;

const CachedTensor& transfer_tensor(const CircuitSpec& cs) {
    TensorKey key{cs.G.edges, cs.G2.edges, cs.G.n, cs.mask, cs.variant};
    std::lock_guard<std::mutex> lk(g_tensor_mutex);
    auto it = g_tensor_cache.find(key);
    if (it == g_tensor_cache.end()) {
        int n = cs.G.n;
        CachedTensor ct;
        ct.rows.resize(size_t{1} << (2 * n));
        for (uint32_t mu = 0; mu < (1u << n); ++mu)
            for (uint32_t nu = 0; nu < (1u << n); ++nu) {
                auto rd = run_pair_circuit(cs, mu, nu);
                ct.max_offdiag = std::max(ct.max_offdiag, rd.max_offdiag);
                ct.rows[(size_t(mu) << n) | nu] = std::move(rd.w);
            }
        it = g_tensor_cache.emplace(std::move(key), std::move(ct)).first;
    }
    return it->second;
}

// noisy route: simulate the channel on the joint density matrix directly
OracleStep run_dm_circuit(const DiagState& r1, const DiagState& r2, const CircuitSpec& cs,
                          double p_l) {
    int n = cs.G.n;
    require_size(2 * n);
    Dense joint = tensor(dense_from_diag(r1), dense_from_diag(r2));
    if (p_l < 1.0)
        for (int q = 0; q < 2 * n; ++q) depolarize_dense(joint, q, p_l);
    apply_copy_cnots(joint, n, cs.mask,
                     [](Dense& d, int c, int t) { apply_cnot(d, c, t); });
    Dense acc = zero_dm(n);
    if (cs.variant == 0) {
        for (int a = 0; a < n; ++a)
            if (cs.mask >> a & 1u)
                project_stabilizer(joint, 1u << (n + a), cs.gj.adj[size_t(a)] << n);
        acc = partial_trace_keep(joint, 2 * n, (1u << n) - 1u);
    } else {
        std::vector<int> ab;
        for (int b = 0; b < n; ++b)
            if (!(cs.mask >> b & 1u)) ab.push_back(b);
        for (uint32_t zz = 0; zz < (1u << ab.size()); ++zz) {
            Dense branch = joint;
            uint32_t zeta = 0;
            for (size_t i = 0; i < ab.size(); ++i)
                if (zz >> i & 1u) zeta |= 1u << ab[i];
            for (int b : ab) project_z(branch, n + b, int(zeta >> b & 1u));
            for (int b : ab)
                if (zeta >> b & 1u)
                    for (int b2 : ab)
                        if (cs.G.adj[size_t(b)] >> b2 & 1u) conj_sigma_z(branch, b2);
            if (cs.variant == 2) {
                for (int a = 0; a < n; ++a) {
                    if (!(cs.mask >> a & 1u)) continue;
                    int par = popcount32(cs.G.adj[size_t(a)] & zeta) & 1;
                    project_x(branch, n + a, par ? -1 : +1);
                }
            }
            Dense red = partial_trace_keep(branch, 2 * n, (1u << n) - 1u);
            for (size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += red.a[i];
        }
    }
    auto ext = extract_diag(acc, cs.g_out);
    double p = 0.0;
    for (double v : ext.state.lam) p += v;
    if (p <= 0.0) throw std::runtime_error("all weight rejected");
    for (double& v : ext.state.lam) v /= p;
    return OracleStep{std::move(ext.state), p, ext.max_offdiag};
}

OracleStep run_diag_circuit(const DiagState& r1, const DiagState& r2, const CircuitSpec& cs) {
    int n = cs.G.n;
    require_size(2 * n);
    const CachedTensor& ct = transfer_tensor(cs);
    size_t N = size_t{1} << n;
    OracleStep s{DiagState{cs.g_out, std::vector<double>(size_t{1} << cs.g_out.n, 0.0)}, 0.0,
                 ct.max_offdiag};
    for (uint32_t mu = 0; mu < N; ++mu) {
        if (r1.lam[mu] == 0.0) continue;
        for (uint32_t nu = 0; nu < N; ++nu) {
            double wgt = r1.lam[mu] * r2.lam[nu];
            if (wgt == 0.0) continue;
            const auto& row = ct.rows[(size_t(mu) << n) | nu];
            for (size_t g = 0; g < s.out.lam.size(); ++g) s.out.lam[g] += wgt * row[g];
        }
    }
    double p = 0.0;
    for (double v : s.out.lam) p += v;
    if (p <= 0.0) throw std::runtime_error("all weight rejected");
    for (double& v : s.out.lam) v /= p;
    s.p_success = p;
    return s;
}

}  // namespace

OracleStep subprotocol_pj(const DiagState& rho, const DiagState& aux, const Coloring& c, int j,
                          double p_l) {
    const Graph& G = rho.g;
    Graph gj = derive_gj(G, c, j);
    if (!(aux.g == gj)) throw std::invalid_argument("aux graph must match the color subgraph");
    CircuitSpec cs{G, gj, G, gj, c.mask(j), 0};
    if (p_l < 1.0) return run_dm_circuit(rho, aux, cs, p_l);
    return run_diag_circuit(rho, aux, cs);
}

OracleStep prepare_auxiliary(const DiagState& rho1, const DiagState& rho2, const Coloring& c,
                             int j, bool purifying, double p_l) {
    const Graph& G = rho1.g;
    if (!(rho2.g == G)) throw std::invalid_argument("inputs must share one graph");
    Graph gj = derive_gj(G, c, j);
    CircuitSpec cs{G, G, gj, gj, c.mask(j), purifying ? 2 : 1};
    OracleStep s = p_l < 1.0 ? run_dm_circuit(rho1, rho2, cs, p_l)
                             : run_diag_circuit(rho1, rho2, cs);
    if (!purifying) s.p_success = 1.0;
    return s;
}

OracleStep merge_states(const DiagState& s1, int v1, const DiagState& s2, int v2) {
    int m = s1.g.n + s2.g.n;
    require_size(m);
    Dense joint = tensor(dense_from_diag(s1), dense_from_diag(s2));
    int qa = v1, qb = s1.g.n + v2;
    size_t dout = size_t{1} << (m - 1);
    Dense out = zero_dm(m - 1);
    std::vector<int> map2;
    Graph merged = merge_graphs(s1.g, v1, s2.g, v2, &map2);
    // corrections for the flipped outcome: phase the merged-in neighborhood
    uint32_t corr = 0;
    for (int b = 0; b < s2.g.n; ++b)
        if (s2.g.adj[size_t(v2)] >> b & 1u) corr |= 1u << map2[size_t(b)];
    auto expand = [&](size_t z) {  // insert an empty slot at qb
        size_t lo = z & ((size_t{1} << qb) - 1), hi = z >> qb;
        return lo | (hi << (qb + 1));
    };
    for (int outcome = 0; outcome < 2; ++outcome) {
        Dense branch = zero_dm(m - 1);
        for (size_t r = 0; r < dout; ++r) {
            size_t rin = expand(r);
            rin |= size_t((rin >> qa & 1u) ^ unsigned(outcome)) << qb;
            for (size_t col = 0; col < dout; ++col) {
                size_t cin = expand(col);
                cin |= size_t((cin >> qa & 1u) ^ unsigned(outcome)) << qb;
                branch.at(r, col) = joint.at(rin, cin);
            }
        }
        if (outcome == 1)
            for (int s = 0; s < m - 1; ++s)
                if (corr >> s & 1u) conj_sigma_z(branch, s);
        for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += branch.a[i];
    }
    auto ext = extract_diag(out, merged);
    double p = 0.0;
    for (double v : ext.state.lam) p += v;
    for (double& v : ext.state.lam) v /= p;
    return OracleStep{std::move(ext.state), 1.0, ext.max_offdiag};
}

OracleStep merge_within(const DiagState& s, int va, int vb) {
    int m = s.g.n;
    require_size(m);
    Dense rho = dense_from_diag(s);
    std::vector<int> map;
    Graph merged = identify_vertices(s.g, va, vb, &map);
    uint32_t corr = 0;
    for (int b = 0; b < m; ++b)
        if (s.g.adj[size_t(vb)] >> b & 1u) corr |= 1u << map[size_t(b)];
    size_t dout = size_t{1} << (m - 1);
    Dense out = zero_dm(m - 1);
    auto expand = [&](size_t z) {  // insert an empty slot at vb
        size_t lo = z & ((size_t{1} << vb) - 1), hi = z >> vb;
        return lo | (hi << (vb + 1));
    };
    int qa = va < vb ? va : va - 1;  // va's position after the slot removal
    for (int outcome = 0; outcome < 2; ++outcome) {
        Dense branch = zero_dm(m - 1);
        for (size_t r = 0; r < dout; ++r) {
            size_t rin = expand(r);
            rin |= size_t((r >> qa & 1u) ^ unsigned(outcome)) << vb;
            for (size_t col = 0; col < dout; ++col) {
                size_t cin = expand(col);
                cin |= size_t((col >> qa & 1u) ^ unsigned(outcome)) << vb;
                branch.at(r, col) = rho.at(rin, cin);
            }
        }
        if (outcome == 1)
            for (int q = 0; q < m - 1; ++q)
                if (corr >> q & 1u) conj_sigma_z(branch, q);
        for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += branch.a[i];
    }
    auto ext = extract_diag(out, merged);
    double p = 0.0;
    for (double v : ext.state.lam) p += v;
    for (double& v : ext.state.lam) v /= p;
    return OracleStep{std::move(ext.state), 1.0, ext.max_offdiag};
}

OracleStep erase_vertices(const DiagState& s, uint32_t victims) {
    int m = s.g.n;
    require_size(m);
    Dense rho = dense_from_diag(s);
    std::vector<int> map;
    Graph rest = delete_vertices(s.g, victims, &map);
    uint32_t keep = ((1u << m) - 1u) & ~victims;
    Dense acc = zero_dm(rest.n);
    uint32_t nvic = 0;
    for (int v = 0; v < m; ++v) nvic += victims >> v & 1u;
    for (uint32_t z = 0; z < (1u << nvic); ++z) {
        Dense branch = rho;
        uint32_t bit = 0;
        for (int v = 0; v < m; ++v) {
            if (!(victims >> v & 1u)) continue;
            int outcome = int(z >> bit & 1u);
            project_z(branch, v, outcome);
            if (outcome)
                for (int b = 0; b < m; ++b)
                    if ((s.g.adj[size_t(v)] >> b & 1u) && (keep >> b & 1u)) conj_sigma_z(branch, b);
            ++bit;
        }
        Dense red = partial_trace_keep(branch, m, keep);
        for (size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += red.a[i];
    }
    auto ext = extract_diag(acc, rest);
    double p = 0.0;
    for (double v : ext.state.lam) p += v;
    for (double& v : ext.state.lam) v /= p;
    return OracleStep{std::move(ext.state), 1.0, ext.max_offdiag};
}

PairExtract extract_pair(const DiagState& ring) {
    if (!(ring.g == ring_graph(5)))
        throw std::invalid_argument("pair extraction expects the 5-ring");
    Dense rho = dense_from_diag(ring);
    Dense acc = zero_dm(2);
    for (uint32_t z = 0; z < 8; ++z) {
        Dense branch = rho;
        for (int i = 0; i < 3; ++i) project_z(branch, 1 + i, int(z >> i & 1u));
        // z outcomes on 1 and 3 phase their surviving neighbors
        if (z & 1u) conj_sigma_z(branch, 0);
        if (z & 4u) conj_sigma_z(branch, 4);
        Dense red = partial_trace_keep(branch, 5, (1u << 0) | (1u << 4));
        for (size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += red.a[i];
    }
    auto ext = extract_diag(acc, path_graph(2));
    double p = 0.0;
    for (double v : ext.state.lam) p += v;
    for (double& v : ext.state.lam) v /= p;
    return PairExtract{ext.state.lam, ext.max_offdiag};
}

std::pair<std::vector<double>, double> bell_recurrence_step_dense(const std::vector<double>& p,
                                                                  const std::vector<double>& q,
                                                                  double p_l) {
    Graph edge = path_graph(2);
    Coloring c;
    c.classes = {0b01u, 0b10u};
    DiagState sp{edge, p}, sq{edge, q};
    auto step = subprotocol_pj(sp, sq, c, 0, p_l);
    return {step.out.lam, step.p_success};
}

}  // namespace gsp::oracle
