#include "gsp/purify.hpp"

#include <cmath>
#include <stdexcept>

#include "gsp/oracle.hpp"
#include "json.hpp"

namespace gsp {

namespace {

// out[gamma] += lam1[mu] * lam2[nu] * w[(mu^nu) & mask] with
// gamma = (mu & mask) | ((mu^nu) & ~mask); w indexed by syndrome bits
std::vector<double> gamma_map(const std::vector<double>& lam1, const std::vector<double>& lam2,
                              uint32_t mask, const std::vector<double>& w) {
    size_t N = lam1.size();
    std::vector<double> out(N, 0.0);
    for (uint32_t mu = 0; mu < N; ++mu) {
        double l1 = lam1[mu];
        if (l1 == 0.0) continue;
        for (uint32_t nu = 0; nu < N; ++nu) {
            double wt = w[(mu ^ nu) & mask];
            if (wt == 0.0) continue;
            double l2 = lam2[nu];
            if (l2 == 0.0) continue;
            out[(mu & mask) | ((mu ^ nu) & ~mask & (N - 1))] += l1 * l2 * wt;
        }
    }
    return out;
}

std::vector<double> delta_weights(size_t N) {
    std::vector<double> w(N, 0.0);
    w[0] = 1.0;
    return w;
}

double normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    if (s <= 0.0) throw std::runtime_error("all weight rejected (p_success = 0)");
    for (double& x : v) x /= s;
    return s;
}

}  // namespace

IndexPairMap multilateral_cnot_map(const Graph& g, const Coloring& c, int j) {
    if (j < 0 || j >= c.k()) throw std::invalid_argument("color index out of range");
    uint32_t full = (g.n == 32) ? ~0u : ((1u << g.n) - 1u);
    return IndexPairMap{c.mask(j) & full};
}

std::vector<double> readout_syndrome_weights(const Graph& gj, uint32_t class_mask, double p_m) {
    size_t N = size_t{1} << gj.n;
    std::vector<double> w = delta_weights(N);
    if (p_m >= 1.0) return w;
    double eps = (1.0 - p_m) / 2.0;
    auto convolve = [&](uint32_t flip) {
        std::vector<double> nw(N);
        for (uint32_t s = 0; s < N; ++s) nw[s] = (1.0 - eps) * w[s] + eps * w[s ^ flip];
        w = std::move(nw);
    };
    for (int a = 0; a < gj.n; ++a) {
        if (class_mask >> a & 1u) {
            convolve(1u << a);  // x readout on the class vertex itself
        } else {
            uint32_t touched = gj.adj[size_t(a)] & class_mask;
            if (touched) convolve(touched);  // one z readout feeds all these parities
        }
    }
    return w;
}

StepReport subprotocol_pj(const DiagState& rho, const DiagState& aux, const Coloring& c, int j,
                          const NoiseParams& noise) {
    const Graph& G = rho.g;
    Graph gj = derive_gj(G, c, j);
    if (!(aux.g == gj))
        throw std::invalid_argument("aux state must live on the color subgraph");
    uint32_t full = (1u << G.n) - 1u;
    DiagState r1 = noise.p_l < 1.0 ? apply_depolarizing_masked(rho, full, noise.p_l) : rho;
    DiagState r2 = noise.p_l < 1.0 ? apply_depolarizing_masked(aux, full, noise.p_l) : aux;
    std::vector<double> w = noise.p_m < 1.0 ? readout_syndrome_weights(gj, c.mask(j), noise.p_m)
                                            : delta_weights(r1.lam.size());
    StepReport rep;
    rep.out = DiagState{G, gamma_map(r1.lam, r2.lam, c.mask(j), w)};
    rep.p_success = normalize(rep.out.lam);
    rep.label = "P" + std::to_string(j + 1);
    return rep;
}

StepReport prepare_auxiliary(const DiagState& rho1, const DiagState& rho2, const Coloring& c,
                             int j, bool purifying, const NoiseParams& noise) {
    const Graph& G = rho1.g;
    if (!(rho2.g == G)) throw std::invalid_argument("creation inputs must share one graph");
    Graph gj = derive_gj(G, c, j);
    uint32_t full = (1u << G.n) - 1u;
    DiagState r1 = noise.p_l < 1.0 ? apply_depolarizing_masked(rho1, full, noise.p_l) : rho1;
    DiagState r2 = noise.p_l < 1.0 ? apply_depolarizing_masked(rho2, full, noise.p_l) : rho2;
    std::vector<double> w;
    if (purifying)
        w = delta_weights(r1.lam.size());
    else
        w.assign(r1.lam.size(), 1.0);
    StepReport rep;
    rep.out = DiagState{gj, gamma_map(r1.lam, r2.lam, c.mask(j), w)};
    double kappa = normalize(rep.out.lam);
    rep.p_success = purifying ? kappa : 1.0;
    rep.label = std::string(purifying ? "prep+" : "prep") + std::to_string(j + 1);
    return rep;
}

Schedule parse_schedule(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ScheduleError(std::string("schedule JSON parse failure: ") + e.what());
    }
    if (!doc.is_array()) throw ScheduleError("schedule must be a JSON array");
    Schedule sched;
    for (const auto& item : doc) {
        ScheduleStep step;
        if (!item.contains("color") || !item["color"].is_number_integer())
            throw ScheduleError("schedule step needs an integer color");
        step.color = item["color"].get<int>();
        std::string aux = item.value("aux", "fresh");
        if (aux == "fresh")
            step.aux = AuxSource::Fresh;
        else if (aux == "recycle")
            step.aux = AuxSource::Recycle;
        else if (aux == "fixed")
            step.aux = AuxSource::Fixed;
        else
            throw ScheduleError("unknown aux source: " + aux);
        if (item.contains("rounds")) {
            const auto& r = item["rounds"];
            if (r.is_string() && r.get<std::string>() == "converge")
                step.rounds = kConverge;
            else if (r.is_number_integer() && r.get<int>() >= 0)
                step.rounds = r.get<int>();
            else
                throw ScheduleError("rounds must be a non-negative integer or \"converge\"");
        }
        sched.steps.push_back(step);
    }
    return sched;
}

namespace {

DiagState resolve_aux(const DiagState& current, const ScheduleStep& step, const Coloring& c,
                      const Graph& gj, const NoiseParams& noise, const AuxContext& ctx) {
    switch (step.aux) {
        case AuxSource::Fresh: {
            DiagState aux{gj, std::vector<double>(size_t{1} << gj.n, 0.0)};
            aux.lam[0] = 1.0;
            if (noise.q < 1.0) {
                uint32_t distributed = ((1u << gj.n) - 1u) & ~1u;  // vertex 0 stays home
                aux = apply_depolarizing_masked(aux, distributed, noise.q);
            }
            return aux;
        }
        case AuxSource::Recycle:
            return prepare_auxiliary(current, current, c, step.color, ctx.purifying_prep, noise)
                .out;
        case AuxSource::Fixed:
            if (step.color < 0 || size_t(step.color) >= ctx.fixed.size())
                throw ScheduleError("no fixed aux state supplied for color " +
                                    std::to_string(step.color + 1));
            if (!(ctx.fixed[size_t(step.color)].g == gj))
                throw ScheduleError("fixed aux state lives on the wrong graph");
            return ctx.fixed[size_t(step.color)];
    }
    throw ScheduleError("unreachable aux source");
}

}  // namespace

std::vector<StepReport> run_schedule(const DiagState& rho, const Schedule& sched,
                                     const Coloring& c, const NoiseParams& noise,
                                     const AuxContext& ctx) {
    if (sched.steps.empty()) throw ScheduleError("schedule is empty");
    constexpr int kCap = 10000;
    constexpr double kSettleTol = 1e-9;
    std::vector<StepReport> trace;
    DiagState state = rho;
    for (const auto& step : sched.steps) {
        if (step.color < 0 || step.color >= c.k())
            throw ScheduleError("schedule color out of range");
        Graph gj = derive_gj(state.g, c, step.color);
        int limit = step.rounds == kConverge ? kCap : step.rounds;
        for (int r = 0; r < limit; ++r) {
            DiagState aux = resolve_aux(state, step, c, gj, noise, ctx);
            double before = state.fidelity();
            StepReport rep = subprotocol_pj(state, aux, c, step.color, noise);
            state = rep.out;
            trace.push_back(std::move(rep));
            if (step.rounds == kConverge && std::fabs(state.fidelity() - before) < kSettleTol)
                break;
        }
    }
    return trace;
}

StepReport merge_states(const DiagState& s1, int v1, const DiagState& s2, int v2) {
    std::vector<int> map2;
    Graph merged = merge_graphs(s1.g, v1, s2.g, v2, &map2);
    DiagState out;
    out.g = merged;
    out.lam.assign(size_t{1} << merged.n, 0.0);
    std::vector<uint32_t> scatter(s2.lam.size(), 0);
    for (uint32_t nu = 0; nu < s2.lam.size(); ++nu)
        for (int b = 0; b < s2.g.n; ++b)
            if (nu >> b & 1u) scatter[nu] ^= 1u << map2[size_t(b)];
    for (uint32_t mu = 0; mu < s1.lam.size(); ++mu) {
        double l1 = s1.lam[mu];
        if (l1 == 0.0) continue;
        for (uint32_t nu = 0; nu < s2.lam.size(); ++nu)
            out.lam[mu ^ scatter[nu]] += l1 * s2.lam[nu];
    }
    return {std::move(out), 1.0, "merge"};
}

StepReport merge_within(const DiagState& s, int va, int vb) {
    std::vector<int> map;
    Graph merged = identify_vertices(s.g, va, vb, &map);
    DiagState out;
    out.g = merged;
    out.lam.assign(size_t{1} << merged.n, 0.0);
    for (uint32_t mu = 0; mu < s.lam.size(); ++mu) {
        double w = s.lam[mu];
        if (w == 0.0) continue;
        uint32_t idx = 0;
        for (int b = 0; b < s.g.n; ++b)
            if (mu >> b & 1u) idx ^= 1u << map[size_t(b)];
        out.lam[idx] += w;
    }
    return {std::move(out), 1.0, "merge"};
}

StepReport erase_vertices_z(const DiagState& s, uint32_t victims) {
    std::vector<int> map;
    Graph rest = delete_vertices(s.g, victims, &map);
    DiagState out;
    out.g = rest;
    out.lam.assign(size_t{1} << rest.n, 0.0);
    for (uint32_t mu = 0; mu < s.lam.size(); ++mu) {
        double w = s.lam[mu];
        if (w == 0.0) continue;
        uint32_t idx = 0;
        for (int b = 0; b < s.g.n; ++b)
            if ((mu >> b & 1u) && !(victims >> b & 1u)) idx |= 1u << map[size_t(b)];
        out.lam[idx] += w;
    }
    return {std::move(out), 1.0, "erase"};
}

}  // namespace gsp
