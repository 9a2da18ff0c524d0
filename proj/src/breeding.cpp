#include "gsp/breeding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsp {

BitMarginal bit_marginal(const DiagState& s, int i) {
    if (i < 0 || i >= s.g.n) throw std::invalid_argument("bit index out of range");
    double a0 = 0.0;
    for (size_t mu = 0; mu < s.lam.size(); ++mu)
        if (!(mu >> i & 1u)) a0 += s.lam[mu];
    return BitMarginal{a0, 1.0 - a0};
}

double binary_entropy(const BitMarginal& m) {
    auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    return term(m.a0) + term(m.a1);
}

double breeding_yield(const DiagState& s, const Coloring& c) {
    double total = 0.0;
    for (int j = 0; j < c.k(); ++j) {
        double worst = 0.0;
        for (int i = 0; i < s.g.n; ++i)
            if (c.mask(j) >> i & 1u) worst = std::max(worst, binary_entropy(bit_marginal(s, i)));
        total += worst;
    }
    return 1.0 - 2.0 * total;
}

std::vector<YieldRow> ring_yield_curve(const std::vector<double>& f_grid) {
    Graph ring = ring_graph(5);
    Coloring c;
    c.classes = {0b00101u, 0b01010u, 0b10000u};
    std::vector<YieldRow> rows;
    rows.reserve(f_grid.size());
    for (double f : f_grid) {
        DiagState s = white_noise_state(ring, f);
        YieldRow row;
        row.f = f;
        for (int j = 0; j < c.k(); ++j) {
            double worst = 0.0;
            for (int i = 0; i < 5; ++i)
                if (c.mask(j) >> i & 1u)
                    worst = std::max(worst, binary_entropy(bit_marginal(s, i)));
            row.s_max.push_back(worst);
        }
        row.y = breeding_yield(s, c);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace gsp
