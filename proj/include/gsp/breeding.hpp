#pragma once
#include <vector>

#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"

namespace gsp {

struct BitMarginal {
    double a0 = 1.0;
    double a1 = 0.0;
};

// Ensemble probability of stabilizer-sign bit i being 0 / 1.
BitMarginal bit_marginal(const DiagState& s, int i);

double binary_entropy(const BitMarginal& m);

// Asymptotic hashing-style lower bound on the yield: one two-copy parity
// round per color, costing twice the worst per-bit entropy of that color.
// Y = 1 - 2 * sum_j max_{i in A_j} S(a_i); may be negative, reported raw.
double breeding_yield(const DiagState& s, const Coloring& c);

struct YieldRow {
    double f = 0.0;
    std::vector<double> s_max;  // worst per-bit entropy of each color
    double y = 0.0;
};

// White-noise 5-ring yield across a fidelity grid, 2-2-1 coloring.
std::vector<YieldRow> ring_yield_curve(const std::vector<double>& f_grid);

}  // namespace gsp
