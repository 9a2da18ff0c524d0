#pragma once
#include <cmath>
#include <cstdio>
#include <string>

#include "gsp/analysis.hpp"

namespace gsp {

inline constexpr const char* kOutcomeCsvHeader =
    "scenario,strategy,p_l,q,F_max,F_min,LNE_Fmax,LNE_Fmin,q_min,iterations,converged";

// Fixed formatting so identical runs serialize to identical bytes.
inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string outcome_csv_row(const StrategyOutcome& o, double q) {
    std::string row;
    row += scenario_name(o.scenario);
    row += ',';
    row += strategy_name(o.strategy);
    row += ',';
    row += csv_number(o.p_l);
    row += ',';
    row += csv_number(q);
    row += ',';
    row += csv_number(o.f_max);
    row += ',';
    row += csv_number(o.f_min);
    row += ',';
    row += csv_number(o.lne_fmax);
    row += ',';
    row += csv_number(o.lne_fmin);
    row += ',';
    row += csv_number(o.q_min);
    row += ',';
    row += std::to_string(o.iterations);
    row += ',';
    row += o.converged ? '1' : '0';
    return row;
}

}  // namespace gsp
