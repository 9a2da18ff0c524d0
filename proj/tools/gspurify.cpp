#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsp/analysis.hpp"
#include "gsp/bipartite.hpp"
#include "gsp/breeding.hpp"
#include "gsp/diag_state.hpp"
#include "gsp/graph.hpp"
#include "gsp/oracle.hpp"
#include "gsp/purify.hpp"
#include "gsp/report.hpp"

using namespace gsp;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& message,
                       const std::string& field) {
    json err = {{"code", code}, {"message", message}, {"field", field}};
    std::cerr << err.dump() << "\n";
    std::exit(2);
}

void require_unit(double v, const std::string& field) {
    if (!(v >= 0.0 && v <= 1.0)) fail("bad_value", field + " must lie in [0,1]", field);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) fail("io_error", "cannot open output file: " + out_path, "out");
    f << text;
    if (!f.good()) fail("io_error", "write failed: " + out_path, "out");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream f(path);
    if (!f) fail("bad_config", "cannot read config file: " + path, "config");
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::exception& e) {
        fail("bad_config", std::string("config JSON parse failure: ") + e.what(), "config");
    }
    if (!doc.is_object()) fail("bad_config", "config must be a JSON object", "config");
    return doc;
}

Strategy parse_strategy(const std::string& name) {
    if (name == "mepp") return Strategy::Mepp;
    if (name == "split-5-2" || name == "split52") return Strategy::Split52;
    if (name == "split-4-3" || name == "split43") return Strategy::Split43;
    if (name == "bepp") return Strategy::Bepp;
    fail("bad_value", "unknown strategy: " + name + " (mepp, split-5-2, split-4-3, bepp)",
         "strategy");
}

Scenario parse_scenario(const std::string& name) {
    if (name == "static") return Scenario::Static;
    if (name == "communication" || name == "comm") return Scenario::Communication;
    fail("bad_value", "unknown scenario: " + name + " (static, communication)", "scenario");
}

// flags win over config entries; config fills whatever the caller left at the default
template <typename T>
void fill_from(const json& cfg, const char* key, T& slot, bool flag_given) {
    if (flag_given || !cfg.contains(key)) return;
    try {
        slot = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        fail("bad_config", std::string("config field ") + key + ": " + e.what(), key);
    }
}

int run_purify(const std::string& config_path, std::string schedule_arg, double f0, double x0,
               bool f0_given, bool x0_given, NoiseParams noise, std::string out_path,
               bool sched_given, const std::array<bool, 3>& noise_given) {
    json cfg = load_config(config_path);
    fill_from(cfg, "f0", f0, f0_given);
    fill_from(cfg, "x0", x0, x0_given);
    fill_from(cfg, "p_l", noise.p_l, noise_given[0]);
    fill_from(cfg, "q", noise.q, noise_given[1]);
    fill_from(cfg, "p_m", noise.p_m, noise_given[2]);
    fill_from(cfg, "out", out_path, !out_path.empty());
    if (!sched_given && cfg.contains("schedule")) schedule_arg = cfg.at("schedule").dump();

    bool have_f = f0_given || cfg.contains("f0");
    bool have_x = x0_given || cfg.contains("x0");
    if (have_f && have_x) fail("bad_value", "give either f0 or x0, not both", "f0");
    require_unit(noise.p_l, "p_l");
    require_unit(noise.q, "q");
    require_unit(noise.p_m, "p_m");
    double f = have_x ? x_to_fidelity(5, x0) : f0;
    require_unit(f, have_x ? "x0" : "f0");
    if (schedule_arg.empty())
        fail("bad_value", "a schedule is required (inline JSON or config entry)", "schedule");

    std::string text = schedule_arg;
    if (!text.empty() && text[0] != '[') {
        std::ifstream sf(text);
        if (!sf) fail("bad_schedule", "cannot read schedule file: " + text, "schedule");
        std::stringstream buf;
        buf << sf.rdbuf();
        text = buf.str();
    }
    Schedule sched;
    try {
        sched = parse_schedule(text);
    } catch (const ScheduleError& e) {
        fail("bad_schedule", e.what(), "schedule");
    }

    DiagState state = white_noise_state(ring5(), f);
    std::vector<StepReport> trace;
    try {
        trace = run_schedule(state, sched, ring5_coloring(), noise);
    } catch (const ScheduleError& e) {
        fail("bad_schedule", e.what(), "schedule");
    }
    std::string csv = "step,label,p_success,fidelity\n";
    for (size_t i = 0; i < trace.size(); ++i) {
        csv += std::to_string(i) + "," + trace[i].label + "," + csv_number(trace[i].p_success) +
               "," + csv_number(trace[i].out.fidelity()) + "\n";
    }
    emit(csv, out_path);
    return 0;
}

int run_breed_yield(double f_lo, double f_hi, int points, const std::string& out_path) {
    require_unit(f_lo, "f-lo");
    require_unit(f_hi, "f-hi");
    if (points < 2) fail("bad_value", "need at least two grid points", "points");
    if (!(f_lo < f_hi)) fail("bad_value", "f-lo must be below f-hi", "f-lo");
    std::vector<double> grid;
    for (int i = 0; i < points; ++i)
        grid.push_back(f_lo + (f_hi - f_lo) * double(i) / double(points - 1));
    auto rows = ring_yield_curve(grid);
    std::string csv = "f,s_max_1,s_max_2,s_max_3,yield\n";
    for (const auto& row : rows) {
        csv += csv_number(row.f);
        for (double s : row.s_max) csv += "," + csv_number(s);
        csv += "," + csv_number(row.y) + "\n";
    }
    emit(csv, out_path);
    return 0;
}

int run_threshold(const std::string& strategy, bool ideal, double tol,
                  const std::string& out_path) {
    Strategy st = parse_strategy(strategy);
    if (!ideal)
        fail("unsupported", "only ideal-operation thresholds are implemented; pass --ideal",
             "ideal");
    double x = 0.0;
    if (st == Strategy::Mepp) {
        x = mepp_static_threshold_x(tol > 0 ? tol : 1e-4);
    } else if (st == Strategy::Bepp) {
        x = bepp_static_threshold_x(tol > 0 ? tol : 1e-10);
    } else {
        fail("unsupported", "threshold search covers mepp and bepp", "strategy");
    }
    emit("strategy,x_threshold\n" + std::string(strategy_name(st)) + "," + csv_number(x) + "\n",
         out_path);
    return 0;
}

int run_fixed_point(const std::string& strategy, const std::string& scenario, double p_l,
                    const std::string& out_path) {
    Strategy st = parse_strategy(strategy);
    Scenario sc = parse_scenario(scenario);
    require_unit(p_l, "p_l");
    StrategyOutcome o = evaluate_strategy(st, sc, p_l);
    emit(std::string(kOutcomeCsvHeader) + "\n" + outcome_csv_row(o, 1.0) + "\n", out_path);
    return 0;
}

int run_compare(const std::string& config_path, std::string scenario, std::vector<double> p_ls,
                std::vector<std::string> strategy_names, int jobs, std::string out_path) {
    json cfg = load_config(config_path);
    fill_from(cfg, "scenario", scenario, !scenario.empty());
    fill_from(cfg, "p_l", p_ls, !p_ls.empty());
    fill_from(cfg, "strategies", strategy_names, !strategy_names.empty());
    fill_from(cfg, "jobs", jobs, jobs > 0);
    fill_from(cfg, "out", out_path, !out_path.empty());

    if (scenario.empty()) scenario = "static";
    Scenario sc = parse_scenario(scenario);
    if (p_ls.empty()) fail("bad_grid", "p_l grid is empty", "p_l");
    for (double v : p_ls) require_unit(v, "p_l");
    std::vector<Strategy> strategies;
    if (strategy_names.empty()) {
        strategies = {Strategy::Mepp, Strategy::Split52, Strategy::Split43, Strategy::Bepp};
    } else {
        for (const auto& name : strategy_names) strategies.push_back(parse_strategy(name));
    }
    if (jobs < 1) jobs = 1;

    struct Cell {
        Strategy st;
        double p_l;
    };
    std::vector<Cell> grid;
    for (double p_l : p_ls)
        for (Strategy st : strategies) grid.push_back({st, p_l});

    // bounded pool, results stitched back in grid order
    std::vector<StrategyOutcome> results(grid.size());
    size_t window = size_t(jobs);
    std::vector<std::future<StrategyOutcome>> inflight;
    size_t next = 0, done = 0;
    while (done < grid.size()) {
        while (next < grid.size() && inflight.size() < window) {
            Cell cell = grid[next++];
            inflight.push_back(std::async(std::launch::async, [cell, sc] {
                return evaluate_strategy(cell.st, sc, cell.p_l);
            }));
        }
        results[done] = inflight.front().get();
        inflight.erase(inflight.begin());
        ++done;
    }

    std::string csv = std::string(kOutcomeCsvHeader) + "\n";
    for (const auto& o : results) csv += outcome_csv_row(o, 1.0) + "\n";
    emit(csv, out_path);
    return 0;
}

double worst_state_diff(const DiagState& a, const DiagState& b) {
    double w = 0.0;
    for (size_t mu = 0; mu < a.dim(); ++mu) w = std::max(w, std::fabs(a.lam[mu] - b.lam[mu]));
    return w;
}

int run_oracle_check(int trials, unsigned seed, const std::string& out_path) {
    if (trials < 1) fail("bad_value", "trials must be positive", "trials");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_state = [&](const Graph& g) {
        DiagState s{g, std::vector<double>(size_t{1} << g.n)};
        double t = 0;
        for (auto& v : s.lam) t += (v = u(rng));
        for (auto& v : s.lam) v /= t;
        return s;
    };
    Graph r = ring5();
    Coloring c = ring5_coloring();
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        int j = t % 3;
        double p_l = (t % 2) ? 1.0 : 0.9 + 0.1 * u(rng);
        NoiseParams noise;
        noise.p_l = p_l;
        DiagState main5 = random_state(r);
        DiagState aux = random_state(cluster_graph(j));
        StepReport got = subprotocol_pj(main5, aux, c, j, noise);
        oracle::OracleStep want = oracle::subprotocol_pj(main5, aux, c, j, p_l);
        worst = std::max(worst, std::fabs(got.p_success - want.p_success));
        worst = std::max(worst, worst_state_diff(got.out, want.out));

        DiagState s2 = random_state(r);
        bool purifying = (t % 2) == 0;
        StepReport gp = prepare_auxiliary(main5, s2, c, j, purifying, noise);
        oracle::OracleStep wp = oracle::prepare_auxiliary(main5, s2, c, j, purifying, p_l);
        worst = std::max(worst, std::fabs(gp.p_success - wp.p_success));
        worst = std::max(worst, worst_state_diff(gp.out, wp.out));
    }
    std::string csv = "trials,worst_abs_diff\n" + std::to_string(trials) + "," +
                      csv_number(worst) + "\n";
    emit(csv, out_path);
    if (worst > 1e-10)
        fail("oracle_mismatch", "engine and dense simulation disagree beyond 1e-10", "trials");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph-state purification toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, schedule_arg;
    double f0 = 0.9, x0 = 0.0;
    NoiseParams noise;

    auto* purify = app.add_subcommand("purify", "run a purification schedule on the 5-ring");
    auto* opt_f0 = purify->add_option("--f0", f0, "input fidelity of the white-noise ring");
    auto* opt_x0 = purify->add_option("--x0", x0, "input x parameter instead of f0");
    auto* opt_sched =
        purify->add_option("--schedule", schedule_arg, "schedule JSON (inline or a file path)");
    auto* opt_pl = purify->add_option("--p_l", noise.p_l, "local gate reliability");
    auto* opt_q = purify->add_option("--q", noise.q, "channel reliability for fresh auxiliaries");
    auto* opt_pm = purify->add_option("--p_m", noise.p_m, "readout reliability");
    purify->add_option("--config", config_path, "JSON config file");
    purify->add_option("--out", out_path, "output CSV path (default stdout)");

    double f_lo = 0.8, f_hi = 1.0;
    int points = 41;
    auto* breed = app.add_subcommand("breed-yield", "yield of the breeding bound on a fidelity grid");
    breed->add_option("--f-lo", f_lo, "grid start");
    breed->add_option("--f-hi", f_hi, "grid end");
    breed->add_option("--points", points, "grid size");
    breed->add_option("--out", out_path, "output CSV path (default stdout)");

    std::string strategy, scenario;
    bool ideal = false;
    double tol = 0.0;
    auto* thresh = app.add_subcommand("threshold", "white-noise distillability threshold");
    thresh->add_option("--strategy", strategy, "mepp or bepp")->required();
    thresh->add_flag("--ideal", ideal, "ideal local operations");
    thresh->add_option("--tol", tol, "bisection tolerance");
    thresh->add_option("--out", out_path, "output CSV path (default stdout)");

    double p_l = 1.0;
    auto* fixed = app.add_subcommand("fixed-point", "one strategy outcome row");
    fixed->add_option("--strategy", strategy, "mepp, split-5-2, split-4-3 or bepp")->required();
    fixed->add_option("--scenario", scenario, "static or communication")->required();
    fixed->add_option("--p_l", p_l, "local gate reliability")->required();
    fixed->add_option("--out", out_path, "output CSV path (default stdout)");

    std::vector<double> p_ls;
    std::vector<std::string> strategy_list;
    int jobs = 0;
    auto* compare = app.add_subcommand("compare", "all strategies over a p_l grid");
    compare->add_option("--scenario", scenario, "static or communication");
    compare->add_option("--p_l", p_ls, "p_l grid values");
    compare->add_option("--strategy", strategy_list, "subset of strategies");
    compare->add_option("--jobs", jobs, "worker pool size");
    compare->add_option("--config", config_path, "JSON config file");
    compare->add_option("--out", out_path, "output CSV path (default stdout)");

    int trials = 40;
    unsigned seed = 7;
    auto* ocheck = app.add_subcommand("oracle-check", "engine vs dense-simulation spot check");
    ocheck->add_option("--trials", trials, "number of random comparisons");
    ocheck->add_option("--seed", seed, "RNG seed");
    ocheck->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (purify->parsed())
            return run_purify(config_path, schedule_arg, f0, x0, opt_f0->count() > 0,
                              opt_x0->count() > 0, noise, out_path, opt_sched->count() > 0,
                              {opt_pl->count() > 0, opt_q->count() > 0, opt_pm->count() > 0});
        if (breed->parsed()) return run_breed_yield(f_lo, f_hi, points, out_path);
        if (thresh->parsed()) return run_threshold(strategy, ideal, tol, out_path);
        if (fixed->parsed()) return run_fixed_point(strategy, scenario, p_l, out_path);
        if (compare->parsed())
            return run_compare(config_path, scenario, p_ls, strategy_list, jobs, out_path);
        if (ocheck->parsed()) return run_oracle_check(trials, seed, out_path);
    } catch (const std::exception& e) {
        fail("internal_error", e.what(), "");
    }
    return 0;
}
