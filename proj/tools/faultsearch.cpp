// faultsearch: bounds, strategy generation, ratio sweeps, coverage checks and
// the potential refuter from the command line.
//
// Exit status: 0 success or certificate, 2 witness or coverage failure,
// 1 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "faultsearch/faultsearch.hpp"

namespace fs = faultsearch;
using nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_witness = 2;

struct Config {
    int m = 2, k = 1, f = 0;
    std::optional<double> eta;
    std::optional<double> lambda;
    std::optional<double> alpha;
    std::optional<double> C;
    double N = 1e4;
    bool auto_horizon = false;
    double generate_cap = 1e7;
    std::string mode = "orc";
    std::string strategy_path;
    std::string output_path;
    std::string csv_path;
    std::string summary_path;
    std::string trace_path;
    std::string assignment_path;
    std::string input_path;
    std::optional<double> dense;
    std::vector<double> weights;
    double delta = 0;
    long long cap = 1000000;
    bool json = false;
    std::string precision;
};

fs::InstanceParams params(const Config& c) { return {c.m, c.k, c.f}; }

// Numbers leave through double; JSON has no wider type.
template <class Real>
ordered_json num(Real v) {
    const double d = static_cast<double>(v);
    if (std::isfinite(d)) return d;
    return std::isnan(d) ? "nan" : (d > 0 ? "inf" : "-inf");
}

ordered_json params_json(const fs::InstanceParams& p) {
    return {{"m", p.m}, {"k", p.k}, {"f", p.f}, {"q", p.q()}, {"s", p.s()}};
}

void emit(const ordered_json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) return;
    if (path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    fn(out);
}

template <class Real>
fs::StrategyFile<Real> load_strategies(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return fs::read_strategies<Real>(in);
}

template <class Real>
std::vector<fs::RoundPlan<Real>> exponential(const Config& c, Real horizon) {
    const auto p = params(c);
    const Real alpha = c.alpha ? Real(*c.alpha) : fs::optimal_alpha<Real>(p);
    return fs::make_exponential_strategy<Real>(p, alpha, horizon);
}

int cmd_bound(const Config& c) {
    if (c.eta) {
        const double v = fs::fractional_ratio<double>(*c.eta);
        if (c.json)
            std::cout << ordered_json{{"eta", *c.eta}, {"fractional_ratio", v}}.dump(2) << '\n';
        else
            std::cout << "eta " << fs::format_real(*c.eta) << "\nC(eta) " << fs::format_real(v) << '\n';
        return exit_ok;
    }
    const auto p = params(c);
    p.validate();
    ordered_json j = params_json(p);
    j["regime"] = fs::to_string(p.regime());
    if (p.regime() == fs::Regime::infeasible) {
        std::cerr << "infeasible regime: k <= f, every robot may be faulty\n";
        return exit_usage;
    }
    if (p.regime() == fs::Regime::trivial) {
        j["lambda0"] = 1.0;
        if (c.json)
            std::cout << j.dump(2) << '\n';
        else
            std::cout << "trivial regime: k >= m(f+1), ratio 1\n";
        return exit_ok;
    }
    const double lambda0 = fs::ratio_lower_bound<double>(p);
    j["rho"] = p.rho();
    j["lambda0"] = lambda0;
    j["alpha"] = fs::optimal_alpha<double>(p);
    if (c.lambda) {
        const double mu = fs::CoverParams<double>(*c.lambda).mu();
        j["lambda"] = *c.lambda;
        j["mu"] = mu;
        j["delta"] = fs::growth_factor_delta(p.s(), p.k, mu);
    }
    if (c.json) {
        std::cout << j.dump(2) << '\n';
        return exit_ok;
    }
    for (const auto& [key, val] : j.items()) {
        std::cout << key << ' ';
        if (val.is_number_float())
            std::cout << fs::format_real(val.get<double>());
        else if (val.is_string())
            std::cout << val.get<std::string>();
        else
            std::cout << val.dump();
        std::cout << '\n';
    }
    return exit_ok;
}

template <class Real>
int cmd_generate(const Config& c) {
    const auto plans = exponential<Real>(c, Real(c.N));
    std::ostringstream os;
    if (c.mode == "line")
        fs::write_strategies(os, fs::to_line(plans));
    else
        fs::write_strategies(os, plans, c.m);
    with_output(c.output_path.empty() ? "-" : c.output_path, [&](std::ostream& out) { out << os.str(); });
    return exit_ok;
}

template <class Real, class Strategy>
int simulate_team(const Config& c, const std::vector<Strategy>& team, const fs::InstanceParams& p) {
    const Real N = c.N;
    const auto rows = c.dense ? fs::sweep_grid(team, p, N, Real(*c.dense)) : fs::sweep_breakpoints(team, p, N);
    with_output(c.csv_path, [&](std::ostream& os) { fs::write_sweep_csv(os, rows); });

    const auto worst = fs::worst_ratio(team, p, N);
    ordered_json j;
    j["params"] = params_json(p);
    j["horizon"] = num(N);
    j["rows"] = rows.size();
    j["sup_ratio"] = num(worst.ratio);
    j["witness"] = {{"ray", worst.witness.ray}, {"x", num(worst.witness.x)}, {"just_above", worst.just_above}};
    j["detected"] = worst.detected();
    if (p.regime() == fs::Regime::nontrivial) {
        const Real lambda0 = fs::ratio_lower_bound<Real>(p);
        j["lambda0"] = num(lambda0);
        j["gap"] = num(lambda0 - worst.ratio);
    }
    emit(j, c.summary_path);
    return worst.detected() ? exit_ok : exit_witness;
}

template <class Real>
int cmd_simulate(const Config& c) {
    auto p = params(c);
    p.validate();
    if (p.regime() == fs::Regime::infeasible) throw fs::RegimeError(fs::Regime::infeasible);
    if (!c.strategy_path.empty()) {
        const auto file = load_strategies<Real>(c.strategy_path);
        p.k = static_cast<int>(file.robots());
        if (file.setting == fs::Setting::line) return simulate_team<Real>(c, file.lines, p);
        p.m = file.m;
        return simulate_team<Real>(c, file.plans, p);
    }
    return simulate_team<Real>(c, exponential<Real>(c, Real(c.N)), p);
}

template <class Real>
ordered_json verdict_json(const fs::Verdict<Real>& v) {
    ordered_json j;
    j["verdict"] = fs::to_string(v.kind);
    j["mode"] = fs::to_string(v.mode);
    j["params"] = params_json(v.params);
    j["lambda"] = num(v.lambda);
    j["horizon"] = num(v.horizon);
    j["fold"] = v.fold;
    j["effective_k"] = v.effective_k;
    j["trivial"] = v.trivial;
    if (v.witness) {
        j["witness"] = {{"point", num(v.witness->point)},
                        {"found", v.witness->found},
                        {"required", v.witness->required},
                        {"settled", v.witness_settled}};
    }
    j["settled_frontier"] = num(v.settled_frontier);
    if (v.trace) {
        const auto& t = *v.trace;
        j["audit"] = {{"steps", t.steps.size()},
                      {"frontier_scale", num(t.frontier_scale)},
                      {"initial_log_potential", num(t.initial_log_potential)},
                      {"min_step_ratio", num(v.min_step_ratio)},
                      {"max_log_potential", num(v.max_log_potential)},
                      {"log_delta", num(t.log_delta)},
                      {"log_cap", t.log_cap ? num(*t.log_cap) : ordered_json(nullptr)},
                      {"stopped_early", t.stopped_early},
                      {"growth_violations", t.growth_violations},
                      {"cap_violations", t.cap_violations}};
    }
    if (v.gap) {
        if (const auto* g = std::get_if<fs::GapCase2<Real>>(&*v.gap))
            j["gap"] = {{"case", 2},         {"robot", g->robot},          {"round", g->round},
                        {"ratio", num(g->ratio)}, {"sub_lo", num(g->sub_lo)}, {"sub_hi", num(g->sub_hi)}};
        else
            j["gap"] = {{"case", 1}};
    }
    if (v.budget) {
        j["budget"] = {{"log_cap", num(v.budget->log_cap)},
                       {"log_potential", num(v.budget->log_potential)},
                       {"steps_remaining", v.budget->steps_remaining},
                       {"log_frontier_needed", num(v.budget->log_frontier_needed)}};
    }
    return j;
}

template <class Real>
int cmd_refute(const Config& c) {
    auto p = params(c);
    p.validate();
    if (!c.lambda) throw CLI::ValidationError("refute", "--lambda is required");
    const Real lambda = *c.lambda;
    const fs::Setting mode = c.mode == "line" ? fs::Setting::line : fs::Setting::orc;
    std::optional<Real> C;
    if (c.C) C = Real(*c.C);

    Real N = c.N;
    ordered_json horizon_info;
    if (c.auto_horizon) {
        std::optional<fs::Horizon<Real>> h;
        if (mode == fs::Setting::line) {
            h = fs::line_horizon_estimate<Real>(p, lambda);
        } else {
            if (!C) {
                const Real alpha = c.alpha ? Real(*c.alpha) : fs::optimal_alpha<Real>(p);
                C = std::pow(alpha, Real(2 * p.m * p.k));
            }
            h = fs::horizon_estimate<Real>(p, lambda, *C);
        }
        if (!h) {
            std::cerr << "no finite horizon: lambda is at or above the tight ratio\n";
            return exit_usage;
        }
        N = h->value();
        horizon_info = {{"log_n", num(h->log_n)}, {"steps", h->steps}, {"log_cap", num(h->log_cap)}};
    }

    fs::Verdict<Real> v;
    if (!c.strategy_path.empty()) {
        const auto file = load_strategies<Real>(c.strategy_path);
        if (file.setting == fs::Setting::line)
            v = fs::refute(file.lines, lambda, p, N, mode, C);
        else
            v = fs::refute(file.plans, lambda, p, N, mode, C);
    } else {
        const Real gen = std::min(N, Real(c.generate_cap));
        v = fs::refute(exponential<Real>(c, gen), lambda, p, N, mode, C);
    }
    auto j = verdict_json(v);
    if (!horizon_info.is_null()) j["auto_horizon"] = horizon_info;
    if (v.trace) with_output(c.trace_path, [&](std::ostream& os) { fs::write_trace_csv(os, *v.trace); });
    emit(j, c.summary_path);
    return v.kind == fs::VerdictKind::certificate ? exit_ok : exit_witness;
}

template <class Real>
int cmd_verify(const Config& c) {
    if (!c.lambda) throw CLI::ValidationError("verify", "--lambda is required");
    const fs::CoverParams<Real> cp(*c.lambda);
    auto p = params(c);
    std::vector<fs::CoverInterval<Real>> cover;
    int fold = 0;
    const auto file = c.strategy_path.empty() ? fs::StrategyFile<Real>{} : load_strategies<Real>(c.strategy_path);
    if (c.strategy_path.empty()) {
        cover = fs::cover_intervals(exponential<Real>(c, Real(c.N)), cp);
        fold = p.q();
    } else if (file.setting == fs::Setting::line) {
        p.m = 2;
        p.k = static_cast<int>(file.robots());
        cover = fs::cover_intervals(file.lines, cp);
        fold = p.s();
    } else {
        p.m = file.m;
        p.k = static_cast<int>(file.robots());
        cover = fs::cover_intervals(file.plans, cp);
        fold = p.q();
    }
    const Real N = c.N;
    ordered_json j;
    j["params"] = params_json(p);
    j["lambda"] = num(Real(*c.lambda));
    j["horizon"] = num(N);
    j["fold"] = fold;
    const auto w = fs::verify_multicover(cover, fold, Real(1), N);
    j["covered"] = !w.has_value();
    if (w) {
        j["witness"] = {{"point", num(w->point)}, {"found", w->found}, {"required", w->required}};
    } else if (fold > 0) {
        const auto a = fs::exact_q_assignment(cover, fold, N);
        with_output(c.assignment_path, [&](std::ostream& os) { fs::write_assignment_csv(os, a.intervals); });
    }
    emit(j, c.summary_path);
    return w ? exit_witness : exit_ok;
}

int cmd_rationalize(const Config& c) {
    fs::FractionalInstance<double> inst;
    if (!c.input_path.empty()) {
        std::ifstream in(c.input_path);
        if (!in) throw std::runtime_error("cannot read " + c.input_path);
        const auto j = nlohmann::json::parse(in);
        inst.weights = j.at("weights").get<std::vector<double>>();
        inst.eta = j.at("eta").get<double>();
        inst.delta = j.value("delta", 0.0);
    } else {
        if (!c.eta) throw CLI::ValidationError("rationalize", "--eta or --input is required");
        inst.weights = c.weights;
        inst.eta = *c.eta;
        inst.delta = c.delta;
    }
    const auto r = fs::rationalize_weights(inst, c.cap);
    ordered_json j;
    j["eta"] = inst.eta;
    j["delta"] = inst.delta;
    j["q"] = r.q;
    j["k_i"] = r.k_i;
    j["k"] = r.k;
    j["epsilon"] = r.epsilon;
    j["fractional_ratio"] = fs::fractional_ratio(inst.eta);
    emit(j, c.summary_path);
    return exit_ok;
}

void add_instance(CLI::App* app, Config& c) {
    app->add_option("-m,--rays", c.m, "number of rays")->check(CLI::PositiveNumber);
    app->add_option("-k,--robots", c.k, "number of robots")->check(CLI::PositiveNumber);
    app->add_option("-f,--faults", c.f, "number of crash faults")->check(CLI::NonNegativeNumber);
}

template <class Real>
int dispatch(const std::string& name, const Config& c) {
    if (name == "generate") return cmd_generate<Real>(c);
    if (name == "simulate") return cmd_simulate<Real>(c);
    if (name == "refute") return cmd_refute<Real>(c);
    if (name == "verify") return cmd_verify<Real>(c);
    return exit_usage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"faultsearch: crash-fault search on the line and on m rays"};
    app.require_subcommand(1);
    Config c;
    if (const char* env = std::getenv("FAULTSEARCH_PRECISION")) c.precision = env;
    app.add_option("--precision", c.precision, "arithmetic: 64 (double) or extended (long double)")
        ->check(CLI::IsMember({"64", "extended"}));

    auto* bound = app.add_subcommand("bound", "tight ratio, optimal base and growth factor");
    add_instance(bound, c);
    bound->add_option("--eta", c.eta, "fractional coverage weight; prints C(eta)");
    bound->add_option("--lambda", c.lambda, "also report delta at this ratio");
    bound->add_flag("--json", c.json, "machine-readable output");

    auto* generate = app.add_subcommand("generate", "write the exponential strategy");
    add_instance(generate, c);
    generate->add_option("--alpha", c.alpha, "base (default: optimal)");
    generate->add_option("-N,--horizon", c.N, "cover out to this distance");
    generate->add_option("--mode", c.mode, "orc or line (line needs m = 2)")->check(CLI::IsMember({"orc", "line"}));
    generate->add_option("-o,--output", c.output_path, "strategy file (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "worst-case ratio sweep");
    add_instance(simulate, c);
    simulate->add_option("--alpha", c.alpha, "base (default: optimal)");
    simulate->add_option("-N,--horizon", c.N, "largest target distance");
    simulate->add_option("--strategy", c.strategy_path, "strategy file instead of the exponential strategy");
    simulate->add_option("--csv", c.csv_path, "per-point CSV output ('-' for stdout)");
    simulate->add_option("--summary", c.summary_path, "summary JSON (default stdout)");
    simulate->add_option("--dense", c.dense, "evaluate a geometric grid with this relative step instead");

    auto* refute = app.add_subcommand("refute", "coverage check and potential audit");
    add_instance(refute, c);
    refute->add_option("--lambda", c.lambda, "competitive ratio to test")->required();
    refute->add_option("-N,--horizon", c.N, "cover [1, N]");
    refute->add_flag("--auto-horizon", c.auto_horizon, "take N from the horizon estimate");
    refute->add_option("-C,--gap", c.C, "bounded-gap constant for the one-ray setting");
    refute->add_option("--alpha", c.alpha, "base of the generated strategy (default: optimal)");
    refute->add_option("--generate-cap", c.generate_cap, "largest distance the generated strategy reaches");
    refute->add_option("--mode", c.mode, "orc or line")->check(CLI::IsMember({"orc", "line"}));
    refute->add_option("--strategy", c.strategy_path, "strategy file instead of the exponential strategy");
    refute->add_option("--trace", c.trace_path, "growth trace CSV");
    refute->add_option("--summary", c.summary_path, "verdict JSON (default stdout)");

    auto* verify = app.add_subcommand("verify", "multicover check and exact assignment");
    add_instance(verify, c);
    verify->add_option("--lambda", c.lambda, "competitive ratio")->required();
    verify->add_option("-N,--horizon", c.N, "cover [1, N]");
    verify->add_option("--alpha", c.alpha, "base of the generated strategy (default: optimal)");
    verify->add_option("--strategy", c.strategy_path, "strategy file instead of the exponential strategy");
    verify->add_option("--assignment", c.assignment_path, "exact assignment CSV");
    verify->add_option("--summary", c.summary_path, "result JSON (default stdout)");

    auto* rationalize = app.add_subcommand("rationalize", "integer instance for fractional weights");
    rationalize->add_option("--input", c.input_path, "JSON file with weights, eta, delta");
    rationalize->add_option("--weights", c.weights, "weights summing to 1");
    rationalize->add_option("--eta", c.eta, "required coverage weight");
    rationalize->add_option("--delta", c.delta, "bracket slack");
    rationalize->add_option("--cap", c.cap, "largest denominator tried");
    rationalize->add_option("--summary", c.summary_path, "result JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }
    if (!c.precision.empty() && c.precision != "64" && c.precision != "extended") {
        std::cerr << "FAULTSEARCH_PRECISION must be 64 or extended\n";
        return exit_usage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        if (name == "bound") return cmd_bound(c);
        if (name == "rationalize") return cmd_rationalize(c);
        if (c.precision == "extended") return dispatch<long double>(name, c);
        return dispatch<double>(name, c);
    } catch (const fs::RegimeError& e) {
        std::cerr << e.what() << '\n';
        return exit_usage;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
