// cavcool: stationary states, cooldowns, sweeps and oracle runs for cavity
// cooling in the Lamb-Dicke regime.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cavcool/analytic.hpp"
#include "cavcool/config.hpp"
#include "cavcool/error.hpp"
#include "cavcool/lindblad.hpp"
#include "cavcool/moments.hpp"
#include "cavcool/params.hpp"
#include "cavcool/sweep.hpp"
#include "cavcool/validation.hpp"

using namespace cavcool;

namespace {

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kValidation = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Flags shared by every subcommand.
struct Globals {
    std::string config;
    std::string out;
    std::string preset;
    std::map<std::string, double> values;
    std::map<std::string, CLI::Option*> options;
    std::vector<std::string> argv;

    void add(CLI::App& app) {
        app.add_option("--config", config, "key = value parameter file")->check(CLI::ExistingFile);
        app.add_option("--out", out, "output file (stdout when omitted)");
        app.add_option("--preset", preset, "figure preset")
            ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6", "fig7"}));
        const std::vector<std::pair<std::string, std::string>> keys = {
            {"eta", "--eta"},          {"g_eff", "--g-eff"},         {"kappa", "--kappa"},
            {"nu", "--nu"},            {"delta_eff", "--delta-eff"}, {"omega", "--omega"},
            {"g", "--g"},              {"delta_cap", "--delta-cap"}, {"delta", "--delta"},
            {"gamma_cap", "--gamma-cap"}};
        for (const auto& [key, flag] : keys) {
            values[key] = 0.0;
            options[key] = app.add_option(flag, values[key])->group("Parameters");
        }
    }

    bool given(const std::string& key) const { return options.at(key)->count() > 0; }

    std::optional<Preset> preset_kind() const {
        return preset.empty() ? std::nullopt : parse_preset(preset);
    }

    /// preset < config file < command line.
    ParamSet resolve(const ParamSet& base = {}) const {
        ParamSet cli;
        for (const auto& [key, opt] : options)
            if (opt->count()) cli.set(key, values.at(key));
        ParamSet merged = base;
        if (!config.empty()) merged = merged.merged_with(load_config(config));
        merged = merged.merged_with(cli);
        merged.check_conflicts();
        return merged;
    }
};

std::map<std::string, double> to_map(const EffectiveParams& p) {
    return {{"g_eff", p.g_eff}, {"delta_eff", p.delta_eff}, {"kappa", p.kappa},
            {"nu", p.nu},       {"eta", p.eta},             {"gamma_cap", p.gamma}};
}

RunManifest manifest_for(const Globals& g, std::string sub) {
    RunManifest m;
    m.subcommand = std::move(sub);
    m.version = tool_version();
    m.timestamp = utc_timestamp();
    m.arguments = g.argv;
    if (!g.preset.empty()) m.settings["preset"] = g.preset;
    if (!g.config.empty()) m.settings["config"] = g.config;
    return m;
}

/// Writes `body` to --out (plus manifest) or to stdout.
void emit(const Globals& g, const std::string& body, RunManifest manifest) {
    if (g.out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + g.out);
    f << body;
    manifest.outputs.insert(manifest.outputs.begin(), g.out);
    write_manifest(manifest, g.out);
}

ParamSet preset_base(const Globals& g) {
    ParamSet base;
    const auto kind = g.preset_kind();
    if (!kind) return base;
    EffectiveParams p;
    if (*kind == Preset::fig4 || *kind == Preset::fig5) {
        p = trajectory_preset(*kind).params;
        base.set("nu", p.nu);
        if (*kind == Preset::fig4) base.set("delta_eff", p.delta_eff);
    } else {
        p = sweep_preset(*kind).fixed;
    }
    base.set("eta", p.eta);
    base.set("g_eff", p.g_eff);
    base.set("kappa", p.kappa);
    return base;
}

EffectiveParams resolve_effective(const Globals& g) {
    ParamSet ps = g.resolve(preset_base(g));
    // Cooldown with delta_eff = nu follows whatever nu was chosen.
    if (g.preset_kind() == Preset::fig5 && !ps.has("delta_eff") && !ps.has("delta")) {
        ps.set("delta_eff", ps.get("nu").value_or(ParamSet::defaults().at("nu")));
    }
    return ps.to_effective();
}

// ---------------------------------------------------------------- steady

int cmd_steady(const Globals& g) {
    const EffectiveParams p = resolve_effective(g);
    const DriftSystem sys = build_drift(p);
    const StabilityReport stab = analyze_stability(sys);
    std::ostringstream os;
    os << "parameters: eta=" << num(p.eta) << " g_eff=" << num(p.g_eff) << " kappa=" << num(p.kappa)
       << " nu=" << num(p.nu) << " delta_eff=" << num(p.delta_eff) << '\n';
    os << "stability: max_real_eigenvalue=" << num(stab.max_real_eigenvalue)
       << " hurwitz=" << (stab.hurwitz ? "yes" : "no") << " condition=" << num(stab.condition_estimate)
       << '\n';

    const double first = m_ss_first_order(p);
    const StationaryMoments closed = stationary_closed_form(p);
    const StationaryResult numeric = stationary_numeric(sys);
    const CoolingRateResult rate = cooling_rate(p);
    const RegimeReport reg = assess_regime(p);
    os << "m_ss_first_order=" << num(first) << '\n';
    os << "m_ss_closed=" << num(closed.state.m()) << '\n';
    os << "m_ss_numeric=" << num(numeric.state.m()) << '\n';
    os << "n_ss=" << num(closed.state.n()) << " mu3=" << num(closed.mu3) << '\n';
    os << "gamma=" << num(rate.gamma) << " regime=" << to_string(rate.regime) << '\n';
    os << "optimal_delta_eff=" << num(optimal_detuning(p)) << '\n';
    os << "confinement=" << to_string(reg.confinement) << " timescale_ratio=" << num(reg.timescale.ratio)
       << " timescale_ok=" << (reg.timescale.ok ? "yes" : "no")
       << " lamb_dicke_ok=" << (reg.lamb_dicke_ok ? "yes" : "no") << '\n';
    if (reg.cooperativity_required)
        os << "cooperativity_required=" << num(*reg.cooperativity_required) << " ("
           << to_string(reg.detuning_choice) << ")\n";

    RunManifest man = manifest_for(g, "steady");
    man.parameters = to_map(p);
    emit(g, os.str(), man);
    if (!stab.hurwitz) {
        std::cerr << "error: drift matrix is not Hurwitz; the stationary point is not attracting\n";
        return kDomain;
    }
    return kOk;
}

// ---------------------------------------------------------------- trajectory

struct TrajectoryArgs {
    double m0 = 2500.0;
    double t_max = 0.0;
    int points = 201;
    bool overlay = false;
    std::string method = "expm";
    CLI::Option* m0_opt = nullptr;
    CLI::Option* t_opt = nullptr;
};

int cmd_trajectory(const Globals& g, const TrajectoryArgs& a) {
    if (a.t_opt->count() && !(a.t_max > 0.0)) throw UsageError("--t-max must be > 0");
    if (a.points < 2) throw UsageError("--points must be >= 2");
    if (!(a.m0 >= 0.0)) throw UsageError("--m0 must be >= 0");
    const EffectiveParams p = resolve_effective(g);
    const DriftSystem sys = build_drift(p);
    const StabilityReport stab = analyze_stability(sys);
    // Purely oscillating modes (g_eff = 0) may show round-off sized real parts.
    if (stab.max_real_eigenvalue > 1e-12 * sys.A.cwiseAbs().maxCoeff()) {
        std::cerr << "error: drift matrix has an eigenvalue with positive real part ("
                  << num(stab.max_real_eigenvalue) << "); the cooldown diverges\n";
        return kDomain;
    }
    const double gamma = cooling_rate(p).gamma;
    double t_max = a.t_max;
    if (!a.t_opt->count()) t_max = g.preset_kind() && gamma > 0.0 ? 6.0 / gamma : 100.0;

    std::vector<double> times(a.points);
    for (int i = 0; i < a.points; ++i) times[i] = t_max * i / (a.points - 1);
    const MomentState v0 = initial_state(a.m0);
    const Trajectory traj = a.method == "adaptive" ? evolve_adaptive(sys, v0, times) : evolve(sys, v0, times);

    std::vector<ExtraColumn> extra;
    if (a.overlay) {
        ExtraColumn col{"m_analytic", {}};
        for (double t : times) col.values.push_back(a.m0 * std::exp(-gamma * t));
        extra.push_back(std::move(col));
    }
    std::ostringstream os;
    write_trajectory_csv(os, traj, extra);
    RunManifest man = manifest_for(g, "trajectory");
    man.parameters = to_map(p);
    man.parameters["m0"] = a.m0;
    man.parameters["t_max"] = t_max;
    man.parameters["gamma"] = gamma;
    man.settings["points"] = std::to_string(a.points);
    man.settings["method"] = std::string(to_string(traj.method));
    man.settings["overlay"] = a.overlay ? "m_analytic" : "none";
    if (!traj.has_stationary_state) man.warnings.push_back("drift matrix is singular: no stationary state");
    emit(g, os.str(), man);
    return kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    double d_min = 0.05, d_max = 5.0, nu_min = 0.02, nu_max = 1.0;
    int d_count = 41, nu_count = 41;
    std::string d_scale = "log", nu_scale = "log";
    bool numeric = false;
    std::vector<CLI::Option*> axis_opts;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
    SweepGrid grid;
    const auto kind = g.preset_kind();
    if (kind) {
        if (*kind == Preset::fig4 || *kind == Preset::fig5) {
            throw UsageError("preset " + g.preset + " is a trajectory preset; use the trajectory subcommand");
        }
        grid = sweep_preset(*kind);
    } else {
        grid.delta_eff = {"delta_eff", a.d_min, a.d_max, a.d_count,
                          a.d_scale == "log" ? AxisScale::log : AxisScale::linear};
        grid.nu = {"nu", a.nu_min, a.nu_max, a.nu_count, a.nu_scale == "log" ? AxisScale::log : AxisScale::linear};
    }
    if (kind) {
        for (auto* o : a.axis_opts)
            if (o->count()) throw UsageError("axis flags cannot be combined with --preset");
    }
    if (g.given("nu") || g.given("delta_eff")) {
        throw UsageError("sweep varies nu and delta_eff; use the axis flags instead");
    }
    ParamSet ps = g.resolve(preset_base(g));
    grid.fixed = ps.to_effective();
    grid.include_numeric = a.numeric;
    try {
        grid.validate();
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }

    const SweepResult res = run_sweep(grid);
    std::ostringstream os;
    write_sweep_csv(os, res, a.numeric);
    if (res.nan_cells > 0) std::cerr << "warning: " << res.nan_cells << " singular cells written as NaN\n";

    RunManifest man = manifest_for(g, "sweep");
    man.parameters = to_map(grid.fixed);
    man.parameters.erase("nu");
    man.parameters.erase("delta_eff");
    auto axis = [&](const Axis& ax) {
        man.settings[ax.name + "_axis"] = num(ax.min) + ":" + num(ax.max) + ":" + std::to_string(ax.count) +
                                          ":" + (ax.scale == AxisScale::log ? "log" : "linear");
    };
    axis(grid.delta_eff);
    axis(grid.nu);
    man.settings["numeric"] = a.numeric ? "yes" : "no";
    man.nan_cells = res.nan_cells;
    man.warnings = res.warnings;
    emit(g, os.str(), man);
    return kOk;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    std::string model = "effective";
    std::string initial = "fock";
    std::string displacement = "first-order";
    std::string decade;
    double m0 = 1.0;
    double t_max = 5.0;
    int points = 51;
    int nb = 10, nc = 3;
    long budget = 20000;
    double compare_delta_cap = 0.0;
    double omega_eff = 0.1, gamma_tls = 1.0, delta_tls = 0.5;
    CLI::Option* compare_opt = nullptr;
    CLI::Option* delta_tls_opt = nullptr;
};

DensityOperator oracle_initial(const OracleArgs& a, const FockConfig& cfg) {
    if (a.initial == "thermal") return thermal_initial(a.m0, cfg);
    const double r = std::round(a.m0);
    if (std::abs(r - a.m0) > 1e-12) throw UsageError("a Fock initial state needs an integer --m0");
    return fock_initial(static_cast<int>(r), cfg);
}

Trajectory as_trajectory(const DensityTrajectory& d) {
    Trajectory t;
    t.times = d.times;
    t.states = extract_moments(d.states);
    return t;
}

int cmd_oracle(const Globals& g, const OracleArgs& a) {
    if (!(a.t_max > 0.0)) throw UsageError("--t-max must be > 0");
    if (a.points < 2) throw UsageError("--points must be >= 2");
    std::vector<double> times(a.points);
    for (int i = 0; i < a.points; ++i) times[i] = a.t_max * i / (a.points - 1);
    RunManifest man = manifest_for(g, "oracle");
    man.settings["model"] = a.model;
    man.settings["nb"] = std::to_string(a.nb);
    man.settings["initial"] = a.initial;
    man.parameters["m0"] = a.m0;
    man.parameters["t_max"] = a.t_max;
    std::ostringstream os;

    if (a.model == "effective") {
        const EffectiveParams p = resolve_effective(g);
        FockConfig cfg{a.nb, a.nc, false, a.budget};
        const ModelSpec model = build_effective_model(p, cfg);
        const DensityTrajectory dens = evolve_density(model, oracle_initial(a, cfg), times);
        const Trajectory oracle = as_trajectory(dens);
        const Trajectory mom = evolve(build_drift(p), initial_state(a.m0), times);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            worst = std::max(worst, (oracle.states[i].vector() - mom.states[i].vector()).cwiseAbs().maxCoeff());
        write_trajectory_csv(os, oracle);
        std::cerr << "dimension=" << model.layout.dimension() << " max_abs_moment_deviation=" << num(worst)
                  << " trace_drift=" << num(dens.max_trace_drift) << '\n';
        man.parameters.merge(to_map(p));
        man.settings["nc"] = std::to_string(a.nc);
        man.parameters["max_abs_moment_deviation"] = worst;
        if (!g.out.empty()) {
            const std::string side = g.out + ".moments.csv";
            std::ofstream f(side, std::ios::binary);
            if (!f) throw ConfigError("cannot write " + side);
            write_trajectory_csv(f, mom);
            man.outputs.push_back(side);
        }
        emit(g, os.str(), man);
        return kOk;
    }

    if (a.model == "full") {
        ParamSet ps = g.resolve();
        RawParams raw = ps.to_raw();
        const DisplacementMode mode =
            a.displacement == "exact" ? DisplacementMode::exact : DisplacementMode::first_order;
        FockConfig cfg{a.nb, a.nc, true, a.budget};
        auto run = [&](const RawParams& r, double& p1_mean) {
            const DensityTrajectory d = evolve_density(build_full_model(r, cfg, mode), oracle_initial(a, cfg), times);
            const auto p1 = excited_population(d.states);
            double s = 0.0;
            for (std::size_t i = 1; i < times.size(); ++i) s += 0.5 * (p1[i] + p1[i - 1]) * (times[i] - times[i - 1]);
            p1_mean = s / (times.back() - times.front());
            return std::make_pair(as_trajectory(d), p1);
        };
        double p1_mean = 0.0;
        const auto [traj, p1] = run(raw, p1_mean);
        write_trajectory_csv(os, traj, std::vector<ExtraColumn>{{"p1", p1}});
        std::cerr << "dimension=" << cfg.dimension() << " mean_p1=" << num(p1_mean) << '\n';
        for (const auto& [k, v] : ps.values()) man.parameters[k] = v;
        man.settings["displacement"] = a.displacement;
        man.settings["nc"] = std::to_string(a.nc);
        man.parameters["mean_p1"] = p1_mean;
        if (a.compare_opt->count()) {
            RawParams other = raw;
            other.atom_detuning = a.compare_delta_cap;
            double p1_other = 0.0;
            run(other, p1_other);
            const double ratio = p1_mean / p1_other;
            const double slope = std::log(ratio) / std::log(a.compare_delta_cap / raw.atom_detuning);
            std::cout << "mean_p1(Delta=" << num(raw.atom_detuning) << ")=" << num(p1_mean) << '\n'
                      << "mean_p1(Delta=" << num(a.compare_delta_cap) << ")=" << num(p1_other) << '\n'
                      << "p1_ratio=" << num(ratio) << " loglog_slope=" << num(-slope) << '\n';
            man.parameters["compare_delta_cap"] = a.compare_delta_cap;
            man.parameters["p1_ratio"] = ratio;
        }
        if (!g.out.empty() || !a.compare_opt->count()) emit(g, os.str(), man);
        return kOk;
    }

    // Two-level comparator.
    const ParamSet ps = g.resolve();
    const double nu = ps.get("nu").value_or(ParamSet::defaults().at("nu"));
    const double eta = ps.get("eta").value_or(ParamSet::defaults().at("eta"));
    man.parameters.merge(std::map<std::string, double>{
        {"omega_eff", a.omega_eff}, {"gamma_tls", a.gamma_tls}, {"nu", nu}, {"eta", eta}});
    auto stationary = [&](double nu_i, double delta_i, int nb) {
        FockConfig cfg{nb, 0, true, a.budget};
        const ModelSpec m = build_tls_comparator(a.omega_eff, a.gamma_tls, delta_i, eta, nu_i, cfg);
        return extract_moments(relax_to_stationary(m, fock_initial(0, cfg)).rho).m();
    };
    if (!a.decade.empty()) {
        os << "gamma_over_nu,nu,delta_tls,m_ss\n";
        std::vector<double> x, y;
        for (int i = 0; i < 3; ++i) {
            const double f = std::pow(10.0, 0.5 * i);
            const double nu_i = nu * f;
            const double delta_i = a.decade == "weak" ? 0.5 * a.gamma_tls : nu_i;
            const int nb = a.decade == "weak"
                               ? std::max(a.nb, static_cast<int>(std::ceil(1.75 * a.gamma_tls / nu_i)))
                               : a.nb;
            const double m = stationary(nu_i, delta_i, nb);
            x.push_back(a.gamma_tls / nu_i);
            y.push_back(m);
            char buf[160];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x.back(), nu_i, delta_i, m);
            os << buf;
        }
        const double slope = std::log(y.back() / y.front()) / std::log(x.back() / x.front());
        std::cerr << "decade=" << a.decade << " loglog_slope=" << num(slope) << '\n';
        man.settings["decade_sweep"] = a.decade;
        man.parameters["loglog_slope"] = slope;
        emit(g, os.str(), man);
        return kOk;
    }
    const double delta = a.delta_tls_opt->count() ? a.delta_tls : 0.5 * a.gamma_tls;
    FockConfig cfg{a.nb, 0, true, a.budget};
    const ModelSpec m = build_tls_comparator(a.omega_eff, a.gamma_tls, delta, eta, nu, cfg);
    const DensityTrajectory d = evolve_density(m, oracle_initial(a, cfg), times);
    write_trajectory_csv(os, as_trajectory(d), std::vector<ExtraColumn>{{"p1", excited_population(d.states)}});
    const double m_ss = stationary(nu, delta, a.nb);
    std::cerr << "dimension=" << cfg.dimension() << " stationary_m=" << num(m_ss) << '\n';
    man.parameters["delta_tls"] = delta;
    man.parameters["stationary_m"] = m_ss;
    emit(g, os.str(), man);
    return kOk;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    bool quick = false;
    bool extended = false;
    std::string fault;
    std::string json;
};

int cmd_validate(const Globals& g, const ValidateArgs& a) {
    ValidationOptions o;
    o.quick = a.quick;
    o.extended = a.extended;
    if (a.fault == "drift-sign") o.drift = build_drift_sign_fault;
    const ValidationReport rep = run_validation(o);
    for (const auto& c : rep.criteria) {
        const char* status = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
        std::printf("[%s] %d %s (%.2fs)\n", status, c.id, c.title.c_str(), c.seconds);
        if (!c.skipped && !c.passed) {
            for (const auto& k : c.checks)
                if (!k.passed)
                    std::printf("       failing: %s value=%.6g limit=%.6g %s\n", k.name.c_str(), k.value, k.limit,
                                k.detail.c_str());
        }
    }
    const std::string path = !a.json.empty() ? a.json : g.out;
    if (!path.empty()) {
        std::ofstream f(path);
        if (!f) throw ConfigError("cannot write " + path);
        f << rep.to_json() << '\n';
    } else {
        std::cout << rep.to_json() << '\n';
    }
    return rep.all_passed() ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity cooling of a trapped particle: moment equations, closed forms and Lindblad oracle"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    g.argv.assign(argv, argv + argc);
    g.add(app);

    auto* steady = app.add_subcommand("steady", "stationary phonon number and stability report");

    TrajectoryArgs ta;
    auto* traj = app.add_subcommand("trajectory", "cooldown trajectory CSV of all fourteen moments");
    ta.m0_opt = traj->add_option("--m0", ta.m0, "initial phonon number");
    ta.t_opt = traj->add_option("--t-max", ta.t_max, "final time in units of 1/kappa");
    traj->add_option("--points", ta.points, "number of output times");
    traj->add_flag("--overlay", ta.overlay, "add the m(0) exp(-gamma t) column m_analytic");
    traj->add_option("--method", ta.method)->check(CLI::IsMember({"expm", "adaptive"}));

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "(delta_eff, nu) grid of m_ss and gamma");
    sa.axis_opts = {
        sweep->add_option("--delta-min", sa.d_min),  sweep->add_option("--delta-max", sa.d_max),
        sweep->add_option("--delta-count", sa.d_count),
        sweep->add_option("--delta-scale", sa.d_scale)->check(CLI::IsMember({"log", "linear"})),
        sweep->add_option("--nu-min", sa.nu_min),    sweep->add_option("--nu-max", sa.nu_max),
        sweep->add_option("--nu-count", sa.nu_count),
        sweep->add_option("--nu-scale", sa.nu_scale)->check(CLI::IsMember({"log", "linear"}))};
    sweep->add_flag("--numeric", sa.numeric, "add the m_ss_numeric column from the linear solve");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "density-matrix evolution on truncated Fock spaces");
    oracle->add_option("--model", oa.model)->check(CLI::IsMember({"effective", "full", "tls"}));
    oracle->add_option("--m0", oa.m0, "initial phonon number");
    oracle->add_option("--initial", oa.initial)->check(CLI::IsMember({"fock", "thermal"}));
    oracle->add_option("--nb", oa.nb, "phonon cutoff N_b");
    oracle->add_option("--nc", oa.nc, "photon cutoff N_c");
    oracle->add_option("--budget", oa.budget, "maximum Hilbert space dimension");
    oracle->add_option("--t-max", oa.t_max);
    oracle->add_option("--points", oa.points);
    oracle->add_option("--displacement", oa.displacement)->check(CLI::IsMember({"exact", "first-order"}));
    oa.compare_opt = oracle->add_option("--compare-delta-cap", oa.compare_delta_cap,
                                        "rerun the full model at this Delta and compare P1");
    oracle->add_option("--omega-eff", oa.omega_eff, "two-level drive");
    oracle->add_option("--gamma-tls", oa.gamma_tls, "two-level decay rate");
    oa.delta_tls_opt = oracle->add_option("--delta-tls", oa.delta_tls, "two-level detuning (default Gamma/2)");
    oracle->add_option("--decade-sweep", oa.decade, "stationary m_ss for nu, sqrt(10) nu, 10 nu")
        ->check(CLI::IsMember({"weak", "strong"}));

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "run the acceptance suite");
    validate->add_flag("--quick", va.quick, "skip the density-matrix oracle");
    validate->add_flag("--extended", va.extended, "include the full-model and two-level criteria");
    validate->add_option("--json", va.json, "write the JSON summary here");
    validate->add_option("--inject-fault", va.fault)->group("")->check(CLI::IsMember({"drift-sign"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (steady->parsed()) return cmd_steady(g);
        if (traj->parsed()) return cmd_trajectory(g, ta);
        if (sweep->parsed()) return cmd_sweep(g, sa);
        if (oracle->parsed()) return cmd_oracle(g, oa);
        if (validate->parsed()) return cmd_validate(g, va);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n' << app.help();
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DimensionBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << " (dimension " << e.dimension() << ")\n";
        return kDomain;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomain;
    }
    return kUsage;
}
