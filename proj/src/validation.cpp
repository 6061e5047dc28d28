#include "cavcool/validation.hpp"

#include <boost/math/tools/minima.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cavcool/analytic.hpp"
#include "cavcool/error.hpp"
#include "cavcool/lindblad.hpp"
#include "json.hpp"

namespace cavcool {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

CheckResult at_most(std::string name, double value, double limit, std::string detail = {}) {
    return {std::move(name), value <= limit, value, limit, std::move(detail)};
}

CheckResult at_least(std::string name, double value, double limit, std::string detail = {}) {
    return {std::move(name), value >= limit, value, limit, std::move(detail)};
}

CheckResult within(std::string name, double value, double lo, double hi, std::string detail = {}) {
    CheckResult c{std::move(name), value >= lo && value <= hi, value, hi, std::move(detail)};
    if (c.detail.empty()) c.detail = fmt("expected in [%.6g, %.6g]", lo, hi);
    return c;
}

CheckResult failed(std::string name, const std::exception& e) {
    return {std::move(name), false, std::numeric_limits<double>::quiet_NaN(), 0.0, e.what()};
}

CriterionResult start(int id, std::string title) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    return r;
}

void finish(CriterionResult& r, Clock::time_point t0) {
    r.seconds = seconds_since(t0);
    r.passed = !r.checks.empty();
    for (const auto& c : r.checks) r.passed = r.passed && c.passed;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return v;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (sxy - sx * sy / n) / (sxx - sx * sx / n);
}

double time_average(const std::vector<double>& t, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
    return s / (t.back() - t.front());
}

bool identically_zero(Moment w) { return w == Moment::kx || w == Moment::k4 || w == Moment::k8; }

}  // namespace

const CheckResult* CriterionResult::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return &c;
    return nullptr;
}

DriftSystem build_drift_sign_fault(const EffectiveParams& p) {
    DriftSystem sys = build_drift(p);
    sys.A.row(MomentState::index(Moment::m)) *= -1.0;
    return sys;
}

CriterionResult check_stationary_agreement(const ValidationOptions& o) {
    const auto t0 = Clock::now();
    CriterionResult r = start(1, "closed-form stationary moments match the linear solve");
    int sets = 0, skipped = 0;
    double worst_rel = 0.0, worst_abs = 0.0;
    std::string worst_at;
    try {
        for (double eta : {0.05, 0.1}) {
            for (double g : {1e-5, -1e-4, 1e-4, 1e-3}) {
                for (double nu : logspace(0.02, 20.0, 5)) {
                    for (double d : logspace(0.1, 20.0, 5)) {
                        EffectiveParams p;
                        p.eta = eta;
                        p.g_eff = g;
                        p.nu = nu;
                        p.delta_eff = d;
                        const double mu3 = cubic_frequency(p);
                        if (std::abs(mu3) < 1e-6 * nu * (1.0 + 4.0 * d * d)) {
                            ++skipped;
                            continue;
                        }
                        const MomentState closed = stationary_closed_form(p).state;
                        const MomentState num = stationary_numeric(o.drift(p)).state;
                        ++sets;
                        for (std::size_t k = 0; k < kMomentCount; ++k) {
                            const auto w = static_cast<Moment>(k);
                            if (identically_zero(w)) {
                                worst_abs = std::max(worst_abs, std::abs(num[w]));
                                continue;
                            }
                            const double rel = std::abs(closed[w] - num[w]) / std::abs(num[w]);
                            if (!(rel <= worst_rel)) {
                                worst_rel = std::isnan(rel) ? std::numeric_limits<double>::infinity() : rel;
                                worst_at = std::string(moment_name(w)) +
                                           fmt(" at eta=%g g_eff=%g", eta, g) +
                                           fmt(" nu=%g delta_eff=%g", nu, d);
                            }
                        }
                    }
                }
            }
        }
        r.checks.push_back(at_least("parameter_sets", sets, 100, fmt("%g near-singular sets skipped", skipped)));
        r.checks.push_back(at_most("max_relative_deviation", worst_rel, 1e-9, "worst: " + worst_at));
        r.checks.push_back(at_most("max_abs_zero_components", worst_abs, 1e-12, "k_x, k4, k8"));
    } catch (const std::exception& e) {
        r.checks.push_back(failed("stationary_solve", e));
    }
    finish(r, t0);
    return r;
}

CriterionResult check_oracle_equivalence(const ValidationOptions& o) {
    const auto t0 = Clock::now();
    CriterionResult r = start(2, "effective Lindblad oracle reproduces the moment trajectories");
    try {
        EffectiveParams p;
        p.eta = 0.1;
        p.g_eff = 1e-2;
        p.nu = 1.0;
        p.delta_eff = 0.5;
        FockConfig cfg;
        cfg.phonon_cutoff = 30;
        cfg.photon_cutoff = 4;
        const auto times = linspace(0.0, 5.0, 51);
        const ModelSpec model = build_effective_model(p, cfg);
        const DensityTrajectory dens = evolve_density(model, fock_initial(3, cfg), times);
        const auto oracle = extract_moments(dens.states);
        const Trajectory mom = evolve(o.drift(p), initial_state(3.0), times);

        double worst = 0.0;
        std::string where;
        for (std::size_t i = 0; i < times.size(); ++i) {
            for (std::size_t k = 0; k < kMomentCount; ++k) {
                const auto w = static_cast<Moment>(k);
                const double dev = std::abs(oracle[i][w] - mom.states[i][w]);
                if (!(dev <= worst)) {
                    worst = std::isnan(dev) ? std::numeric_limits<double>::infinity() : dev;
                    where = std::string(moment_name(w)) + fmt(" at t=%g", times[i]);
                }
            }
        }
        // Truncation tail: population of the top phonon level.
        double top = 0.0;
        const BasisLayout& L = model.layout;
        for (const auto& s : dens.states)
            for (int c = 0; c < L.photon_levels(); ++c) {
                const long j = L.index(0, L.phonon_levels() - 1, c);
                top = std::max(top, s.matrix()(j, j).real());
            }
        r.checks.push_back(at_most("max_abs_moment_deviation", worst, 1e-6, "worst: " + where));
        r.checks.push_back(at_most("trace_drift", dens.max_trace_drift, 1e-8));
        r.checks.push_back(at_most("hermiticity_error", dens.max_hermiticity_error, 1e-10));
        r.checks.push_back(at_most("truncation_tail", top, 1e-8, "top phonon level population"));
    } catch (const std::exception& e) {
        r.checks.push_back(failed("oracle_run", e));
    }
    finish(r, t0);
    return r;
}

CriterionResult check_rate_formula(const ValidationOptions& o) {
    const auto t0 = Clock::now();
    CriterionResult r = start(3, "fitted cooling rate and exponential overlay at the cooldown preset");
    for (double nu : {0.05, 0.2}) {
        const std::string tag = fmt("nu=%g", nu);
        try {
            EffectiveParams p;
            p.eta = 0.1;
            p.g_eff = 5e-4;
            p.nu = nu;
            p.delta_eff = 0.5;
            const DriftSystem sys = o.drift(p);
            const double gamma = cooling_rate(p).gamma;
            const double m_ss = stationary_closed_form(p).state.m();
            const auto times = linspace(0.0, 6.0 / gamma, 601);
            const Trajectory traj = evolve(sys, initial_state(2500.0), times);

            double worst = 0.0;
            for (std::size_t i = 0; i < times.size(); ++i) {
                const double m = traj.states[i].m();
                if (!(m >= 10.0 * m_ss)) continue;
                const double ref = 2500.0 * std::exp(-gamma * times[i]);
                worst = std::max(worst, std::abs(m - ref) / m);
            }
            r.checks.push_back(at_most("exponential_overlay." + tag, worst, 0.05,
                                       "max |m - 2500 exp(-gamma t)| / m while m >= 10 m_ss"));
            try {
                const RateFit fit = fit_cooling_rate(traj, m_ss);
                r.checks.push_back(at_most("fitted_rate." + tag, std::abs(fit.rate / gamma - 1.0), 0.05,
                                           fmt("fit %.6g vs formula %.6g", fit.rate, gamma)));
            } catch (const InsufficientDecay& e) {
                r.checks.push_back(failed("fitted_rate." + tag, e));
            }
        } catch (const std::exception& e) {
            r.checks.push_back(failed("trajectory." + tag, e));
        }
    }
    finish(r, t0);
    return r;
}

CriterionResult check_limit_values(const ValidationOptions&) {
    const auto t0 = Clock::now();
    CriterionResult r = start(4, "strong- and weak-confinement limit values of m_ss");
    try {
        EffectiveParams s;
        s.eta = 0.1;
        s.g_eff = 1e-4;
        s.nu = 10.0;
        s.delta_eff = 10.0;
        const double target = s.kappa * s.kappa / (16.0 * s.nu * s.nu);
        r.checks.push_back(at_most("strong.first_order", std::abs(m_ss_first_order(s) / target - 1.0), 1e-12,
                                   fmt("target %.6g", target)));
        r.checks.push_back(at_most("strong.closed_form",
                                   std::abs(stationary_closed_form(s).state.m() / target - 1.0), 0.01));

        EffectiveParams w = s;
        w.nu = 0.05;
        w.delta_eff = 0.5;
        const double weak_target = w.kappa / (4.0 * w.nu);
        r.checks.push_back(at_most("weak.first_order", std::abs(m_ss_first_order(w) / weak_target - 1.0), 0.15,
                                   fmt("m_ss %.6g vs %.6g", m_ss_first_order(w), weak_target)));
        r.checks.push_back(at_most("weak.closed_form",
                                   std::abs(stationary_closed_form(w).state.m() / weak_target - 1.0), 0.15));
    } catch (const std::exception& e) {
        r.checks.push_back(failed("limit_values", e));
    }
    finish(r, t0);
    return r;
}

CriterionResult check_optimal_detuning(const ValidationOptions&) {
    const auto t0 = Clock::now();
    CriterionResult r = start(5, "numeric minimisation of m_ss reproduces the optimal detuning");
    const double kappa = 1.0;
    double worst = 0.0;
    std::string where;
    for (double nu : logspace(0.01, 100.0, 20)) {
        auto f = [&](double d) { return m_ss_first_order(kappa, nu, d); };
        const auto res = boost::math::tools::brent_find_minima(f, 1e-6, 10.0 * (kappa + nu),
                                                               std::numeric_limits<double>::digits / 2 + 4);
        const double rel = std::abs(res.first / optimal_detuning(kappa, nu) - 1.0);
        if (rel >= worst) {
            worst = rel;
            where = fmt("nu=%g", nu);
        }
    }
    r.checks.push_back(at_most("max_relative_deviation", worst, 1e-6, "worst: " + where + " (20 ratios)"));
    finish(r, t0);
    return r;
}

CriterionResult check_identity_relations(const ValidationOptions&) {
    const auto t0 = Clock::now();
    CriterionResult r = start(6, "square-root and rate-ratio identities in weak confinement");
    try {
        EffectiveParams p;
        p.eta = 0.1;
        p.g_eff = 1e-4;
        p.nu = 0.05;
        const IdentityReport id = identity_checks(p);
        r.checks.push_back(at_most("sqrt_relation", id.sqrt_deviation, 0.15,
                                   fmt("m_ss(kappa/2)/sqrt(m_ss(nu)) = %.6g", id.sqrt_ratio)));
        r.checks.push_back(at_most("rate_ratio", id.gamma_deviation, 0.15,
                                   fmt("gamma ratio %.6g vs %.6g", id.gamma_ratio, id.predicted_gamma_ratio)));
    } catch (const std::exception& e) {
        r.checks.push_back(failed("identities", e));
    }
    finish(r, t0);
    return r;
}

CriterionResult check_adiabatic_elimination(const ValidationOptions&) {
    const auto t0 = Clock::now();
    CriterionResult r = start(7, "full atom-cavity-phonon model converges to the effective model");
    try {
        const std::vector<double> deltas = {25.0, 50.0, 100.0};
        const auto times = linspace(0.0, 10.0, 101);
        LindbladOptions opts;
        opts.abs_tol = 1e-13;
        opts.rel_tol = 1e-11;
        std::vector<double> devs, p1s;
        for (double Dl : deltas) {
            RawParams raw;
            raw.cavity_coupling = 0.05;
            raw.rabi_frequency = 0.1;
            raw.atomic_decay = 0.0;
            raw.atom_detuning = Dl;
            raw.phonon_frequency = 1.0;
            raw.lamb_dicke = 0.1;
            raw.cavity_laser_detuning = 0.5 + raw.cavity_coupling * raw.cavity_coupling / Dl;
            const EffectiveParams eff = derive_effective(raw);

            FockConfig ce{8, 3, false};
            FockConfig cf{8, 3, true};
            const auto de = evolve_density(build_effective_model(eff, ce), fock_initial(1, ce), times, opts);
            const auto df = evolve_density(build_full_model(raw, cf, DisplacementMode::first_order),
                                           fock_initial(1, cf), times, opts);
            const auto me = extract_moments(de.states);
            const auto mf = extract_moments(df.states);
            double dev = 0.0;
            for (std::size_t i = 0; i < times.size(); ++i) dev = std::max(dev, std::abs(me[i].m() - mf[i].m()));
            devs.push_back(dev);
            p1s.push_back(time_average(times, excited_population(df.states)));
        }
        for (std::size_t i = 1; i < deltas.size(); ++i) {
            r.checks.push_back(at_most(fmt("deviation_ratio.Delta=%g->%g", deltas[i - 1], deltas[i]),
                                       devs[i] / devs[i - 1], deltas[i - 1] / deltas[i],
                                       fmt("max|m_full - m_eff| %.3g -> %.3g", devs[i - 1], devs[i])));
        }
        r.checks.push_back(within("p1_loglog_slope", loglog_slope(deltas, p1s), -2.2, -1.8));
    } catch (const std::exception& e) {
        r.checks.push_back(failed("full_model_run", e));
    }
    finish(r, t0);
    return r;
}

CriterionResult check_laser_cooling(const ValidationOptions&) {
    const auto t0 = Clock::now();
    CriterionResult r = start(8, "two-level comparator reproduces laser-cooling scalings");
    const double omega = 0.1, gamma = 1.0, eta = 0.1;
    auto stationary_m = [&](double nu, double delta, int cutoff, double& top) {
        FockConfig cfg{cutoff, 0, true};
        const ModelSpec m = build_tls_comparator(omega, gamma, delta, eta, nu, cfg);
        const StationaryDensity st = relax_to_stationary(m, fock_initial(0, cfg));
        const BasisLayout& L = m.layout;
        for (int a = 0; a < 2; ++a) {
            const long j = L.index(a, L.phonon_levels() - 1, 0);
            top = std::max(top, st.rho.matrix()(j, j).real());
        }
        return extract_moments(st.rho).m();
    };
    try {
        std::vector<double> ratios = logspace(8.0, 80.0, 3), ms;
        double top = 0.0;
        for (double q : ratios) {
            ms.push_back(stationary_m(gamma / q, 0.5 * gamma, std::max(30, static_cast<int>(std::ceil(1.75 * q))), top));
        }
        r.checks.push_back(within("weak.loglog_slope", loglog_slope(ratios, ms), 0.85, 1.15));
        r.checks.push_back(at_most("weak.truncation_tail", top, 1e-3, "top phonon level population"));

        std::vector<double> sratios, sms;
        top = 0.0;
        for (double nu : logspace(10.0, 100.0, 3)) {
            sratios.push_back(gamma / nu);
            sms.push_back(stationary_m(nu, nu, 6, top));
        }
        r.checks.push_back(within("strong.loglog_slope", loglog_slope(sratios, sms), 1.8, 2.2));
        r.checks.push_back(at_most("strong.truncation_tail", top, 1e-3, "top phonon level population"));
    } catch (const std::exception& e) {
        r.checks.push_back(failed("comparator_run", e));
    }
    finish(r, t0);
    return r;
}

bool ValidationReport::all_passed() const {
    for (const auto& c : criteria)
        if (!c.skipped && !c.passed) return false;
    return true;
}

std::string ValidationReport::to_json() const {
    nlohmann::ordered_json j;
    j["passed"] = all_passed();
    j["seconds"] = seconds;
    auto& arr = j["criteria"] = nlohmann::ordered_json::array();
    for (const auto& c : criteria) {
        nlohmann::ordered_json cj;
        cj["id"] = c.id;
        cj["title"] = c.title;
        cj["status"] = c.skipped ? "skipped" : (c.passed ? "pass" : "fail");
        cj["seconds"] = c.seconds;
        auto& checks = cj["checks"] = nlohmann::ordered_json::array();
        for (const auto& k : c.checks) {
            nlohmann::ordered_json kj;
            kj["name"] = k.name;
            kj["passed"] = k.passed;
            kj["value"] = std::isfinite(k.value) ? nlohmann::ordered_json(k.value) : nlohmann::ordered_json();
            kj["limit"] = k.limit;
            if (!k.detail.empty()) kj["detail"] = k.detail;
            checks.push_back(kj);
        }
        arr.push_back(cj);
    }
    return j.dump(2);
}

ValidationReport run_validation(const ValidationOptions& o) {
    const auto t0 = Clock::now();
    ValidationReport rep;
    auto skip = [](int id, std::string title) {
        CriterionResult c = start(id, std::move(title));
        c.skipped = true;
        return c;
    };
    rep.criteria.push_back(check_stationary_agreement(o));
    rep.criteria.push_back(o.quick ? skip(2, "effective Lindblad oracle (skipped in quick mode)")
                                   : check_oracle_equivalence(o));
    rep.criteria.push_back(check_rate_formula(o));
    rep.criteria.push_back(check_limit_values(o));
    rep.criteria.push_back(check_optimal_detuning(o));
    rep.criteria.push_back(check_identity_relations(o));
    const double core = seconds_since(t0);

    if (o.extended) {
        rep.criteria.push_back(check_adiabatic_elimination(o));
        rep.criteria.push_back(check_laser_cooling(o));
    } else {
        rep.criteria.push_back(skip(7, "full-model adiabatic elimination (extended suite)"));
        rep.criteria.push_back(skip(8, "two-level laser-cooling scalings (extended suite)"));
    }

    CriterionResult timing = start(9, "core criteria finish within the time budget");
    timing.checks.push_back(at_most("core_seconds", core, o.budget_seconds, "criteria 1-6"));
    timing.seconds = core;
    timing.passed = timing.checks.front().passed;
    rep.criteria.push_back(timing);
    rep.seconds = seconds_since(t0);
    return rep;
}

}  // namespace cavcool
