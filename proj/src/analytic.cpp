#include "cavcool/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "cavcool/error.hpp"

namespace cavcool {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

double cubic_frequency(const EffectiveParams& p) {
    const double g2 = p.g_eff * p.g_eff, eta2 = p.eta * p.eta, d = p.delta_eff;
    return p.nu * (p.kappa * p.kappa + 4.0 * d * d) - 16.0 * eta2 * g2 * d;
}

StationaryMoments stationary_closed_form(const EffectiveParams& p) {
    p.validate();
    const double mu3 = cubic_frequency(p);
    if (mu3 == 0.0) throw SingularFormula("stationary moments: cubic frequency mu^3 vanishes");
    if (p.delta_eff == 0.0) throw SingularFormula("stationary moments: delta_eff vanishes");

    const double g = p.g_eff, eta = p.eta, k = p.kappa, nu = p.nu, d = p.delta_eff;
    const double g2 = g * g, g3 = g2 * g, g4 = g2 * g2, g5 = g4 * g, g6 = g4 * g2;
    const double eta2 = eta * eta, eta3 = eta2 * eta, eta4 = eta2 * eta2;
    const double k2 = k * k, nu2 = nu * nu, d2 = d * d;
    const double mu6 = mu3 * mu3;
    const double kd = k2 + 4.0 * d2;  // kappa^2 + 4 delta^2

    using M = Moment;
    StationaryMoments out;
    out.mu3 = mu3;
    MomentState& s = out.state;
    s[M::kx] = 0.0;
    s[M::ky] = 4.0 * g * k * nu / mu3;
    s[M::ku] = 8.0 * eta * g2 * k / mu3;
    s[M::kw] = 8.0 * g * (4.0 * eta2 * g2 - d * nu) / mu3;

    // Leading term carries (kappa^2 + 4 delta^2); this is what A v = -b gives.
    s[M::n] = eta2 * g2 * kd / (2.0 * d * mu3) + 4.0 * g2 * nu2 * kd / mu6 -
              128.0 * eta2 * g4 * nu * d / mu6 + 256.0 * eta4 * g6 / mu6;
    s[M::k1] = eta * g * k * kd / (2.0 * d * mu3) - 64.0 * eta * g3 * k * nu * d / mu6 +
               256.0 * eta3 * g5 * k / mu6;
    s[M::k2] = eta * g * kd / mu3 + 32.0 * eta * g3 * k2 * nu / mu6;
    s[M::k3] = eta * g / d;
    s[M::k4] = 0.0;
    s[M::k5] = -8.0 * g2 * nu2 * (k2 - 4.0 * d2) / mu6 + eta2 * g2 * (k2 - 4.0 * d2) / (d * mu3) -
               256.0 * eta2 * g4 * nu * d / mu6 + 512.0 * eta4 * g6 / mu6;
    s[M::k6] = -32.0 * g2 * k * nu2 * d / mu6 + 4.0 * eta2 * g2 * k / mu3 +
               128.0 * eta2 * g4 * k * nu / mu6;
    s[M::k7] = eta2 * g2 * kd / (nu * mu3) + 32.0 * eta2 * g4 * k2 / mu6;
    s[M::k8] = 0.0;
    s[M::m] = kd / (16.0 * nu * d) +
              eta2 * g2 * (k2 - 8.0 * nu2 + 16.0 * nu * d + 4.0 * d2) / (2.0 * nu * mu3) +
              nu * kd * (nu - 2.0 * d) / (4.0 * d * mu3) + 16.0 * eta2 * g4 * k2 / mu6;
    return out;
}

double m_ss_first_order(double kappa, double nu, double delta_eff) {
    const double denom = 16.0 * nu * delta_eff;
    if (denom == 0.0) throw SingularFormula("first-order m_ss: nu * delta_eff vanishes");
    const double off = nu - delta_eff;
    return (kappa * kappa + 4.0 * off * off) / denom;
}

double m_ss_first_order(const EffectiveParams& p) {
    return m_ss_first_order(p.kappa, p.nu, p.delta_eff);
}

double optimal_detuning(double kappa, double nu) {
    if (!(kappa > 0.0) || !(nu > 0.0)) throw InvalidParameter("optimal detuning needs kappa, nu > 0");
    return 0.5 * std::sqrt(kappa * kappa + 4.0 * nu * nu);
}

double optimal_detuning(const EffectiveParams& p) { return optimal_detuning(p.kappa, p.nu); }
double optimal_detuning_weak_limit(double kappa) { return 0.5 * kappa; }
double optimal_detuning_strong_limit(double nu) { return nu; }

std::string_view to_string(RateRegime r) {
    switch (r) {
        case RateRegime::general: return "general";
        case RateRegime::half_kappa_limit: return "half-kappa-limit";
        case RateRegime::nu_limit: return "nu-limit";
    }
    return "?";
}

double rate_denominator(double kappa, double nu, double delta_eff) {
    // factored form, no cancellation near delta = nu
    const double k2 = kappa * kappa, lo = nu - delta_eff, hi = nu + delta_eff;
    return (k2 + 4.0 * lo * lo) * (k2 + 4.0 * hi * hi);
}

CoolingRateResult cooling_rate(const EffectiveParams& p) {
    if (!(p.kappa > 0.0) || !(p.nu > 0.0)) throw InvalidParameter("cooling rate needs kappa, nu > 0");
    CoolingRateResult r;
    r.inputs = p;
    const double eg = p.eta * p.g_eff;
    r.gamma = 64.0 * eg * eg * p.nu * p.delta_eff * p.kappa /
              rate_denominator(p.kappa, p.nu, p.delta_eff);
    if (near(p.delta_eff, 0.5 * p.kappa)) {
        r.regime = RateRegime::half_kappa_limit;
        r.simplified_gamma = cooling_rate_half_kappa(p);
    } else if (near(p.delta_eff, p.nu)) {
        r.regime = RateRegime::nu_limit;
        r.simplified_gamma = cooling_rate_nu(p);
    }
    return r;
}

double cooling_rate_half_kappa(const EffectiveParams& p) {
    const double eg = p.eta * p.g_eff, k = p.kappa, nu = p.nu;
    return 8.0 * eg * eg * nu * k * k / (std::pow(k, 4) + 4.0 * std::pow(nu, 4));
}

double cooling_rate_nu(const EffectiveParams& p) {
    const double eg = p.eta * p.g_eff, k = p.kappa, nu = p.nu;
    return 64.0 * eg * eg * nu * nu / (k * (k * k + 16.0 * nu * nu));
}

double k4_adiabatic(const EffectiveParams& p, double m) {
    if (!(p.kappa > 0.0) || !(p.nu > 0.0)) throw InvalidParameter("k4 needs kappa, nu > 0");
    return -64.0 * p.eta * p.g_eff * p.nu * p.kappa * p.delta_eff * m /
           rate_denominator(p.kappa, p.nu, p.delta_eff);
}

IdentityReport identity_checks(const EffectiveParams& p) {
    p.validate();
    IdentityReport r;
    EffectiveParams half = p, at_nu = p;
    half.delta_eff = 0.5 * p.kappa;
    at_nu.delta_eff = p.nu;

    r.m_ss_half_kappa = m_ss_first_order(half);
    r.m_ss_nu = m_ss_first_order(at_nu);
    r.sqrt_ratio = r.m_ss_half_kappa / std::sqrt(r.m_ss_nu);
    r.sqrt_deviation = std::abs(r.sqrt_ratio - 1.0);
    r.m_ss_half_kappa_full = stationary_closed_form(half).state.m();
    r.m_ss_nu_full = stationary_closed_form(at_nu).state.m();

    r.gamma_half_kappa = cooling_rate(half).gamma;
    r.gamma_nu = cooling_rate(at_nu).gamma;
    r.gamma_ratio = r.gamma_nu != 0.0 ? r.gamma_half_kappa / r.gamma_nu : std::nan("");
    r.predicted_gamma_ratio = p.kappa / (8.0 * p.nu);
    r.gamma_deviation = std::abs(r.gamma_ratio / r.predicted_gamma_ratio - 1.0);
    r.weak_confinement = p.nu * kDefaultConfinementThreshold <= p.kappa;
    return r;
}

}  // namespace cavcool
