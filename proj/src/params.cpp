#include "cavcool/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cavcool/analytic.hpp"
#include "cavcool/error.hpp"

namespace cavcool {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be finite");
    }
}

void require_common(double kappa, double nu, double gamma, double eta) {
    if (!(kappa > 0.0)) throw InvalidParameter("kappa must be > 0");
    if (!(nu > 0.0)) throw InvalidParameter("nu must be > 0");
    if (!(gamma >= 0.0)) throw InvalidParameter("Gamma must be >= 0");
    if (!(eta >= 0.0)) throw InvalidParameter("eta must be >= 0");
}

}  // namespace

void RawParams::validate() const {
    require_finite(rabi_frequency, "Omega");
    require_finite(cavity_coupling, "g");
    require_finite(atom_detuning, "Delta");
    require_finite(cavity_laser_detuning, "delta");
    require_finite(cavity_decay, "kappa");
    require_finite(atomic_decay, "Gamma");
    require_finite(phonon_frequency, "nu");
    require_finite(lamb_dicke, "eta");
    require_common(cavity_decay, phonon_frequency, atomic_decay, lamb_dicke);
}

void EffectiveParams::validate() const {
    require_finite(g_eff, "g_eff");
    require_finite(delta_eff, "delta_eff");
    require_finite(kappa, "kappa");
    require_finite(nu, "nu");
    require_finite(eta, "eta");
    require_finite(gamma, "Gamma");
    require_common(kappa, nu, gamma, eta);
}

EffectiveParams derive_effective(const RawParams& raw) {
    raw.validate();
    if (raw.atom_detuning == 0.0) {
        throw InvalidParameter("Delta must be nonzero to eliminate the atom");
    }
    const double g = raw.cavity_coupling;
    EffectiveParams p;
    p.g_eff = -g * raw.rabi_frequency / (2.0 * raw.atom_detuning);
    p.delta_eff = raw.cavity_laser_detuning - g * g / raw.atom_detuning;
    p.kappa = raw.cavity_decay;
    p.nu = raw.phonon_frequency;
    p.eta = raw.lamb_dicke;
    p.gamma = raw.atomic_decay;
    return p;
}

std::string_view to_string(Confinement c) {
    switch (c) {
        case Confinement::strong: return "strong";
        case Confinement::weak: return "weak";
        case Confinement::intermediate: return "intermediate";
    }
    return "?";
}

std::string_view to_string(DetuningRegime r) {
    return r == DetuningRegime::half_kappa ? "half-kappa" : "nu";
}

Confinement classify_confinement(const EffectiveParams& p, double threshold) {
    if (!(threshold > 1.0)) throw InvalidParameter("confinement threshold must be > 1");
    if (p.nu >= threshold * p.kappa) return Confinement::strong;
    if (p.kappa >= threshold * p.nu) return Confinement::weak;
    return Confinement::intermediate;
}

RatioCheck check_timescale_separation(const EffectiveParams& p, double factor) {
    if (!(factor > 1.0)) throw InvalidParameter("timescale factor must be > 1");
    const double coupling = std::abs(p.eta * p.g_eff);
    if (coupling == 0.0) return {true, kInf};
    const double ratio = std::min(p.kappa, p.nu) / coupling;
    return {ratio > factor, ratio};
}

double required_cooperativity(const EffectiveParams& p, DetuningRegime choice) {
    if (!(p.kappa > 0.0) || !(p.nu > 0.0)) {
        throw InvalidParameter("required cooperativity needs kappa > 0 and nu > 0");
    }
    if (p.eta == 0.0) {
        throw SingularFormula(
            "required cooperativity divides by eta^2: with eta = 0 the laser does not "
            "couple to the motion and no cooling rate can outrun spontaneous emission");
    }
    const double k = p.kappa, nu = p.nu, eta2 = p.eta * p.eta;
    if (choice == DetuningRegime::half_kappa) {
        return (std::pow(k, 4) + 4.0 * std::pow(nu, 4)) / (8.0 * eta2 * nu * k * k * k);
    }
    return (k * k + 16.0 * nu * nu) / (64.0 * eta2 * nu * nu);
}

RatioCheck check_spontaneous_emission(const RawParams& raw, double cooling_rate,
                                      double margin) {
    if (raw.atom_detuning == 0.0) {
        throw InvalidParameter("Delta must be nonzero for the emission estimate");
    }
    const double emission = raw.atomic_decay * raw.rabi_frequency * raw.rabi_frequency /
                            (4.0 * raw.atom_detuning * raw.atom_detuning);
    if (emission == 0.0) return {true, kInf};
    const double ratio = cooling_rate / emission;
    return {ratio > margin, ratio};
}

namespace {

DetuningRegime nearest_choice(const EffectiveParams& p) {
    return std::abs(p.delta_eff - p.nu) < std::abs(p.delta_eff - 0.5 * p.kappa)
               ? DetuningRegime::nu
               : DetuningRegime::half_kappa;
}

}  // namespace

RegimeReport assess_regime(const EffectiveParams& p, const RegimeThresholds& t) {
    p.validate();
    RegimeReport r;
    r.confinement = classify_confinement(p, t.confinement);
    r.timescale = check_timescale_separation(p, t.timescale);
    r.eta = p.eta;
    r.lamb_dicke_ok = p.eta <= t.lamb_dicke;
    r.detuning_choice = nearest_choice(p);
    if (p.eta > 0.0) r.cooperativity_required = required_cooperativity(p, r.detuning_choice);
    return r;
}

RegimeReport assess_regime(const RawParams& raw, const RegimeThresholds& t) {
    const EffectiveParams p = derive_effective(raw);
    RegimeReport r = assess_regime(p, t);
    if (raw.atomic_decay > 0.0) {
        r.cooperativity_actual = raw.cavity_coupling * raw.cavity_coupling /
                                 (raw.cavity_decay * raw.atomic_decay);
    }
    r.spontaneous_emission =
        check_spontaneous_emission(raw, cooling_rate(p).gamma, t.emission_margin);
    return r;
}

}  // namespace cavcool
