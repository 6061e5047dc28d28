#pragma once

#include "cavcool/moments.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

/// Closed-form stationary point of the cooling equations.
struct StationaryMoments {
    MomentState state;
    double mu3 = 0.0;  // cubic frequency, rate^3
};

/// mu^3 = nu (kappa^2 + 4 delta_eff^2) - 16 eta^2 g_eff^2 delta_eff.
double cubic_frequency(const EffectiveParams& p);

/// All fourteen stationary values, including every eta^2-and-higher term.
/// Throws SingularFormula when mu^3 = 0 or delta_eff = 0.
StationaryMoments stationary_closed_form(const EffectiveParams& p);

/// m_ss to first order in eta: (kappa^2 + 4 (nu - delta_eff)^2) / (16 nu delta_eff).
double m_ss_first_order(const EffectiveParams& p);
/// Same expression at an explicit detuning.
double m_ss_first_order(double kappa, double nu, double delta_eff);

/// Detuning minimising m_ss_first_order: sqrt(kappa^2 + 4 nu^2) / 2.
double optimal_detuning(const EffectiveParams& p);
double optimal_detuning(double kappa, double nu);
/// Weak-confinement limit kappa / 2.
double optimal_detuning_weak_limit(double kappa);
/// Strong-confinement limit nu.
double optimal_detuning_strong_limit(double nu);

enum class RateRegime { general, half_kappa_limit, nu_limit };
std::string_view to_string(RateRegime r);

struct CoolingRateResult {
    double gamma = 0.0;
    RateRegime regime = RateRegime::general;
    /// Value of the simplified limit expression when the regime tag is set.
    double simplified_gamma = 0.0;
    EffectiveParams inputs;
};

/// (kappa^2 + 4 nu^2)^2 + 8 delta^2 (kappa^2 - 4 nu^2) + 16 delta^4.
double rate_denominator(double kappa, double nu, double delta_eff);

/// Adiabatic cooling rate of the phonon number. Defined for every
/// delta_eff; gamma <= 0 means no cooling.
CoolingRateResult cooling_rate(const EffectiveParams& p);

/// Rate at delta_eff = kappa/2: 8 eta^2 g^2 nu kappa^2 / (kappa^4 + 4 nu^4).
double cooling_rate_half_kappa(const EffectiveParams& p);
/// Rate at delta_eff = nu: 64 eta^2 g^2 nu^2 / (kappa (kappa^2 + 16 nu^2)).
double cooling_rate_nu(const EffectiveParams& p);

/// Adiabatic value of the photon-phonon coherence k4 for phonon number m.
double k4_adiabatic(const EffectiveParams& p, double m);

/// Comparison of the two standard detuning choices at fixed (eta, g_eff, kappa, nu).
struct IdentityReport {
    double m_ss_half_kappa = 0.0;      // first-order m_ss at delta_eff = kappa/2
    double m_ss_nu = 0.0;              // first-order m_ss at delta_eff = nu
    double sqrt_ratio = 0.0;           // m_ss_half_kappa / sqrt(m_ss_nu)
    double sqrt_deviation = 0.0;       // |sqrt_ratio - 1|
    double m_ss_half_kappa_full = 0.0;  // closed form with eta corrections
    double m_ss_nu_full = 0.0;
    double gamma_half_kappa = 0.0;
    double gamma_nu = 0.0;
    double gamma_ratio = 0.0;            // gamma_half_kappa / gamma_nu
    double predicted_gamma_ratio = 0.0;  // kappa / (8 nu)
    double gamma_deviation = 0.0;        // |gamma_ratio / predicted - 1|
    bool weak_confinement = false;       // nu < kappa / 10
};

IdentityReport identity_checks(const EffectiveParams& p);

}  // namespace cavcool
