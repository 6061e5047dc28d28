#pragma once

#include <optional>
#include <string_view>

namespace cavcool {

/// Physical inputs of the atom-cavity-phonon setup. All rates share one
/// frequency unit; the default unit is kappa = 1.
struct RawParams {
    double rabi_frequency = 0.0;          // Omega
    double cavity_coupling = 0.0;         // g
    double atom_detuning = 0.0;           // Delta
    double cavity_laser_detuning = 0.0;   // delta
    double cavity_decay = 1.0;            // kappa
    double atomic_decay = 0.0;            // Gamma
    double phonon_frequency = 1.0;        // nu
    double lamb_dicke = 0.0;              // eta

    /// Throws InvalidParameter unless kappa > 0, nu > 0, Gamma >= 0, eta >= 0.
    void validate() const;
};

/// Parameters of the two-mode phonon-photon model left after the atom has
/// been adiabatically eliminated. g_eff is signed.
struct EffectiveParams {
    double g_eff = 0.0;
    double delta_eff = 0.0;
    double kappa = 1.0;
    double nu = 1.0;
    double eta = 0.0;
    double gamma = 0.0;  // atomic decay, carried for condition checks

    void validate() const;
};

/// g_eff = -g Omega / (2 Delta), delta_eff = delta - g^2 / Delta.
EffectiveParams derive_effective(const RawParams& raw);

enum class Confinement { strong, weak, intermediate };
std::string_view to_string(Confinement c);

/// Which closed-form detuning choice a cooperativity bound refers to.
enum class DetuningRegime { half_kappa, nu };
std::string_view to_string(DetuningRegime r);

inline constexpr double kDefaultConfinementThreshold = 10.0;
inline constexpr double kDefaultTimescaleFactor = 100.0;
inline constexpr double kDefaultEmissionMargin = 10.0;
inline constexpr double kDefaultLambDickeLimit = 0.2;

/// strong if nu >= threshold*kappa, weak if kappa >= threshold*nu.
Confinement classify_confinement(const EffectiveParams& p,
                                 double threshold = kDefaultConfinementThreshold);

struct RatioCheck {
    bool ok = true;
    double ratio = 0.0;  // +inf when the limiting quantity vanishes
};

/// min(kappa, nu) / |eta g_eff| against `factor`.
RatioCheck check_timescale_separation(const EffectiveParams& p,
                                      double factor = kDefaultTimescaleFactor);

/// Lower bound on g^2/(kappa Gamma) for negligible spontaneous emission.
double required_cooperativity(const EffectiveParams& p, DetuningRegime choice);

/// gamma_cool / (Gamma Omega^2 / 4 Delta^2) against `margin`.
RatioCheck check_spontaneous_emission(const RawParams& raw, double cooling_rate,
                                      double margin = kDefaultEmissionMargin);

struct RegimeReport {
    Confinement confinement = Confinement::intermediate;
    RatioCheck timescale;
    bool lamb_dicke_ok = true;
    double eta = 0.0;
    DetuningRegime detuning_choice = DetuningRegime::half_kappa;
    std::optional<double> cooperativity_required;  // absent when eta == 0
    std::optional<double> cooperativity_actual;    // g^2/(kappa Gamma); needs raw g and Gamma > 0
    std::optional<RatioCheck> spontaneous_emission;  // needs raw Omega, Delta
};

struct RegimeThresholds {
    double confinement = kDefaultConfinementThreshold;
    double timescale = kDefaultTimescaleFactor;
    double emission_margin = kDefaultEmissionMargin;
    double lamb_dicke = kDefaultLambDickeLimit;
};

/// Regime report from effective parameters only; raw-only fields are empty.
RegimeReport assess_regime(const EffectiveParams& p, const RegimeThresholds& t = {});
/// Full report including cooperativity and spontaneous-emission checks.
RegimeReport assess_regime(const RawParams& raw, const RegimeThresholds& t = {});

}  // namespace cavcool
