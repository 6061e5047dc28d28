#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "cavcool/params.hpp"

namespace cavcool {

/// A partially specified parameter set, as read from a config file or flags.
///
/// Keys: omega, g, delta_cap, delta, kappa, gamma_cap, nu, eta, g_eff,
/// delta_eff. Either the raw couplings (omega, g, delta_cap) or g_eff may
/// fix the effective coupling, and either delta (with g and delta_cap) or
/// delta_eff may fix the effective detuning. Supplying both routes for the
/// same derived quantity is a ConfigError.
class ParamSet {
public:
    static const std::map<std::string, double>& defaults();
    static bool is_known_key(const std::string& key);

    void set(const std::string& key, double value);
    std::optional<double> get(const std::string& key) const;
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, double>& values() const { return values_; }

    /// Values in `over` replace values here.
    ParamSet merged_with(const ParamSet& over) const;

    /// Throws ConfigError when raw and effective routes collide.
    void check_conflicts() const;

    bool has_raw_coupling() const;
    /// Raw set (requires omega, g, delta_cap, delta); missing rates take defaults.
    RawParams to_raw() const;
    /// Effective set; unspecified effective keys take defaults.
    EffectiveParams to_effective() const;

private:
    std::map<std::string, double> values_;
};

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError.
ParamSet parse_config(std::istream& in, const std::string& origin = "<config>");
ParamSet load_config(const std::filesystem::path& path);

}  // namespace cavcool
