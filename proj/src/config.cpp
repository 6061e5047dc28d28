#include "cavcool/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "cavcool/error.hpp"

namespace cavcool {

namespace {

const std::set<std::string> kKeys = {"omega", "g",  "delta_cap", "delta", "kappa",
                                     "gamma_cap", "nu", "eta",     "g_eff", "delta_eff"};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

const std::map<std::string, double>& ParamSet::defaults() {
    // Figure 3 working point in units of kappa.
    static const std::map<std::string, double> d = {
        {"kappa", 1.0}, {"gamma_cap", 0.0}, {"nu", 0.05},
        {"eta", 0.1},   {"g_eff", 1e-4},    {"delta_eff", 0.5},
    };
    return d;
}

bool ParamSet::is_known_key(const std::string& key) { return kKeys.count(key) != 0; }

void ParamSet::set(const std::string& key, double value) {
    if (!is_known_key(key)) throw ConfigError("unknown parameter key '" + key + "'");
    values_[key] = value;
}

std::optional<double> ParamSet::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

ParamSet ParamSet::merged_with(const ParamSet& over) const {
    ParamSet out = *this;
    for (const auto& [k, v] : over.values_) out.values_[k] = v;
    return out;
}

bool ParamSet::has_raw_coupling() const {
    return has("omega") || has("g") || has("delta_cap");
}

void ParamSet::check_conflicts() const {
    if (has("g_eff") && (has("omega") || has("g"))) {
        throw ConfigError("g_eff given together with raw omega/g: g_eff is derived from them");
    }
    if (has("delta_eff") && has("delta")) {
        throw ConfigError("delta_eff given together with raw delta: delta_eff is derived from it");
    }
}

RawParams ParamSet::to_raw() const {
    check_conflicts();
    for (const char* key : {"omega", "g", "delta_cap", "delta"}) {
        if (!has(key)) throw ConfigError(std::string("raw parameter set is missing '") + key + "'");
    }
    const auto& d = defaults();
    auto value = [&](const std::string& k) { return get(k).value_or(d.at(k)); };
    RawParams raw;
    raw.rabi_frequency = *get("omega");
    raw.cavity_coupling = *get("g");
    raw.atom_detuning = *get("delta_cap");
    raw.cavity_laser_detuning = *get("delta");
    raw.cavity_decay = value("kappa");
    raw.atomic_decay = value("gamma_cap");
    raw.phonon_frequency = value("nu");
    raw.lamb_dicke = value("eta");
    return raw;
}

EffectiveParams ParamSet::to_effective() const {
    check_conflicts();
    const auto& d = defaults();
    auto value = [&](const std::string& k) { return get(k).value_or(d.at(k)); };

    EffectiveParams p;
    p.kappa = value("kappa");
    p.nu = value("nu");
    p.eta = value("eta");
    p.gamma = value("gamma_cap");

    const bool raw_g = has("omega") || has("g");
    if (raw_g) {
        if (!has("omega") || !has("g") || !has("delta_cap")) {
            throw ConfigError("deriving g_eff needs omega, g and delta_cap");
        }
        if (*get("delta_cap") == 0.0) throw ConfigError("delta_cap must be nonzero");
        p.g_eff = -*get("g") * *get("omega") / (2.0 * *get("delta_cap"));
    } else {
        p.g_eff = value("g_eff");
    }

    if (has("delta")) {
        if (!has("g") || !has("delta_cap")) {
            throw ConfigError("deriving delta_eff from delta needs g and delta_cap");
        }
        if (*get("delta_cap") == 0.0) throw ConfigError("delta_cap must be nonzero");
        const double g = *get("g");
        p.delta_eff = *get("delta") - g * g / *get("delta_cap");
    } else {
        p.delta_eff = value("delta_eff");
    }
    p.validate();
    return p;
}

ParamSet parse_config(std::istream& in, const std::string& origin) {
    ParamSet out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string text = trim(line.substr(eq + 1));
        if (!ParamSet::is_known_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (out.has(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
            throw ConfigError(where + ": '" + text + "' is not a number");
        }
        out.set(key, v);
    }
    out.check_conflicts();
    return out;
}

ParamSet load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

}  // namespace cavcool
