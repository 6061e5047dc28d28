#include "cavcool/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "cavcool/analytic.hpp"
#include "cavcool/error.hpp"
#include "cavcool/moments.hpp"

#ifndef CAVCOOL_VERSION
#define CAVCOOL_VERSION "0.0.0"
#endif

namespace cavcool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double closed_m_ss(const EffectiveParams& p) { return stationary_closed_form(p).state.m(); }

}  // namespace

void Axis::validate() const {
    if (!std::isfinite(min) || !std::isfinite(max)) {
        throw InvalidParameter("axis " + name + ": bounds must be finite");
    }
    if (count == 1) {
        if (min != max) throw InvalidParameter("axis " + name + ": a single point needs min == max");
    } else if (count < 2) {
        throw InvalidParameter("axis " + name + ": count must be >= 2");
    } else if (!(min < max)) {
        throw InvalidParameter("axis " + name + ": min must be below max");
    }
    if (scale == AxisScale::log && !(min > 0.0)) {
        throw InvalidParameter("axis " + name + ": log scale needs positive bounds");
    }
}

std::vector<double> Axis::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = min;
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        v[i] = scale == AxisScale::log ? min * std::pow(max / min, f) : min + (max - min) * f;
    }
    v.back() = max;
    return v;
}

void SweepGrid::validate() const {
    delta_eff.validate();
    nu.validate();
    EffectiveParams p = fixed;
    p.nu = 1.0;
    p.validate();
    if (nu.min <= 0.0) throw InvalidParameter("nu axis must stay positive");
}

SweepResult run_sweep(const SweepGrid& grid) {
    grid.validate();
    SweepResult out;
    const auto nus = grid.nu.values();
    const auto deltas = grid.delta_eff.values();
    out.rows.reserve(nus.size() * deltas.size());

    for (double nu : nus) {
        EffectiveParams ref = grid.fixed;
        ref.nu = nu;
        ref.delta_eff = nu;
        double m_ref = kNaN;
        try {
            m_ref = closed_m_ss(ref);
        } catch (const SingularFormula&) {
        }
        const double g_ref = cooling_rate(ref).gamma;

        for (double d : deltas) {
            EffectiveParams p = grid.fixed;
            p.nu = nu;
            p.delta_eff = d;
            SweepRow row;
            row.delta_eff = d;
            row.nu = nu;
            bool bad = false;
            try {
                row.m_ss_closed = closed_m_ss(p);
            } catch (const SingularFormula&) {
                row.m_ss_closed = kNaN;
                bad = true;
            }
            try {
                row.m_ss_first_order = m_ss_first_order(p);
            } catch (const SingularFormula&) {
                row.m_ss_first_order = kNaN;
                bad = true;
            }
            row.gamma = cooling_rate(p).gamma;
            row.m_ss_ratio = row.m_ss_closed / m_ref;
            row.gamma_ratio = g_ref != 0.0 ? row.gamma / g_ref : kNaN;
            if (grid.include_numeric) {
                try {
                    row.m_ss_numeric = stationary_numeric(build_drift(p)).state.m();
                } catch (const SingularSystem&) {
                    row.m_ss_numeric = kNaN;
                    bad = true;
                }
            }
            if (bad || std::isnan(row.m_ss_ratio) || std::isnan(row.gamma_ratio)) {
                ++out.nan_cells;
                char buf[96];
                std::snprintf(buf, sizeof buf, "singular cell at delta_eff=%.6g nu=%.6g", d, nu);
                out.warnings.emplace_back(buf);
            }
            out.rows.push_back(row);
        }
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, bool include_numeric) {
    out << "delta_eff,nu,m_ss_closed,m_ss_first_order,gamma,m_ss_ratio,gamma_ratio";
    if (include_numeric) out << ",m_ss_numeric";
    out << '\n';
    char buf[32];
    auto put = [&](double v, bool comma) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (comma) out << ',';
        out << buf;
    };
    for (const auto& r : result.rows) {
        put(r.delta_eff, false);
        put(r.nu, true);
        put(r.m_ss_closed, true);
        put(r.m_ss_first_order, true);
        put(r.gamma, true);
        put(r.m_ss_ratio, true);
        put(r.gamma_ratio, true);
        if (include_numeric) put(r.m_ss_numeric, true);
        out << '\n';
    }
}

std::optional<Preset> parse_preset(std::string_view name) {
    if (name == "fig3") return Preset::fig3;
    if (name == "fig4") return Preset::fig4;
    if (name == "fig5") return Preset::fig5;
    if (name == "fig6") return Preset::fig6;
    if (name == "fig7") return Preset::fig7;
    return std::nullopt;
}

std::string_view to_string(Preset p) {
    switch (p) {
        case Preset::fig3: return "fig3";
        case Preset::fig4: return "fig4";
        case Preset::fig5: return "fig5";
        case Preset::fig6: return "fig6";
        case Preset::fig7: return "fig7";
    }
    return "?";
}

SweepGrid sweep_preset(Preset p) {
    SweepGrid g;
    g.fixed.eta = 0.1;
    g.fixed.g_eff = 1e-4;
    g.fixed.kappa = 1.0;
    switch (p) {
        case Preset::fig3:
            g.nu = {"nu", 0.02, 1.0, 41, AxisScale::log};
            g.delta_eff = {"delta_eff", 0.05, 5.0, 81, AxisScale::log};
            return g;
        case Preset::fig6:
        case Preset::fig7:
            // Quarter-octave grids; both hit nu = 0.05 and delta_eff = 0.5 exactly.
            g.nu = {"nu", 0.0125, 0.8, 25, AxisScale::log};
            g.delta_eff = {"delta_eff", 1.0 / 64.0, 2.0, 29, AxisScale::log};
            return g;
        default:
            throw InvalidParameter(std::string("preset ") + std::string(to_string(p)) +
                                   " is a trajectory preset");
    }
}

TrajectoryPreset trajectory_preset(Preset p) {
    if (p != Preset::fig4 && p != Preset::fig5) {
        throw InvalidParameter(std::string("preset ") + std::string(to_string(p)) +
                               " is a sweep preset");
    }
    TrajectoryPreset t;
    t.params.eta = 0.1;
    t.params.g_eff = 5e-4;
    t.params.kappa = 1.0;
    t.params.nu = kPresetNuLow;
    t.delta_follows_nu = p == Preset::fig5;
    t.params.delta_eff = t.delta_follows_nu ? t.params.nu : 0.5 * t.params.kappa;
    t.m0 = 2500.0;
    return t;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["arguments"] = arguments;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters) {
        if (std::isfinite(v)) {
            params[k] = v;
        } else {
            params[k] = nullptr;
        }
    }
    j["parameters"] = params;
    j["settings"] = settings;
    j["outputs"] = outputs;
    j["nan_cells"] = nan_cells;
    j["warnings"] = warnings;
    return j.dump(2);
}

std::string tool_version() { return CAVCOOL_VERSION; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
    return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const RunManifest& m, const std::filesystem::path& output) {
    const auto path = manifest_path(output);
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write manifest " + path.string());
    f << m.to_json() << '\n';
}

}  // namespace cavcool
