#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavcool/params.hpp"

namespace cavcool {

enum class AxisScale { linear, log };

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 2;
    AxisScale scale = AxisScale::linear;

    /// count >= 2 with min < max, or count == 1 with min == max (single point).
    /// Log axes need positive bounds.
    void validate() const;
    std::vector<double> values() const;
};

/// (delta_eff, nu) grid at fixed eta, g_eff, kappa. Row order: nu outer,
/// delta_eff inner.
struct SweepGrid {
    Axis delta_eff{"delta_eff", 0.05, 5.0, 41, AxisScale::log};
    Axis nu{"nu", 0.02, 1.0, 41, AxisScale::log};
    EffectiveParams fixed;  // delta_eff and nu are overwritten per cell
    bool include_numeric = false;

    void validate() const;
};

struct SweepRow {
    double delta_eff = 0.0;
    double nu = 0.0;
    double m_ss_closed = 0.0;
    double m_ss_first_order = 0.0;
    double gamma = 0.0;
    double m_ss_ratio = 0.0;     // m_ss_closed / m_ss_closed at delta_eff = nu
    double gamma_ratio = 0.0;    // gamma / gamma at delta_eff = nu
    double m_ss_numeric = 0.0;   // only with include_numeric
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int nan_cells = 0;
    std::vector<std::string> warnings;
};

/// Evaluates every cell. Singular cells become NaN and are counted.
SweepResult run_sweep(const SweepGrid& grid);

/// Columns delta_eff,nu,m_ss_closed,m_ss_first_order,gamma,m_ss_ratio,gamma_ratio
/// (+ m_ss_numeric), 17 significant digits.
void write_sweep_csv(std::ostream& out, const SweepResult& result, bool include_numeric);

/// Figure presets: parameters stated with the figures plus documented
/// defaults for the unstated ones.
enum class Preset { fig3, fig4, fig5, fig6, fig7 };
std::optional<Preset> parse_preset(std::string_view name);
std::string_view to_string(Preset p);

/// Contour presets fig3, fig6, fig7. Throws InvalidParameter for trajectory presets.
SweepGrid sweep_preset(Preset p);

struct TrajectoryPreset {
    EffectiveParams params;
    double m0 = 2500.0;
    bool delta_follows_nu = false;  // fig5: delta_eff = nu
};

/// Cooldown presets fig4 (delta_eff = kappa/2) and fig5 (delta_eff = nu),
/// eta = 0.1, g_eff = 5e-4, m0 = 2500, default nu = 0.05.
TrajectoryPreset trajectory_preset(Preset p);

/// The two phonon frequencies used for the cooldown presets.
inline constexpr double kPresetNuLow = 0.05;
inline constexpr double kPresetNuHigh = 0.2;

/// Metadata written next to every output file as `<file>.manifest.json`.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, double> parameters;
    std::map<std::string, std::string> settings;
    std::vector<std::string> arguments;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    int nan_cells = 0;
    std::string version;
    std::string timestamp;  // UTC, ISO 8601

    std::string to_json() const;
};

std::string tool_version();
std::string utc_timestamp();
std::filesystem::path manifest_path(const std::filesystem::path& output);
void write_manifest(const RunManifest& m, const std::filesystem::path& output);

}  // namespace cavcool
