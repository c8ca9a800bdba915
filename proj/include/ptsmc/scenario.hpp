#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptsmc/analysis.hpp"
#include "ptsmc/plant.hpp"

namespace ptsmc {

struct AnalysisSettings {
    double epsilon = 1e-3;            ///< convergence ball radius (infinity norm)
    double chattering_window = 1.0;   ///< trailing window for the chattering index [s]
    double lyapunov_band = 1e-6;      ///< monotonicity is only required above this level
    double steady_window = 0.5;       ///< trailing window for mean u / residual z2 [s]
    double tracking_window = 2.0;     ///< trailing window for RMS(u + d) [s]

    void validate() const;
    bool operator==(const AnalysisSettings&) const = default;
};

/// Verdicts that decide the exit status of a run. Off unless configured.
struct CheckSettings {
    bool require_convergence = false;
    std::optional<LyapunovFunction> require_monotone;
    bool operator==(const CheckSettings&) const = default;
};

struct ScenarioConfig {
    std::string name = "custom";
    ControllerSpec controller{};
    DisturbanceModel disturbance{};
    SimConfig sim{};
    AnalysisSettings analysis{};
    CheckSettings checks{};
    std::vector<InitialCondition> sweep_grid;

    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

/// fig1 .. fig4: the four reference closed-loop experiments.
std::vector<std::string> preset_names();
std::optional<ScenarioConfig> find_preset(std::string_view name);

/// Parses the INI-style scenario format. Unknown sections or keys, duplicate
/// keys and malformed values raise ConfigError naming `source` and the line.
ScenarioConfig parse_scenario(std::string_view text, const std::string& source = "<string>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Writes a config that parse_scenario reads back to an equal ScenarioConfig.
std::string format_scenario(const ScenarioConfig& config);

/// The 9-cell symmetric grid: origin plus (+-0.5,0), (+-1,0), (+-1,-+1.5), (+-2,0).
std::vector<InitialCondition> default_sweep_grid();

std::string_view to_string(LyapunovFunction which);

struct RunSummary {
    std::string name;
    ConvergenceReport convergence;     ///< max(|x1|, |x2|)
    ConvergenceReport convergence_x1;  ///< |x1| alone
    ChatteringReport chattering;
    MonotonicityVerdict v1, v2, v3;
    bool v3_diagnostic = false;
    double max_abs_u = 0.0;
    std::size_t saturation_events = 0;
    std::size_t steps = 0;
    double mean_u_tail = 0.0;       ///< over steady_window
    double mean_d_tail = 0.0;
    double residual_z2 = 0.0;       ///< max |z2| over steady_window
    double tracking_rms = 0.0;      ///< RMS(u + d) over tracking_window
    double final_w = 0.0;
    bool checks_passed = true;
    std::vector<std::string> notes;
};

RunSummary summarize(const SimResult& result, const ScenarioConfig& config);

}  // namespace ptsmc
