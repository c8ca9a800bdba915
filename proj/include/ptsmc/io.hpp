#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ptsmc/analysis.hpp"
#include "ptsmc/scenario.hpp"

namespace ptsmc {

inline constexpr std::string_view kTrajectoryHeader = "t,x1,x2,z2,u,d,w,V1,V2,V3";
inline constexpr std::string_view kSweepHeader = "x1_0,x2_0,t_conv,converged,max_abs_u";
inline constexpr std::string_view kLemmaHeader = "alpha,a,analytic,numeric,rel_err";

/// Scientific notation with 17 significant digits; parses back to the same double.
std::string format_real(double v);

void write_trajectory_csv(std::ostream& os, const std::vector<Sample>& samples);
std::vector<Sample> read_trajectory_csv(std::istream& is);

void write_sweep_csv(std::ostream& os, const SweepTable& table);
void write_lemma_csv(std::ostream& os, const std::vector<LemmaRow>& rows);

std::string summary_json(const RunSummary& summary, const ScenarioConfig& config);
std::string sweep_summary_json(const SweepTable& table, const ScenarioConfig& config);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace ptsmc
