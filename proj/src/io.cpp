#include "ptsmc/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace ptsmc {

std::string format_real(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::scientific, 16);
    return std::string(buf.data(), res.ptr);
}

namespace {

double parse_field(std::string_view text, std::size_t line) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("trajectory CSV line " + std::to_string(line) + ": bad number '" +
                          std::string(text) + "'");
    return v;
}

nlohmann::json optional_time(const std::optional<double>& t) {
    return t ? nlohmann::json(*t) : nlohmann::json(nullptr);
}

nlohmann::json to_json(const ConvergenceReport& r) {
    return {{"t_conv", optional_time(r.t_conv)},
            {"first_entry", optional_time(r.first_entry)},
            {"epsilon", r.band},
            {"stayed", r.stayed},
            {"final_state", {{"x1", r.final_x1}, {"x2", r.final_x2}, {"w", r.final_w}}}};
}

nlohmann::json to_json(const MonotonicityVerdict& v) {
    nlohmann::json j{{"pass", v.pass}};
    if (v.first_violation) {
        j["first_violation_index"] = *v.first_violation;
        j["first_violation_time"] = optional_time(v.violation_time);
        j["increase"] = v.violation_increase;
    }
    return j;
}

nlohmann::json spec_json(const ScenarioConfig& c) {
    const auto& k = c.controller;
    return {{"law", std::string(to_string(k.law))},
            {"K1", k.K1},
            {"K2", k.K2},
            {"beta", k.beta},
            {"gamma", k.gamma},
            {"k_tsm", k.k_tsm},
            {"D_max", k.D_max},
            {"surrogate", k.surrogate.kind == SignSurrogate::Kind::tanh ? "tanh" : "exact"},
            {"tanh_gain", k.surrogate.gain},
            {"disturbance", describe(c.disturbance)},
            {"dt", c.sim.dt},
            {"t_end", c.sim.t_end},
            {"x1_0", c.sim.x1_0},
            {"x2_0", c.sim.x2_0},
            {"w_0", c.sim.w_0},
            {"record_stride", c.sim.record_stride}};
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const std::vector<Sample>& samples) {
    os << kTrajectoryHeader << '\n';
    for (const auto& s : samples) {
        os << format_real(s.t) << ',' << format_real(s.x1) << ',' << format_real(s.x2) << ','
           << format_real(s.z2) << ',' << format_real(s.u) << ',' << format_real(s.d) << ','
           << format_real(s.w) << ',' << format_real(s.V1) << ',' << format_real(s.V2) << ','
           << format_real(s.V3) << '\n';
    }
}

std::vector<Sample> read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTrajectoryHeader)
        throw ConfigError("trajectory CSV: missing or unexpected header");
    std::vector<Sample> out;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::array<double, 10> f{};
        std::size_t field = 0;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            if (field == f.size())
                throw ConfigError("trajectory CSV line " + std::to_string(line_no) + ": too many fields");
            f[field++] = parse_field(rest.substr(0, comma), line_no);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (field != f.size())
            throw ConfigError("trajectory CSV line " + std::to_string(line_no) + ": expected 10 fields");
        out.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[9]});
    }
    return out;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
    os << kSweepHeader << '\n';
    for (const auto& cell : table.cells) {
        os << format_real(cell.ic.x1) << ',' << format_real(cell.ic.x2) << ',';
        if (!cell.report) os << "overflow,0,";
        else if (!cell.report->t_conv) os << "none,0,";
        else os << format_real(*cell.report->t_conv) << ",1,";
        os << format_real(cell.max_abs_u) << '\n';
    }
}

void write_lemma_csv(std::ostream& os, const std::vector<LemmaRow>& rows) {
    os << kLemmaHeader << '\n';
    for (const auto& r : rows)
        os << format_real(r.alpha) << ',' << format_real(r.a) << ',' << format_real(r.analytic) << ','
           << format_real(r.numeric) << ',' << format_real(r.rel_err) << '\n';
}

std::string summary_json(const RunSummary& s, const ScenarioConfig& config) {
    nlohmann::json j{
        {"scenario", s.name},
        {"spec", spec_json(config)},
        {"steps", s.steps},
        {"saturation_events", s.saturation_events},
        {"convergence", to_json(s.convergence)},
        {"convergence_x1", to_json(s.convergence_x1)},
        {"chattering",
         {{"window", s.chattering.window},
          {"sign_flips", s.chattering.sign_flips},
          {"sign_flips_per_second", s.chattering.sign_flips_per_second},
          {"u_total_variation", s.chattering.u_total_variation}}},
        {"lyapunov",
         {{"band", config.analysis.lyapunov_band},
          {"V1", to_json(s.v1)},
          {"V2", to_json(s.v2)},
          {"V3", to_json(s.v3)},
          {"V3_diagnostic_only", s.v3_diagnostic}}},
        {"max_abs_u", s.max_abs_u},
        {"steady_state",
         {{"window", config.analysis.steady_window},
          {"mean_u", s.mean_u_tail},
          {"mean_d", s.mean_d_tail},
          {"residual_z2", s.residual_z2},
          {"final_w", s.final_w}}},
        {"tracking", {{"window", config.analysis.tracking_window}, {"rms_u_plus_d", s.tracking_rms}}},
        {"checks_passed", s.checks_passed},
        {"notes", s.notes},
    };
    return j.dump(2) + "\n";
}

std::string sweep_summary_json(const SweepTable& table, const ScenarioConfig& config) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : table.cells) {
        nlohmann::json cell{{"x1_0", c.ic.x1}, {"x2_0", c.ic.x2}, {"max_abs_u", c.max_abs_u}};
        if (c.report) cell["convergence"] = to_json(*c.report);
        if (!c.error.empty()) cell["error"] = c.error;
        cells.push_back(std::move(cell));
    }
    nlohmann::json j{{"scenario", config.name},
                     {"spec", spec_json(config)},
                     {"epsilon", config.analysis.epsilon},
                     {"all_converged", table.all_converged},
                     {"max_t_conv", optional_time(table.max_t_conv)},
                     {"cells", cells}};
    return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at '" + path.string() + "'");
    }
}

}  // namespace ptsmc
