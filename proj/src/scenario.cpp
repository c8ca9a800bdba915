#include "ptsmc/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ptsmc/io.hpp"

namespace ptsmc {

void AnalysisSettings::validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("analysis epsilon must be positive");
    if (!(chattering_window > 0.0)) throw ConfigError("chattering_window must be positive");
    if (!(lyapunov_band >= 0.0)) throw ConfigError("lyapunov_band must be nonnegative");
    if (!(steady_window > 0.0)) throw ConfigError("steady_window must be positive");
    if (!(tracking_window > 0.0)) throw ConfigError("tracking_window must be positive");
}

void ScenarioConfig::validate() const {
    controller.validate();
    ptsmc::validate(disturbance);
    sim.validate();
    analysis.validate();
    for (const auto& ic : sweep_grid)
        if (!std::isfinite(ic.x1) || !std::isfinite(ic.x2))
            throw ConfigError("sweep initial conditions must be finite");
}

std::string_view to_string(LyapunovFunction which) {
    switch (which) {
        case LyapunovFunction::V1: return "V1";
        case LyapunovFunction::V2: return "V2";
        case LyapunovFunction::V3: return "V3";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Presets

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4"}; }

std::optional<ScenarioConfig> find_preset(std::string_view name) {
    ScenarioConfig c;
    c.name = std::string(name);
    c.controller.K1 = 1.0;
    c.controller.K2 = 20.0;
    c.controller.beta = 2.0;
    c.controller.gamma = 1.5;
    c.sim = SimConfig{5e-5, 5.0, 1.0, -1.5, 0.0, 20};
    c.analysis.epsilon = 1e-2;

    if (name == "fig1") {
        c.controller.law = ControlLaw::nominal;
        c.controller.surrogate = SignSurrogate::exact_sign();
        c.disturbance = ZeroDisturbance{};
    } else if (name == "fig2") {
        c.controller.law = ControlLaw::nominal;
        c.controller.surrogate = SignSurrogate::smooth(50.0);
        c.disturbance = ZeroDisturbance{};
    } else if (name == "fig3") {
        c.controller.law = ControlLaw::integral;
        c.controller.surrogate = SignSurrogate::smooth(50.0);
        c.disturbance = ConstantDisturbance{10.0};
    } else if (name == "fig4") {
        c.controller.law = ControlLaw::robust_sign;
        c.controller.gamma = 0.0;
        c.controller.D_max = 1.0;
        c.controller.surrogate = SignSurrogate::smooth(50.0);
        c.disturbance = SinusoidDisturbance{1.0, 1.0, 0.0};
    } else {
        return std::nullopt;
    }
    return c;
}

std::vector<InitialCondition> default_sweep_grid() {
    return {{0.0, 0.0},  {0.5, 0.0}, {-0.5, 0.0}, {1.0, 0.0}, {-1.0, 0.0},
            {1.0, -1.5}, {-1.0, 1.5}, {2.0, 0.0}, {-2.0, 0.0}};
}

// ---------------------------------------------------------------------------
// Parser

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line;
};

class Parser {
public:
    explicit Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
    }

    double real(const Entry& e, const std::string& key) const {
        const auto text = trim(e.value);
        double v = 0.0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end || text.empty())
            fail(e.line, "field '" + key + "': expected a number, got '" + std::string(text) + "'");
        return v;
    }

    std::size_t count(const Entry& e, const std::string& key) const {
        const auto text = trim(e.value);
        std::size_t v = 0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc() || ptr != end || text.empty())
            fail(e.line, "field '" + key + "': expected a positive integer, got '" +
                             std::string(text) + "'");
        return v;
    }

    bool boolean(const Entry& e, const std::string& key) const {
        const auto text = trim(e.value);
        if (text == "true" || text == "yes" || text == "1") return true;
        if (text == "false" || text == "no" || text == "0") return false;
        fail(e.line, "field '" + key + "': expected true or false");
    }

    std::pair<double, double> pair(const Entry& e, const std::string& key, char sep) const {
        const auto text = trim(e.value);
        const auto pos = text.find(sep);
        if (pos == std::string_view::npos)
            fail(e.line, "field '" + key + "': expected two numbers separated by '" +
                             std::string(1, sep) + "'");
        Entry a{std::string(text.substr(0, pos)), e.line};
        Entry b{std::string(text.substr(pos + 1)), e.line};
        return {real(a, key), real(b, key)};
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"scenario", {"name", "base"}},
        {"controller",
         {"law", "K1", "K2", "beta", "gamma", "k_tsm", "D_max", "surrogate", "tanh_gain",
          "zero_band", "exp_cap"}},
        {"disturbance", {"kind", "value", "amplitude", "omega", "phase", "knots"}},
        {"sim", {"dt", "t_end", "x1_0", "x2_0", "w_0", "record_stride"}},
        {"analysis",
         {"epsilon", "chattering_window", "lyapunov_band", "steady_window", "tracking_window"}},
        {"checks", {"require_convergence", "require_monotone"}},
        {"sweep", {"ic"}},
    };
    return keys;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text, const std::string& source) {
    Parser p(source);
    std::map<std::string, Section> sections;
    std::vector<Entry> sweep_ics;

    std::string current;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        auto line = trim(raw);
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') p.fail(line_no, "unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_keys().contains(current)) p.fail(line_no, "unknown section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) p.fail(line_no, "expected 'key = value'");
        if (current.empty()) p.fail(line_no, "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!known_keys().at(current).contains(key))
            p.fail(line_no, "unknown key '" + key + "' in section [" + current + "]");
        if (current == "sweep") {
            sweep_ics.push_back({value, line_no});
            continue;
        }
        auto [it, inserted] = sections[current].try_emplace(key, Entry{value, line_no});
        if (!inserted)
            p.fail(line_no, "duplicate key '" + key + "' (first set on line " +
                                std::to_string(it->second.line) + ")");
    }

    auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
        auto s = sections.find(sec);
        if (s == sections.end()) return nullptr;
        auto e = s->second.find(key);
        return e == s->second.end() ? nullptr : &e->second;
    };

    ScenarioConfig c;
    if (const auto* base = get("scenario", "base")) {
        auto preset = find_preset(trim(base->value));
        if (!preset) p.fail(base->line, "unknown base preset '" + base->value + "'");
        c = *preset;
    }
    if (const auto* e = get("scenario", "name")) c.name = e->value;

    auto set_real = [&](const std::string& sec, const std::string& key, double& field) {
        if (const auto* e = get(sec, key)) field = p.real(*e, key);
    };

    // controller
    auto& ctl = c.controller;
    if (const auto* e = get("controller", "law")) {
        try {
            ctl.law = parse_control_law(e->value);
        } catch (const ConfigError& err) {
            p.fail(e->line, err.what());
        }
    }
    set_real("controller", "K1", ctl.K1);
    set_real("controller", "K2", ctl.K2);
    set_real("controller", "beta", ctl.beta);
    set_real("controller", "gamma", ctl.gamma);
    set_real("controller", "k_tsm", ctl.k_tsm);
    set_real("controller", "D_max", ctl.D_max);
    set_real("controller", "zero_band", ctl.guards.zero_band);
    set_real("controller", "exp_cap", ctl.guards.exp_cap);
    if (const auto* e = get("controller", "surrogate")) {
        if (e->value == "exact") ctl.surrogate.kind = SignSurrogate::Kind::exact;
        else if (e->value == "tanh") ctl.surrogate.kind = SignSurrogate::Kind::tanh;
        else p.fail(e->line, "field 'surrogate': expected exact or tanh");
    }
    set_real("controller", "tanh_gain", ctl.surrogate.gain);

    // disturbance
    if (const auto* kind = get("disturbance", "kind")) {
        std::set<std::string> allowed;
        if (kind->value == "zero") {
            c.disturbance = ZeroDisturbance{};
        } else if (kind->value == "constant") {
            ConstantDisturbance d;
            set_real("disturbance", "value", d.value);
            c.disturbance = d;
            allowed = {"value"};
        } else if (kind->value == "sinusoid") {
            SinusoidDisturbance d;
            set_real("disturbance", "amplitude", d.amplitude);
            set_real("disturbance", "omega", d.omega);
            set_real("disturbance", "phase", d.phase);
            c.disturbance = d;
            allowed = {"amplitude", "omega", "phase"};
        } else if (kind->value == "tabulated") {
            TabulatedDisturbance d;
            const auto* knots = get("disturbance", "knots");
            if (!knots) p.fail(kind->line, "tabulated disturbance requires 'knots'");
            std::string_view rest = knots->value;
            while (!trim(rest).empty()) {
                const auto comma = rest.find(',');
                Entry item{std::string(rest.substr(0, comma)), knots->line};
                d.knots.push_back(p.pair(item, "knots", ':'));
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
            c.disturbance = d;
            allowed = {"knots"};
        } else {
            p.fail(kind->line, "field 'kind': expected zero, constant, sinusoid or tabulated");
        }
        for (const auto& [key, entry] : sections["disturbance"])
            if (key != "kind" && !allowed.contains(key))
                p.fail(entry.line, "key '" + key + "' does not apply to disturbance kind " + kind->value);
    } else if (sections.contains("disturbance") && !sections["disturbance"].empty()) {
        p.fail(sections["disturbance"].begin()->second.line, "disturbance section requires 'kind'");
    }

    // sim
    set_real("sim", "dt", c.sim.dt);
    set_real("sim", "t_end", c.sim.t_end);
    set_real("sim", "x1_0", c.sim.x1_0);
    set_real("sim", "x2_0", c.sim.x2_0);
    set_real("sim", "w_0", c.sim.w_0);
    if (const auto* e = get("sim", "record_stride")) c.sim.record_stride = p.count(*e, "record_stride");

    // analysis
    set_real("analysis", "epsilon", c.analysis.epsilon);
    set_real("analysis", "chattering_window", c.analysis.chattering_window);
    set_real("analysis", "lyapunov_band", c.analysis.lyapunov_band);
    set_real("analysis", "steady_window", c.analysis.steady_window);
    set_real("analysis", "tracking_window", c.analysis.tracking_window);

    // checks
    if (const auto* e = get("checks", "require_convergence"))
        c.checks.require_convergence = p.boolean(*e, "require_convergence");
    if (const auto* e = get("checks", "require_monotone")) {
        if (e->value == "none") c.checks.require_monotone.reset();
        else if (e->value == "V1") c.checks.require_monotone = LyapunovFunction::V1;
        else if (e->value == "V2") c.checks.require_monotone = LyapunovFunction::V2;
        else if (e->value == "V3") c.checks.require_monotone = LyapunovFunction::V3;
        else p.fail(e->line, "field 'require_monotone': expected none, V1, V2 or V3");
    }

    // sweep
    for (const auto& e : sweep_ics) {
        const auto [x1, x2] = p.pair(e, "ic", ',');
        c.sweep_grid.push_back({x1, x2});
    }

    try {
        c.validate();
    } catch (const ConfigError& err) {
        throw ConfigError(source + ": " + err.what());
    }
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string format_scenario(const ScenarioConfig& c) {
    std::ostringstream os;
    const auto r = [](double v) { return format_real(v); };
    os << "[scenario]\nname = " << c.name << "\n\n";

    const auto& k = c.controller;
    os << "[controller]\nlaw = " << to_string(k.law) << "\nK1 = " << r(k.K1) << "\nK2 = " << r(k.K2)
       << "\nbeta = " << r(k.beta) << "\ngamma = " << r(k.gamma) << "\nk_tsm = " << r(k.k_tsm)
       << "\nD_max = " << r(k.D_max) << "\nsurrogate = "
       << (k.surrogate.kind == SignSurrogate::Kind::tanh ? "tanh" : "exact")
       << "\ntanh_gain = " << r(k.surrogate.gain) << "\nzero_band = " << r(k.guards.zero_band)
       << "\nexp_cap = " << r(k.guards.exp_cap) << "\n\n";

    os << "[disturbance]\n";
    if (std::holds_alternative<ZeroDisturbance>(c.disturbance)) {
        os << "kind = zero\n";
    } else if (const auto* d = std::get_if<ConstantDisturbance>(&c.disturbance)) {
        os << "kind = constant\nvalue = " << r(d->value) << "\n";
    } else if (const auto* s = std::get_if<SinusoidDisturbance>(&c.disturbance)) {
        os << "kind = sinusoid\namplitude = " << r(s->amplitude) << "\nomega = " << r(s->omega)
           << "\nphase = " << r(s->phase) << "\n";
    } else if (const auto* t = std::get_if<TabulatedDisturbance>(&c.disturbance)) {
        os << "kind = tabulated\nknots = ";
        for (std::size_t i = 0; i < t->knots.size(); ++i)
            os << (i ? ", " : "") << r(t->knots[i].first) << ":" << r(t->knots[i].second);
        os << "\n";
    }

    const auto& s = c.sim;
    os << "\n[sim]\ndt = " << r(s.dt) << "\nt_end = " << r(s.t_end) << "\nx1_0 = " << r(s.x1_0)
       << "\nx2_0 = " << r(s.x2_0) << "\nw_0 = " << r(s.w_0) << "\nrecord_stride = " << s.record_stride
       << "\n\n";

    const auto& a = c.analysis;
    os << "[analysis]\nepsilon = " << r(a.epsilon) << "\nchattering_window = " << r(a.chattering_window)
       << "\nlyapunov_band = " << r(a.lyapunov_band) << "\nsteady_window = " << r(a.steady_window)
       << "\ntracking_window = " << r(a.tracking_window) << "\n\n";

    os << "[checks]\nrequire_convergence = " << (c.checks.require_convergence ? "true" : "false")
       << "\nrequire_monotone = "
       << (c.checks.require_monotone ? to_string(*c.checks.require_monotone) : "none") << "\n";

    if (!c.sweep_grid.empty()) {
        os << "\n[sweep]\n";
        for (const auto& ic : c.sweep_grid) os << "ic = " << r(ic.x1) << ", " << r(ic.x2) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Summary

RunSummary summarize(const SimResult& result, const ScenarioConfig& config) {
    const auto& a = config.analysis;
    const std::span<const Sample> samples(result.samples);

    RunSummary s;
    s.name = config.name;
    s.convergence = convergence_time(samples, a.epsilon);
    s.convergence_x1 = convergence_time(samples, a.epsilon, StateNorm::x1_only);
    s.chattering = chattering_index(samples, a.chattering_window);
    s.v1 = lyapunov_monotonicity(result, LyapunovFunction::V1, a.lyapunov_band);
    s.v2 = lyapunov_monotonicity(result, LyapunovFunction::V2, a.lyapunov_band);
    s.v3 = lyapunov_monotonicity(result, LyapunovFunction::V3, a.lyapunov_band);
    s.v3_diagnostic = result.meta.v3_diagnostic;
    s.max_abs_u = max_abs_u(samples);
    s.saturation_events = result.meta.saturation_events;
    s.steps = result.meta.steps;
    if (samples.empty()) return s;

    const double t_last = samples.back().t;
    std::size_t steady_n = 0;
    std::size_t track_n = 0;
    double track_sq = 0.0;
    for (const auto& x : samples) {
        if (x.t >= t_last - a.steady_window - 1e-12) {
            s.mean_u_tail += x.u;
            s.mean_d_tail += x.d;
            s.residual_z2 = std::max(s.residual_z2, std::fabs(x.z2));
            ++steady_n;
        }
        if (x.t >= t_last - a.tracking_window - 1e-12) {
            track_sq += (x.u + x.d) * (x.u + x.d);
            ++track_n;
        }
    }
    s.mean_u_tail /= static_cast<double>(steady_n);
    s.mean_d_tail /= static_cast<double>(steady_n);
    s.tracking_rms = std::sqrt(track_sq / static_cast<double>(track_n));
    s.final_w = samples.back().w;

    std::ostringstream note;
    note.precision(6);
    if (s.residual_z2 > 1e-8) {
        note << "z2 has a nonzero residual: max |z2| = " << s.residual_z2 << " over the last "
             << a.steady_window << " s";
        s.notes.push_back(note.str());
        note.str("");
    }
    if (!s.convergence.t_conv && s.convergence_x1.t_conv) {
        note << "x1 settles in the epsilon band at t = " << *s.convergence_x1.t_conv
             << " s but x2 keeps oscillating outside it";
        s.notes.push_back(note.str());
        note.str("");
    }
    if (s.v3_diagnostic)
        s.notes.push_back("V3 assumes a constant disturbance; recorded for inspection only");
    if (s.saturation_events > 0) {
        note << s.saturation_events << " control evaluations hit the exponent cap";
        s.notes.push_back(note.str());
    }

    if (config.checks.require_convergence && !s.convergence.t_conv) s.checks_passed = false;
    if (const auto which = config.checks.require_monotone) {
        const auto& v = *which == LyapunovFunction::V1 ? s.v1 : *which == LyapunovFunction::V2 ? s.v2 : s.v3;
        if (!v.pass) s.checks_passed = false;
    }
    return s;
}

}  // namespace ptsmc
