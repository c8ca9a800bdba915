#include "ptsmc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptsmc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_state(const PlantState& s) {
    return std::isfinite(s.x1) && std::isfinite(s.x2) && std::isfinite(s.w) && std::isfinite(s.t);
}

std::string format_state(const PlantState& s) {
    std::ostringstream os;
    os.precision(17);
    os << "t=" << s.t << " x1=" << s.x1 << " x2=" << s.x2 << " w=" << s.w;
    return os.str();
}

}  // namespace

void validate(const DisturbanceModel& dist) {
    std::visit(overloaded{
                   [](const ZeroDisturbance&) {},
                   [](const ConstantDisturbance& c) {
                       if (!std::isfinite(c.value))
                           throw ConfigError("constant disturbance must be finite");
                   },
                   [](const SinusoidDisturbance& s) {
                       if (!(s.amplitude >= 0.0) || !std::isfinite(s.amplitude))
                           throw ConfigError("sinusoid amplitude must be nonnegative");
                       if (!std::isfinite(s.omega) || !std::isfinite(s.phase))
                           throw ConfigError("sinusoid frequency and phase must be finite");
                   },
                   [](const TabulatedDisturbance& tab) {
                       if (tab.knots.empty())
                           throw ConfigError("tabulated disturbance needs at least one knot");
                       for (std::size_t i = 0; i < tab.knots.size(); ++i) {
                           const auto& [t, v] = tab.knots[i];
                           if (!std::isfinite(t) || !std::isfinite(v))
                               throw ConfigError("tabulated disturbance knots must be finite");
                           if (i > 0 && !(t > tab.knots[i - 1].first))
                               throw ConfigError("tabulated disturbance times must be strictly increasing");
                       }
                   },
               },
               dist);
}

double disturbance_value(const DisturbanceModel& dist, double t) {
    return std::visit(
        overloaded{
            [](const ZeroDisturbance&) { return 0.0; },
            [](const ConstantDisturbance& c) { return c.value; },
            [t](const SinusoidDisturbance& s) { return s.amplitude * std::sin(s.omega * t + s.phase); },
            [t](const TabulatedDisturbance& tab) {
                const auto& k = tab.knots;
                if (k.empty() || t < k.front().first || t > k.back().first) {
                    std::ostringstream os;
                    os << "time " << t << " outside tabulated disturbance range";
                    if (!k.empty()) os << " [" << k.front().first << ", " << k.back().first << "]";
                    throw DomainError(os.str());
                }
                auto hi = std::upper_bound(k.begin(), k.end(), t,
                                           [](double x, const auto& knot) { return x < knot.first; });
                if (hi == k.end()) return k.back().second;
                auto lo = std::prev(hi);
                const double frac = (t - lo->first) / (hi->first - lo->first);
                return lo->second + frac * (hi->second - lo->second);
            },
        },
        dist);
}

bool is_time_invariant(const DisturbanceModel& dist) {
    return std::holds_alternative<ZeroDisturbance>(dist) ||
           std::holds_alternative<ConstantDisturbance>(dist);
}

std::string describe(const DisturbanceModel& dist) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ZeroDisturbance&) { os << "zero"; },
                   [&](const ConstantDisturbance& c) { os << "constant(" << c.value << ")"; },
                   [&](const SinusoidDisturbance& s) {
                       os << "sinusoid(amplitude=" << s.amplitude << ", omega=" << s.omega
                          << ", phase=" << s.phase << ")";
                   },
                   [&](const TabulatedDisturbance& tab) {
                       os << "tabulated(" << tab.knots.size() << " knots)";
                   },
               },
               dist);
    return os.str();
}

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!std::isfinite(t_end) || t_end < 0.0) throw ConfigError("t_end must be nonnegative");
    if (t_end > 0.0 && t_end < dt) throw ConfigError("t_end must be at least dt");
    if (record_stride < 1) throw ConfigError("record_stride must be at least 1");
    if (!std::isfinite(x1_0) || !std::isfinite(x2_0) || !std::isfinite(w_0))
        throw ConfigError("initial conditions must be finite");
}

std::size_t SimConfig::step_count() const {
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::fabs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest))
        return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(ratio));
}

OverflowError::OverflowError(const PlantState& last_finite, std::size_t step_index)
    : Error("state became non-finite at step " + std::to_string(step_index) +
            "; last finite state " + format_state(last_finite)),
      last_finite_(last_finite),
      step_index_(step_index) {}

PlantState step(const PlantState& state, const ControllerSpec& spec,
                const DisturbanceModel& dist, double dt, StepInfo* info) {
    const auto ctl = evaluate_control(state.x1, state.x2, ControllerState{state.w}, spec);
    const double d = disturbance_value(dist, state.t);
    if (info) *info = {ctl.out, d, ctl.w_dot};
    return {state.x1 + dt * state.x2, state.x2 + dt * (ctl.out.u + d), state.w + dt * ctl.w_dot,
            state.t + dt};
}

Sample make_sample(const PlantState& s, const StepInfo& info) {
    const double v1 = 0.5 * s.x1 * s.x1;
    const double v2 = v1 + 0.5 * info.control.z2 * info.control.z2;
    // w estimates -d: the integral law adds w to u and integrates -z2.
    const double mismatch = info.d + s.w;
    return {s.t, s.x1, s.x2, info.control.z2, info.control.u, info.d, s.w,
            v1, v2, v2 + 0.5 * mismatch * mismatch};
}

SimResult run(const SimConfig& config, const ControllerSpec& spec, const DisturbanceModel& dist) {
    config.validate();
    spec.validate();
    validate(dist);

    SimResult result;
    result.meta = {config, spec, dist, 0, 0, !is_time_invariant(dist)};

    const std::size_t n = config.step_count();
    result.samples.reserve(n / config.record_stride + 1);

    PlantState state{config.x1_0, config.x2_0, config.w_0, 0.0};
    StepInfo info;
    for (std::size_t k = 0;; ++k) {
        if (k == n) {
            // Final record needs the control at the last state without advancing.
            if (k % config.record_stride == 0) {
                const auto ctl = evaluate_control(state.x1, state.x2, ControllerState{state.w}, spec);
                info = {ctl.out, disturbance_value(dist, state.t), ctl.w_dot};
                if (ctl.out.saturated) ++result.meta.saturation_events;
                result.samples.push_back(make_sample(state, info));
            }
            break;
        }
        PlantState next = step(state, spec, dist, config.dt, &info);
        if (info.control.saturated) ++result.meta.saturation_events;
        if (k % config.record_stride == 0) result.samples.push_back(make_sample(state, info));
        next.t = static_cast<double>(k + 1) * config.dt;
        if (!finite_state(next)) throw OverflowError(state, k);
        state = next;
    }
    result.meta.steps = n;
    return result;
}

}  // namespace ptsmc
