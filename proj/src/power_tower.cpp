#include "ptsmc/power_tower.hpp"

#include <cmath>
#include <string>

#include "ptsmc/error.hpp"

namespace ptsmc {

namespace {

// exp(arg) with arg clamped to cap. NaN passes through untouched.
GuardedValue capped_exp(double arg, double cap) {
    if (arg > cap) return {std::exp(cap), true};
    return {std::exp(arg), false};
}

}  // namespace

void SignSurrogate::validate() const {
    if (kind == Kind::tanh && !(gain > 0.0 && std::isfinite(gain)))
        throw ConfigError("tanh surrogate gain must be positive and finite, got " +
                          std::to_string(gain));
}

void EvalGuards::validate() const {
    if (!(zero_band > 0.0 && zero_band < 1.0))
        throw ConfigError("zero_band must lie in (0, 1)");
    if (!(exp_cap > 0.0 && exp_cap <= 709.0))
        throw ConfigError("exp_cap must lie in (0, 709]");
}

double sign_surrogate(double a, const SignSurrogate& s) {
    if (s.kind == SignSurrogate::Kind::tanh) return std::tanh(s.gain * a);
    return static_cast<double>((a > 0.0) - (a < 0.0));
}

GuardedValue pt_value_guarded(double a, const PowerTowerParams& p, const EvalGuards& g) {
    if (a == 0.0) return {0.0, false};
    const double mag = std::fabs(a);
    const double log_mag = std::log(mag);
    // |a|^0 == 1 keeps alpha = 0 on the signed-identity branch.
    const auto m = capped_exp(std::pow(mag, p.alpha) * log_mag, g.exp_cap);
    return {m.value * sign_surrogate(a, p.surrogate), m.saturated};
}

double pt_value(double a, const PowerTowerParams& p, const EvalGuards& g) {
    return pt_value_guarded(a, p, g).value;
}

GuardedValue pt_derivative_factor_guarded(double a, const PowerTowerParams& p,
                                          const EvalGuards& g) {
    const double mag = std::fabs(a);
    if (mag < g.zero_band) {
        if (p.alpha > 1.0) return {0.0, false};
        throw SingularityError("power tower derivative factor is unbounded near a = 0 for alpha = " +
                               std::to_string(p.alpha) + " (requires alpha > 1)");
    }
    const double log_mag = std::log(mag);
    const auto m = capped_exp((std::pow(mag, p.alpha) + p.alpha - 1.0) * log_mag, g.exp_cap);
    return {m.value * (1.0 + p.alpha * log_mag), m.saturated};
}

double pt_derivative_factor(double a, const PowerTowerParams& p, const EvalGuards& g) {
    return pt_derivative_factor_guarded(a, p, g).value;
}

}  // namespace ptsmc
