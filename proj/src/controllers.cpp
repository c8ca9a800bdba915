#include "ptsmc/controllers.hpp"

#include <cmath>
#include <string>

#include "ptsmc/error.hpp"

namespace ptsmc {

std::string_view to_string(ControlLaw law) {
    switch (law) {
        case ControlLaw::nominal: return "nominal";
        case ControlLaw::robust_sign: return "robust-sign";
        case ControlLaw::integral: return "integral";
        case ControlLaw::terminal_sm: return "terminal-sm";
    }
    return "unknown";
}

ControlLaw parse_control_law(std::string_view name) {
    if (name == "nominal") return ControlLaw::nominal;
    if (name == "robust-sign") return ControlLaw::robust_sign;
    if (name == "integral") return ControlLaw::integral;
    if (name == "terminal-sm") return ControlLaw::terminal_sm;
    throw ConfigError("unknown control law '" + std::string(name) +
                      "' (expected nominal, robust-sign, integral or terminal-sm)");
}

void ControllerSpec::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(std::isfinite(K1) && K1 > 0.0, "K1 must be positive");
    require(std::isfinite(K2) && K2 > 0.0, "K2 must be positive");
    require(std::isfinite(beta) && beta > 1.0, "beta must be greater than 1");
    switch (law) {
        case ControlLaw::nominal:
        case ControlLaw::integral:
            require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive for this law");
            break;
        case ControlLaw::robust_sign:
            require(std::isfinite(D_max) && D_max >= 0.0, "D_max must be nonnegative");
            require(K2 > D_max, "robust-sign law requires K2 > D_max");
            break;
        case ControlLaw::terminal_sm:
            require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be nonnegative");
            require(std::isfinite(k_tsm) && k_tsm > 0.0, "k_tsm must be positive");
            break;
    }
    surrogate.validate();
    guards.validate();
}

namespace {

// Pieces shared by the three backstepping laws.
struct Backstep {
    double x2_star;
    double z2;
    double feedforward;  // -x1 - K1 F(x1) (x2* + z2)
    bool saturated;
};

Backstep backstep(double x1, double x2, const ControllerSpec& spec) {
    const auto tower = pt_value_guarded(x1, spec.x1_tower(), spec.guards);
    const auto factor = pt_derivative_factor_guarded(x1, spec.x1_tower(), spec.guards);
    const double x2_star = -spec.K1 * tower.value;
    const double z2 = x2 - x2_star;
    const double feedforward = -x1 - spec.K1 * factor.value * (x2_star + z2);
    return {x2_star, z2, feedforward, tower.saturated || factor.saturated};
}

}  // namespace

double fictive_control(double x1, const ControllerSpec& spec) {
    return -spec.K1 * pt_value(x1, spec.x1_tower(), spec.guards);
}

ControlOutput nominal_control(double x1, double x2, const ControllerSpec& spec) {
    const auto b = backstep(x1, x2, spec);
    const auto reach = pt_value_guarded(b.z2, spec.z2_tower(), spec.guards);
    return {-spec.K2 * reach.value + b.feedforward, b.z2, b.x2_star, 0.0,
            b.saturated || reach.saturated};
}

ControlOutput robust_sign_control(double x1, double x2, const ControllerSpec& spec) {
    if (!(spec.K2 > spec.D_max))
        throw ConfigError("robust-sign law requires K2 > D_max");
    const auto b = backstep(x1, x2, spec);
    const double u = -spec.K2 * sign_surrogate(b.z2, spec.surrogate) + b.feedforward;
    return {u, b.z2, b.x2_star, 0.0, b.saturated};
}

IntegralOutput integral_control(double x1, double x2, const ControllerState& state,
                                const ControllerSpec& spec) {
    auto out = nominal_control(x1, x2, spec);
    out.u += state.w;
    return {out, -out.z2};
}

ControlOutput terminal_sm_control(double x1, double x2, const ControllerSpec& spec) {
    const auto tower = pt_value_guarded(x1, spec.x1_tower(), spec.guards);
    const auto factor = pt_derivative_factor_guarded(x1, spec.x1_tower(), spec.guards);
    const double s = x2 + spec.k_tsm * tower.value;
    const auto reach = pt_value_guarded(s, spec.z2_tower(), spec.guards);
    const double u = -reach.value - spec.k_tsm * factor.value * x2;
    return {u, s, -spec.k_tsm * tower.value, s,
            tower.saturated || factor.saturated || reach.saturated};
}

IntegralOutput evaluate_control(double x1, double x2, const ControllerState& state,
                                const ControllerSpec& spec) {
    switch (spec.law) {
        case ControlLaw::nominal: return {nominal_control(x1, x2, spec), 0.0};
        case ControlLaw::robust_sign: return {robust_sign_control(x1, x2, spec), 0.0};
        case ControlLaw::integral: return integral_control(x1, x2, state, spec);
        case ControlLaw::terminal_sm: return {terminal_sm_control(x1, x2, spec), 0.0};
    }
    throw ConfigError("unhandled control law");
}

namespace {

// gain * |a|^{1 + |a|^alpha}
double dissipation_term(double gain, double a, double alpha) {
    const double mag = std::fabs(a);
    if (mag == 0.0) return 0.0;
    return gain * std::exp((1.0 + std::pow(mag, alpha)) * std::log(mag));
}

}  // namespace

double backstepping_v2_dot(double x1, double x2, double u, const ControllerSpec& spec) {
    const auto p = spec.x1_tower();
    const double tower = pt_value(x1, p, spec.guards);
    const double factor = pt_derivative_factor(x1, p, spec.guards);
    const double z2 = x2 + spec.K1 * tower;
    return -dissipation_term(spec.K1, x1, spec.beta) + x1 * z2 +
           z2 * (u + spec.K1 * factor * (-spec.K1 * tower + z2));
}

double target_v2_dot(double x1, double z2, const ControllerSpec& spec) {
    return -dissipation_term(spec.K1, x1, spec.beta) - dissipation_term(spec.K2, z2, spec.gamma);
}

}  // namespace ptsmc
