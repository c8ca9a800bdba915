#pragma once

#include <string_view>

#include "ptsmc/power_tower.hpp"

namespace ptsmc {

/// The four power-tower control laws for the double integrator x1' = x2, x2' = u + d.
enum class ControlLaw {
    nominal,      ///< backstepping, no disturbance
    robust_sign,  ///< sign reaching term, |d| < D_max known
    integral,     ///< nominal law plus integral state w, w' = -z2
    terminal_sm,  ///< power-tower terminal sliding surface
};

std::string_view to_string(ControlLaw law);
ControlLaw parse_control_law(std::string_view name);

struct ControllerSpec {
    ControlLaw law = ControlLaw::nominal;
    double K1 = 1.0;
    double K2 = 20.0;
    double beta = 2.0;   // exponent on x1, must exceed 1
    double gamma = 1.5;  // exponent on z2 (or s); inert for robust_sign
    double k_tsm = 1.0;  // surface gain, terminal_sm only
    double D_max = 0.0;  // disturbance bound, robust_sign only
    SignSurrogate surrogate{};
    EvalGuards guards{};

    /// Throws ConfigError when the gains violate the law's requirements.
    void validate() const;

    PowerTowerParams x1_tower() const { return {beta, surrogate}; }
    PowerTowerParams z2_tower() const { return {gamma, surrogate}; }

    bool operator==(const ControllerSpec&) const = default;
};

/// Controller memory carried between steps.
struct ControllerState {
    double w = 0.0;
};

struct ControlOutput {
    double u = 0.0;
    double z2 = 0.0;       // x2 - x2_star; equals s for terminal_sm
    double x2_star = 0.0;  // virtual control
    double s = 0.0;        // terminal sliding variable, 0 for the other laws
    bool saturated = false;
};

struct IntegralOutput {
    ControlOutput out;
    double w_dot = 0.0;
};

/// x2* = -K1 * pt(x1, beta).
double fictive_control(double x1, const ControllerSpec& spec);

ControlOutput nominal_control(double x1, double x2, const ControllerSpec& spec);
ControlOutput robust_sign_control(double x1, double x2, const ControllerSpec& spec);
IntegralOutput integral_control(double x1, double x2, const ControllerState& state,
                                const ControllerSpec& spec);
ControlOutput terminal_sm_control(double x1, double x2, const ControllerSpec& spec);

/// Dispatches on spec.law. w_dot is 0 for every law except integral.
IntegralOutput evaluate_control(double x1, double x2, const ControllerState& state,
                                const ControllerSpec& spec);

/// V2' assembled term by term from the backstepping derivation:
///   -K1 |x1|^{1+|x1|^beta} + x1 z2 + z2 (u + K1 F(x1) (x2* + z2)),
/// with F the power tower derivative factor. Used to check the closed-loop identity.
double backstepping_v2_dot(double x1, double x2, double u, const ControllerSpec& spec);

/// -K1 |x1|^{1+|x1|^beta} - K2 |z2|^{1+|z2|^gamma}.
double target_v2_dot(double x1, double z2, const ControllerSpec& spec);

}  // namespace ptsmc
