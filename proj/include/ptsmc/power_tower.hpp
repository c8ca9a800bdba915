#pragma once

// Signed power tower of order two, a -> |a|^{|a|^alpha} * sgn(a), and the
// factor multiplying da/dt in its time derivative.

namespace ptsmc {

/// Stand-in for sgn(.) used inside the power tower and the control laws.
struct SignSurrogate {
    enum class Kind { exact, tanh };

    Kind kind = Kind::exact;
    double gain = 50.0;  // slope of tanh(gain * a); unused for exact

    static constexpr SignSurrogate exact_sign() { return {Kind::exact, 50.0}; }
    static constexpr SignSurrogate smooth(double gain) { return {Kind::tanh, gain}; }

    void validate() const;
    bool operator==(const SignSurrogate&) const = default;
};

struct PowerTowerParams {
    double alpha = 2.0;
    SignSurrogate surrogate{};
};

/// Numerical guards for evaluating exp(|a|^alpha * ln|a|) and the derivative factor.
struct EvalGuards {
    /// Below this |a| the derivative factor is replaced by its limit at 0.
    double zero_band = 1e-12;
    /// Upper clamp on the exponent handed to exp().
    double exp_cap = 700.0;

    void validate() const;
    bool operator==(const EvalGuards&) const = default;
};

struct GuardedValue {
    double value = 0.0;
    bool saturated = false;  // exponent hit exp_cap
};

double sign_surrogate(double a, const SignSurrogate& s);

/// |a|^{|a|^alpha} * S(a). Exactly 0 at a = 0. alpha = 0 gives |a| * S(a).
GuardedValue pt_value_guarded(double a, const PowerTowerParams& p, const EvalGuards& g = {});
double pt_value(double a, const PowerTowerParams& p, const EvalGuards& g = {});

/// |a|^{|a|^alpha + alpha - 1} * (1 + alpha ln|a|), the chain-rule factor of
/// d/dt pt_value(a(t)) for the exact sign. Returns 0 inside the zero band when
/// alpha > 1 and throws SingularityError there when alpha <= 1.
GuardedValue pt_derivative_factor_guarded(double a, const PowerTowerParams& p,
                                          const EvalGuards& g = {});
double pt_derivative_factor(double a, const PowerTowerParams& p, const EvalGuards& g = {});

}  // namespace ptsmc
