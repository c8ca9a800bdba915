#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ptsmc/controllers.hpp"
#include "ptsmc/error.hpp"

namespace ptsmc {

// ---------------------------------------------------------------------------
// Disturbance d(t) entering x2' = u + d.

struct ZeroDisturbance {
    bool operator==(const ZeroDisturbance&) const = default;
};

struct ConstantDisturbance {
    double value = 0.0;
    bool operator==(const ConstantDisturbance&) const = default;
};

/// amplitude * sin(omega * t + phase)
struct SinusoidDisturbance {
    double amplitude = 1.0;
    double omega = 1.0;
    double phase = 0.0;
    bool operator==(const SinusoidDisturbance&) const = default;
};

/// Piecewise-linear through (time, value) knots; times strictly increasing.
struct TabulatedDisturbance {
    std::vector<std::pair<double, double>> knots;
    bool operator==(const TabulatedDisturbance&) const = default;
};

using DisturbanceModel =
    std::variant<ZeroDisturbance, ConstantDisturbance, SinusoidDisturbance, TabulatedDisturbance>;

void validate(const DisturbanceModel& dist);

/// Throws DomainError for t outside a tabulated range.
double disturbance_value(const DisturbanceModel& dist, double t);

/// True when d(t) is constant in time, so V3 is a genuine Lyapunov candidate.
bool is_time_invariant(const DisturbanceModel& dist);

std::string describe(const DisturbanceModel& dist);

// ---------------------------------------------------------------------------

struct PlantState {
    double x1 = 0.0;
    double x2 = 0.0;
    double w = 0.0;
    double t = 0.0;
};

struct SimConfig {
    double dt = 5e-5;
    double t_end = 5.0;
    double x1_0 = 1.0;
    double x2_0 = -1.5;
    double w_0 = 0.0;
    std::size_t record_stride = 20;

    void validate() const;
    /// ceil(t_end / dt), robust to t_end being an exact multiple of dt.
    std::size_t step_count() const;
    bool operator==(const SimConfig&) const = default;
};

struct Sample {
    double t, x1, x2, z2, u, d, w, V1, V2, V3;
};

struct SimMetadata {
    SimConfig config;
    ControllerSpec spec;
    DisturbanceModel disturbance;
    std::size_t steps = 0;
    std::size_t saturation_events = 0;
    /// V3 assumes constant d; for time-varying d it is recorded for inspection only.
    bool v3_diagnostic = false;
};

struct SimResult {
    std::vector<Sample> samples;
    SimMetadata meta;
};

/// Integration blew up. Carries the last state that was still finite.
class OverflowError : public Error {
public:
    OverflowError(const PlantState& last_finite, std::size_t step_index);

    const PlantState& last_finite() const noexcept { return last_finite_; }
    std::size_t step_index() const noexcept { return step_index_; }

private:
    PlantState last_finite_;
    std::size_t step_index_;
};

struct StepInfo {
    ControlOutput control;
    double d = 0.0;
    double w_dot = 0.0;
};

/// One forward-Euler step with the control held over [t, t + dt].
PlantState step(const PlantState& state, const ControllerSpec& spec,
                const DisturbanceModel& dist, double dt, StepInfo* info = nullptr);

/// Closed-loop run from the configured initial condition. Records every
/// record_stride-th step, starting with the initial state.
SimResult run(const SimConfig& config, const ControllerSpec& spec, const DisturbanceModel& dist);

/// The recorded quantities for a state, with u and z2 re-evaluated from the controller.
Sample make_sample(const PlantState& state, const StepInfo& info);

}  // namespace ptsmc
