#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptsmc/plant.hpp"

namespace ptsmc {

/// Which states enter the convergence test.
enum class StateNorm {
    both,     ///< max(|x1|, |x2|)
    x1_only,  ///< |x1|
    x2_only,  ///< |x2|
};

struct ConvergenceReport {
    std::optional<double> t_conv;       ///< entry time after which the ball is never left
    std::optional<double> first_entry;  ///< first time the ball was reached
    double band = 0.0;
    bool stayed = false;  ///< first entry was already final (no later escape)
    double final_x1 = 0.0;
    double final_x2 = 0.0;
    double final_w = 0.0;
};

/// Entry-and-stay time into the epsilon-ball around the origin.
ConvergenceReport convergence_time(std::span<const Sample> samples, double epsilon,
                                   StateNorm norm = StateNorm::both);
ConvergenceReport convergence_time(const SimResult& result, double epsilon,
                                   StateNorm norm = StateNorm::both);

struct ChatteringReport {
    double sign_flips_per_second = 0.0;
    double u_total_variation = 0.0;
    double window = 0.0;
    std::size_t sign_flips = 0;
};

/// Sign alternations and total variation of u over the trailing window.
ChatteringReport chattering_index(std::span<const Sample> samples, double window);
ChatteringReport chattering_index(const SimResult& result, double window);

enum class LyapunovFunction { V1, V2, V3 };

struct MonotonicityVerdict {
    bool pass = true;
    std::optional<std::size_t> first_violation;  ///< index k with V[k+1] > V[k] > band
    std::optional<double> violation_time;
    double violation_increase = 0.0;
};

MonotonicityVerdict lyapunov_monotonicity(std::span<const double> values,
                                          std::span<const double> times, double band);
MonotonicityVerdict lyapunov_monotonicity(const SimResult& result, LyapunovFunction which,
                                          double band);

struct InitialCondition {
    double x1 = 0.0;
    double x2 = 0.0;
    bool operator==(const InitialCondition&) const = default;
};

struct SweepCell {
    InitialCondition ic;
    std::optional<ConvergenceReport> report;  ///< empty when the run failed
    double max_abs_u = 0.0;
    std::string error;  ///< overflow or domain diagnostics
};

struct SweepTable {
    std::vector<SweepCell> cells;  ///< same order as the input grid
    std::optional<double> max_t_conv;  ///< empty unless every cell converged
    bool all_converged = false;
};

/// One closed-loop run per initial condition; failed runs are recorded, not thrown.
/// Cells run concurrently on up to `threads` workers (0 = hardware concurrency).
SweepTable guaranteed_time_sweep(std::span<const InitialCondition> grid, const SimConfig& config,
                                 const ControllerSpec& spec, const DisturbanceModel& dist,
                                 double epsilon, unsigned threads = 0);

double max_abs_u(std::span<const Sample> samples);

struct LemmaRow {
    double alpha;
    double a;
    double analytic;  ///< closed-form derivative factor
    double numeric;   ///< central difference of the power tower
    double rel_err;
};

/// Default relative finite-difference step: h = 1e-6 * max(1, |a|).
inline constexpr double kDefaultLemmaStep = 1e-6;

/// Compares the closed-form derivative factor with central differences of
/// the exact-sign power tower at each grid point.
std::vector<LemmaRow> lemma1_oracle(double alpha, std::span<const double> grid,
                                    double relative_step = kDefaultLemmaStep,
                                    const EvalGuards& guards = {});

/// n log-spaced points on [lo, hi] followed by their negatives.
std::vector<double> symmetric_log_grid(double lo, double hi, std::size_t n);

}  // namespace ptsmc
