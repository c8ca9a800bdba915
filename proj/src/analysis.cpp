#include "ptsmc/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ptsmc {

namespace {

double state_norm(const Sample& s, StateNorm norm) {
    switch (norm) {
        case StateNorm::x1_only: return std::fabs(s.x1);
        case StateNorm::x2_only: return std::fabs(s.x2);
        case StateNorm::both: break;
    }
    return std::max(std::fabs(s.x1), std::fabs(s.x2));
}

// First index of the trailing window [t_last - window, t_last].
std::size_t window_start(std::span<const Sample> samples, double window) {
    const double t0 = samples.back().t - window;
    auto it = std::lower_bound(samples.begin(), samples.end(), t0,
                               [](const Sample& s, double t) { return s.t < t - 1e-12; });
    return static_cast<std::size_t>(it - samples.begin());
}

}  // namespace

ConvergenceReport convergence_time(std::span<const Sample> samples, double epsilon,
                                   StateNorm norm) {
    ConvergenceReport rep;
    rep.band = epsilon;
    if (samples.empty()) return rep;

    const auto& last = samples.back();
    rep.final_x1 = last.x1;
    rep.final_x2 = last.x2;
    rep.final_w = last.w;

    // Scan backwards for the start of the final run of in-band samples.
    std::size_t k = samples.size();
    while (k > 0 && state_norm(samples[k - 1], norm) <= epsilon) --k;
    if (k < samples.size()) rep.t_conv = samples[k].t;

    for (const auto& s : samples) {
        if (state_norm(s, norm) <= epsilon) {
            rep.first_entry = s.t;
            break;
        }
    }
    rep.stayed = rep.t_conv.has_value() && rep.first_entry == rep.t_conv;
    return rep;
}

ConvergenceReport convergence_time(const SimResult& result, double epsilon, StateNorm norm) {
    return convergence_time(std::span<const Sample>(result.samples), epsilon, norm);
}

ChatteringReport chattering_index(std::span<const Sample> samples, double window) {
    ChatteringReport rep;
    rep.window = window;
    if (samples.size() < 2 || !(window > 0.0)) return rep;

    for (std::size_t k = window_start(samples, window) + 1; k < samples.size(); ++k) {
        const double prev = samples[k - 1].u;
        const double cur = samples[k].u;
        if ((prev > 0.0 && cur < 0.0) || (prev < 0.0 && cur > 0.0)) ++rep.sign_flips;
        rep.u_total_variation += std::fabs(cur - prev);
    }
    rep.sign_flips_per_second = static_cast<double>(rep.sign_flips) / window;
    return rep;
}

ChatteringReport chattering_index(const SimResult& result, double window) {
    return chattering_index(std::span<const Sample>(result.samples), window);
}

MonotonicityVerdict lyapunov_monotonicity(std::span<const double> values,
                                          std::span<const double> times, double band) {
    MonotonicityVerdict v;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        if (values[k] > band && values[k + 1] > values[k]) {
            v.pass = false;
            v.first_violation = k;
            if (k < times.size()) v.violation_time = times[k];
            v.violation_increase = values[k + 1] - values[k];
            break;
        }
    }
    return v;
}

MonotonicityVerdict lyapunov_monotonicity(const SimResult& result, LyapunovFunction which,
                                          double band) {
    std::vector<double> values;
    std::vector<double> times;
    values.reserve(result.samples.size());
    times.reserve(result.samples.size());
    for (const auto& s : result.samples) {
        times.push_back(s.t);
        switch (which) {
            case LyapunovFunction::V1: values.push_back(s.V1); break;
            case LyapunovFunction::V2: values.push_back(s.V2); break;
            case LyapunovFunction::V3: values.push_back(s.V3); break;
        }
    }
    return lyapunov_monotonicity(values, times, band);
}

double max_abs_u(std::span<const Sample> samples) {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, std::fabs(s.u));
    return m;
}

SweepTable guaranteed_time_sweep(std::span<const InitialCondition> grid, const SimConfig& config,
                                 const ControllerSpec& spec, const DisturbanceModel& dist,
                                 double epsilon, unsigned threads) {
    SweepTable table;
    table.cells.resize(grid.size());

    auto run_cell = [&](std::size_t i) {
        SweepCell& cell = table.cells[i];
        cell.ic = grid[i];
        SimConfig cfg = config;
        cfg.x1_0 = grid[i].x1;
        cfg.x2_0 = grid[i].x2;
        try {
            const SimResult r = run(cfg, spec, dist);
            cell.report = convergence_time(r, epsilon);
            cell.max_abs_u = max_abs_u(r.samples);
        } catch (const OverflowError& e) {
            cell.error = e.what();
            cell.max_abs_u = HUGE_VAL;
        } catch (const Error& e) {
            cell.error = e.what();
        }
    };

    // Configuration problems are shared by every cell; surface them once.
    config.validate();
    spec.validate();
    validate(dist);

    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < grid.size(); i = next++) run_cell(i);
            });
    }

    table.all_converged = !table.cells.empty();
    double worst = 0.0;
    for (const auto& cell : table.cells) {
        if (!cell.report || !cell.report->t_conv) {
            table.all_converged = false;
            continue;
        }
        worst = std::max(worst, *cell.report->t_conv);
    }
    if (table.all_converged) table.max_t_conv = worst;
    return table;
}

std::vector<LemmaRow> lemma1_oracle(double alpha, std::span<const double> grid,
                                    double relative_step, const EvalGuards& guards) {
    const PowerTowerParams p{alpha, SignSurrogate::exact_sign()};
    std::vector<LemmaRow> rows;
    rows.reserve(grid.size());
    for (double a : grid) {
        const double h = relative_step * std::max(1.0, std::fabs(a));
        const double numeric =
            (pt_value(a + h, p, guards) - pt_value(a - h, p, guards)) / (2.0 * h);
        const double analytic = pt_derivative_factor(a, p, guards);
        const double rel_err = std::fabs(numeric - analytic) / std::max(std::fabs(analytic), 1e-12);
        rows.push_back({alpha, a, analytic, numeric, rel_err});
    }
    return rows;
}

std::vector<double> symmetric_log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> grid;
    if (n == 0) return grid;
    grid.reserve(2 * n);
    if (n == 1) {
        grid = {lo, -lo};
        return grid;
    }
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        grid.push_back(i + 1 == n ? hi : lo * std::exp(step * static_cast<double>(i)));
    for (std::size_t i = 0; i < n; ++i) grid.push_back(-grid[i]);
    return grid;
}

}  // namespace ptsmc
