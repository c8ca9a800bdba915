// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ptsmc/analysis.hpp"
#include "ptsmc/controllers.hpp"
#include "ptsmc/error.hpp"
#include "ptsmc/scenario.hpp"

using namespace ptsmc;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimResult run_preset(const std::string& name) {
    const auto c = *find_preset(name);
    return run(c.sim, c.controller, c.disturbance);
}

std::string opt(const std::optional<double>& t) { return t ? fmt("%.4f", *t) : "none"; }

// 1. closed-form derivative factor vs central differences
Outcome lemma_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = symmetric_log_grid(0.05, 2.0, 200);
    double worst = 0.0;
    for (double alpha : {1.5, 2.0, 3.0})
        for (const auto& row : lemma1_oracle(alpha, grid)) worst = std::max(worst, row.rel_err);
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-5 && elapsed < 1.0,
            fmt("max rel_err %.3e (<= 1e-5), %.3f s (< 1 s)", worst, elapsed)};
}

// 2. fig1: exact sign
Outcome fig1(const SimResult& r, double elapsed) {
    const auto conv = convergence_time(r, 1e-2);
    const auto conv_x1 = convergence_time(r, 1e-2, StateNorm::x1_only);
    const auto mono = lyapunov_monotonicity(r, LyapunovFunction::V2, 1e-6);
    const auto chat = chattering_index(r, 1.0);
    const bool t_ok = conv.t_conv && *conv.t_conv >= 1.0 && *conv.t_conv <= 1.4;
    const bool pass = t_ok && mono.pass && chat.sign_flips_per_second > 0.0 && elapsed < 10.0;
    return {pass,
            fmt("t_conv(eps=1e-2)=%s in [1.0,1.4]: %s (x1 alone: %s); V2 monotone above 1e-6: %s%s; "
                "final-second flips/s=%.0f (> 0); run %.2f s (< 10 s)",
                opt(conv.t_conv).c_str(), t_ok ? "yes" : "no", opt(conv_x1.t_conv).c_str(),
                mono.pass ? "yes" : "no",
                mono.pass ? "" : fmt(" (first rise at t=%.4f by %.3g)", *mono.violation_time,
                                     mono.violation_increase).c_str(),
                chat.sign_flips_per_second, elapsed)};
}

// 3. fig2: tanh surrogate against fig1
Outcome fig2(const SimResult& r1, const SimResult& r2) {
    const auto conv = convergence_time(r2, 1e-2);
    const auto c1 = chattering_index(r1, 1.0);
    const auto c2 = chattering_index(r2, 1.0);
    const double u1 = max_abs_u(r1.samples);
    const double u2 = max_abs_u(r2.samples);
    const bool less_chatter = c2.sign_flips_per_second < c1.sign_flips_per_second &&
                              c2.u_total_variation < c1.u_total_variation;
    return {conv.t_conv.has_value() && less_chatter && u2 < u1,
            fmt("t_conv(eps=1e-2)=%s; flips/s %.0f vs fig1 %.0f, TV %.3g vs %.3g; max|u| %.3f vs fig1 %.3f",
                opt(conv.t_conv).c_str(), c2.sign_flips_per_second, c1.sign_flips_per_second,
                c2.u_total_variation, c1.u_total_variation, u2, u1)};
}

// 4. fig3: integral law, d = 10
Outcome fig3(const SimResult& r) {
    const auto c = *find_preset("fig3");
    const auto s = summarize(r, c);
    const auto& last = r.samples.back();
    const double final_norm = std::max(std::fabs(last.x1), std::fabs(last.x2));
    const double d = 10.0;
    // u = w + ..., so cancelling d drives w towards -d
    const bool w_ok = std::fabs(last.w + d) <= 0.05 * d;
    const bool pass = final_norm <= 1e-2 && s.mean_u_tail >= -10.5 && s.mean_u_tail <= -9.5 && w_ok;
    return {pass, fmt("final max(|x1|,|x2|)=%.3e (<= 1e-2); mean u last 0.5 s=%.6f in [-10.5,-9.5]; "
                      "w(t_end)=%.4f, |w| within 5%% of |d|=10: %s",
                      final_norm, s.mean_u_tail, last.w, w_ok ? "yes" : "no")};
}

// 5. fig4: robust law, d = sin t
Outcome fig4(const SimResult& r) {
    const auto c = *find_preset("fig4");
    const auto s = summarize(r, c);
    constexpr double kTransient = 2.0;
    double worst = 0.0;
    for (const auto& x : r.samples)
        if (x.t >= kTransient) worst = std::max({worst, std::fabs(x.x1), std::fabs(x.x2)});
    bool noted = false;
    for (const auto& n : s.notes) noted |= n.find("z2 has a nonzero residual") != std::string::npos;
    return {worst <= 5e-2 && s.tracking_rms <= 0.2 && noted,
            fmt("max(|x1|,|x2|) for t >= %.0f s=%.3e (<= 5e-2); RMS(u + sin t) last 2 s=%.3e (<= 0.2); "
                "residual z2 noted: %s (max |z2|=%.3e)",
                kTransient, worst, s.tracking_rms, noted ? "yes" : "no", s.residual_z2)};
}

// 6. convergence over the initial-condition grid, fig1 settings
Outcome sweep() {
    const auto c = *find_preset("fig1");
    const auto grid = default_sweep_grid();
    const auto table = guaranteed_time_sweep(grid, c.sim, c.controller, c.disturbance, 1e-2);
    std::string cells;
    bool symmetric = true;
    const double stride_t = c.sim.dt * static_cast<double>(c.sim.record_stride);
    for (std::size_t i = 0; i < table.cells.size(); ++i) {
        const auto& cell = table.cells[i];
        const std::string t = !cell.report ? "overflow" : opt(cell.report->t_conv);
        cells += fmt(" (%g,%g):%s", cell.ic.x1, cell.ic.x2, t.c_str());
        for (std::size_t j = 0; j < table.cells.size(); ++j) {
            const auto& other = table.cells[j];
            if (other.ic.x1 != -cell.ic.x1 || other.ic.x2 != -cell.ic.x2) continue;
            const auto ta = cell.report ? cell.report->t_conv : std::nullopt;
            const auto tb = other.report ? other.report->t_conv : std::nullopt;
            if (ta.has_value() != tb.has_value() || (ta && std::fabs(*ta - *tb) > stride_t + 1e-12))
                symmetric = false;
        }
    }
    return {table.all_converged && table.max_t_conv && symmetric,
            fmt("all converged: %s; max t_conv=%s; symmetric: %s;", table.all_converged ? "yes" : "no",
                opt(table.max_t_conv).c_str(), symmetric ? "yes" : "no") + cells};
}

// 7. algebraic V2' with the nominal law equals the dissipation target
Outcome lyapunov_identity() {
    const auto spec = find_preset("fig1")->controller;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> log_mag(-3.0, std::log10(2.0)), coin(0.0, 1.0), vel(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x1 = std::pow(10.0, log_mag(rng)) * (coin(rng) < 0.5 ? -1.0 : 1.0);
        const double x2 = vel(rng);
        const auto out = nominal_control(x1, x2, spec);
        const double lhs = backstepping_v2_dot(x1, x2, out.u, spec);
        const double rhs = target_v2_dot(x1, out.z2, spec);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
    }
    return {worst <= 1e-9, fmt("10^4 states, max rel err %.3e (<= 1e-9)", worst)};
}

// 8. finite control near x1 = 0 for beta > 1; singularity reported for beta <= 1
Outcome singularity() {
    std::size_t evaluated = 0;
    bool finite = true;
    for (auto law : {ControlLaw::nominal, ControlLaw::robust_sign, ControlLaw::integral,
                     ControlLaw::terminal_sm}) {
        for (double beta : {1.5, 2.0, 3.0}) {
            ControllerSpec spec;
            spec.law = law;
            spec.beta = beta;
            spec.gamma = law == ControlLaw::robust_sign ? 0.0 : 1.5;
            spec.D_max = law == ControlLaw::robust_sign ? 1.0 : 0.0;
            std::vector<double> xs{0.0};
            for (double m = 1e-15; m <= 1e-3 * (1 + 1e-9); m *= std::pow(10.0, 0.25)) {
                xs.push_back(m);
                xs.push_back(-m);
            }
            for (double x1 : xs)
                for (double x2 : {-1.5, -0.1, 0.0, 0.1, 1.5}) {
                    const double u = evaluate_control(x1, x2, {0.5}, spec).out.u;
                    finite &= std::isfinite(u);
                    ++evaluated;
                }
        }
    }
    bool raised = true;
    for (double beta : {0.5, 1.0}) {
        for (double x1 : {0.0, 1e-13, -5e-13}) {
            try {
                pt_derivative_factor(x1, {beta, SignSurrogate::exact_sign()});
                raised = false;
            } catch (const SingularityError&) {
            }
            ControllerSpec spec;
            spec.beta = beta;
            try {
                nominal_control(x1, 0.3, spec);
                raised = false;
            } catch (const SingularityError&) {
            }
        }
    }
    return {finite && raised, fmt("%zu evaluations finite: %s; beta<=1 inside zero band raises: %s",
                                  evaluated, finite ? "yes" : "no", raised ? "yes" : "no")};
}

// 9. first-order convergence of explicit Euler on fig1
Outcome euler_order() {
    const auto c = *find_preset("fig1");
    std::vector<SimResult> runs;
    for (std::size_t m : {1u, 2u, 4u}) {
        auto sim = c.sim;
        sim.dt = c.sim.dt / static_cast<double>(m);
        sim.record_stride = c.sim.record_stride * m;
        sim.t_end = 1.5;
        runs.push_back(run(sim, c.controller, c.disturbance));
    }
    // Compare only before x1 first reaches the chattering band around 0.
    const double t_cut = *convergence_time(runs[0], 1e-2, StateNorm::x1_only).first_entry;
    auto deviation = [&](const SimResult& a, const SimResult& b) {
        double dev = 0.0;
        for (std::size_t k = 0; k < a.samples.size() && a.samples[k].t < t_cut; ++k)
            dev = std::max({dev, std::fabs(a.samples[k].x1 - b.samples[k].x1),
                            std::fabs(a.samples[k].x2 - b.samples[k].x2)});
        return dev;
    };
    const double coarse = deviation(runs[0], runs[1]);
    const double fine = deviation(runs[1], runs[2]);
    const double ratio = coarse / fine;
    return {ratio >= 1.5 && ratio <= 3.0,
            fmt("t < %.3f s: max dev(dt, dt/2)=%.3e, max dev(dt/2, dt/4)=%.3e, ratio %.3f in [1.5, 3]",
                t_cut, coarse, fine, ratio)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int id, const char* name, const Outcome& o) {
        std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    };

    report(1, "derivative factor oracle", lemma_oracle());

    const auto t0 = std::chrono::steady_clock::now();
    const auto r1 = run_preset("fig1");
    const double fig1_elapsed = seconds_since(t0);
    const auto r2 = run_preset("fig2");
    report(2, "fig1 exact-sign convergence", fig1(r1, fig1_elapsed));
    report(3, "fig2 tanh chattering reduction", fig2(r1, r2));
    report(4, "fig3 constant disturbance rejection", fig3(run_preset("fig3")));
    report(5, "fig4 sinusoidal disturbance cancellation", fig4(run_preset("fig4")));
    report(6, "Guaranteed-time sweep", sweep());
    report(7, "Lyapunov identity", lyapunov_identity());
    report(8, "Singularity safety", singularity());
    report(9, "Euler-order check", euler_order());

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
