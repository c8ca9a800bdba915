#include "ptsmc/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptsmc/analysis.hpp"
#include "ptsmc/io.hpp"
#include "ptsmc/scenario.hpp"

namespace ptsmc::cli {

namespace {

struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<double> epsilon;
    std::optional<std::string> surrogate;
    std::optional<double> tanh_gain;
    std::optional<std::size_t> stride;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dt", dt, "Integration step [s]");
        cmd->add_option("--t-end", t_end, "Simulation horizon [s]");
        cmd->add_option("--epsilon", epsilon, "Convergence ball radius");
        cmd->add_option("--surrogate", surrogate, "Sign surrogate")
            ->check(CLI::IsMember({"exact", "tanh"}));
        cmd->add_option("--tanh-gain", tanh_gain, "Slope of the tanh surrogate");
        cmd->add_option("--stride", stride, "Record every n-th step");
    }

    void apply(ScenarioConfig& c) const {
        if (dt) c.sim.dt = *dt;
        if (t_end) c.sim.t_end = *t_end;
        if (epsilon) c.analysis.epsilon = *epsilon;
        if (surrogate)
            c.controller.surrogate.kind =
                *surrogate == "tanh" ? SignSurrogate::Kind::tanh : SignSurrogate::Kind::exact;
        if (tanh_gain) c.controller.surrogate.gain = *tanh_gain;
        if (stride) c.sim.record_stride = *stride;
        c.validate();
    }
};

ScenarioConfig resolve(const std::string& target) {
    if (auto preset = find_preset(target)) return *preset;
    if (!std::filesystem::exists(target))
        throw ConfigError("'" + target + "' is neither a preset (" + [] {
            std::string names;
            for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
            return names;
        }() + ") nor an existing file");
    return load_scenario(target);
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string stream_to_string(auto&& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Power tower sliding mode control: closed-loop scenarios and checks", "ptsmc"};
    app.require_subcommand(1);

    std::string out_dir = ".";

    auto* run_cmd = app.add_subcommand("run", "Simulate a preset (fig1..fig4) or a scenario file");
    std::string run_target;
    run_cmd->add_option("target", run_target, "Preset name or config path")->required();
    run_cmd->add_option("--out", out_dir, "Output directory");
    Overrides run_over;
    run_over.attach(run_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "Convergence times over an initial-condition grid");
    std::string sweep_target;
    sweep_cmd->add_option("config", sweep_target, "Scenario file with a [sweep] section")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory");
    unsigned threads = 0;
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    Overrides sweep_over;
    sweep_over.attach(sweep_cmd);

    auto* lemma_cmd = app.add_subcommand("check-lemma", "Closed-form derivative factor vs central differences");
    std::vector<double> alphas{1.5, 2.0, 3.0};
    double a_min = 0.05;
    double a_max = 2.0;
    std::size_t points = 200;
    double step = kDefaultLemmaStep;
    double tolerance = 1e-5;
    lemma_cmd->add_option("--alpha", alphas, "Exponents to check")->capture_default_str();
    lemma_cmd->add_option("--a-min", a_min, "Smallest |a|")->capture_default_str();
    lemma_cmd->add_option("--a-max", a_max, "Largest |a|")->capture_default_str();
    lemma_cmd->add_option("--points", points, "Log-spaced points per sign")->capture_default_str();
    lemma_cmd->add_option("--step", step, "Relative finite-difference step")->capture_default_str();
    lemma_cmd->add_option("--tolerance", tolerance, "Maximum relative error")->capture_default_str();
    lemma_cmd->add_option("--out", out_dir, "Output directory");

    auto* show_cmd = app.add_subcommand("show", "Print a preset as an editable scenario file");
    std::string show_target;
    show_cmd->add_option("preset", show_target)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kBadInput;
    }

    try {
        if (*show_cmd) {
            out << format_scenario(resolve(show_target));
            return kOk;
        }

        if (*lemma_cmd) {
            EvalGuards guards;
            if (!(a_min > guards.zero_band) || !(a_max >= a_min) || points < 1)
                throw ConfigError("lemma grid must satisfy zero_band < a-min <= a-max and points >= 1");
            for (double alpha : alphas)
                if (!(alpha > 0.0)) throw ConfigError("alpha values must be positive");
            const auto grid = symmetric_log_grid(a_min, a_max, points);
            std::vector<LemmaRow> rows;
            double worst = 0.0;
            for (double alpha : alphas) {
                auto part = lemma1_oracle(alpha, grid, step, guards);
                for (const auto& r : part) worst = std::max(worst, r.rel_err);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            ensure_dir(out_dir);
            const auto path = std::filesystem::path(out_dir) / "lemma_check.csv";
            write_file_atomic(path, stream_to_string([&](std::ostream& os) { write_lemma_csv(os, rows); }));
            const bool ok = worst <= tolerance;
            out << "max rel_err " << format_real(worst) << " (tolerance " << format_real(tolerance)
                << ") " << (ok ? "PASS" : "FAIL") << "\nwrote " << path.string() << "\n";
            return ok ? kOk : kChecksFailed;
        }

        if (*run_cmd) {
            ScenarioConfig config = resolve(run_target);
            run_over.apply(config);
            const SimResult result = ptsmc::run(config.sim, config.controller, config.disturbance);
            const RunSummary summary = summarize(result, config);

            ensure_dir(out_dir);
            const auto dir = std::filesystem::path(out_dir);
            const auto csv = dir / (config.name + ".csv");
            const auto json = dir / (config.name + "_summary.json");
            write_file_atomic(csv, stream_to_string([&](std::ostream& os) {
                                  write_trajectory_csv(os, result.samples);
                              }));
            write_file_atomic(json, summary_json(summary, config));

            out << config.name << ": " << result.samples.size() << " samples, t_conv(eps="
                << config.analysis.epsilon << ") = "
                << (summary.convergence.t_conv ? std::to_string(*summary.convergence.t_conv) : "none")
                << ", max|u| = " << summary.max_abs_u << "\n";
            for (const auto& note : summary.notes) out << "  note: " << note << "\n";
            out << "wrote " << csv.string() << " and " << json.string() << "\n";
            return summary.checks_passed ? kOk : kChecksFailed;
        }

        if (*sweep_cmd) {
            ScenarioConfig config = resolve(sweep_target);
            sweep_over.apply(config);
            if (config.sweep_grid.empty())
                throw ConfigError(sweep_target + ": [sweep] section with at least one 'ic' is required");
            const SweepTable table = guaranteed_time_sweep(config.sweep_grid, config.sim, config.controller,
                                                           config.disturbance, config.analysis.epsilon, threads);
            ensure_dir(out_dir);
            const auto dir = std::filesystem::path(out_dir);
            const auto csv = dir / (config.name + "_sweep.csv");
            const auto json = dir / (config.name + "_sweep_summary.json");
            write_file_atomic(csv, stream_to_string([&](std::ostream& os) { write_sweep_csv(os, table); }));
            write_file_atomic(json, sweep_summary_json(table, config));
            out << config.name << ": " << table.cells.size() << " cells, max t_conv = "
                << (table.max_t_conv ? std::to_string(*table.max_t_conv) : "none") << "\nwrote "
                << csv.string() << "\n";
            bool failed_cells = false;
            for (const auto& c : table.cells) failed_cells |= !c.report.has_value();
            if (failed_cells) return kRunFailed;
            return (!config.checks.require_convergence || table.all_converged) ? kOk : kChecksFailed;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const OverflowError& e) {
        err << "error: " << e.what() << "\n";
        return kRunFailed;
    } catch (const SingularityError& e) {
        err << "error: " << e.what() << "\n";
        return kRunFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kWriteFailed;
    }
    return kBadInput;
}

}  // namespace ptsmc::cli
