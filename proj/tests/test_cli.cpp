#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ptsmc/cli.hpp"
#include "ptsmc/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "ptsmc");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = ptsmc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli: run a shortened preset") {
    TempDir tmp("ptsmc_cli_run");
    const auto r = invoke({"run", "fig2", "--out", tmp.path.string(), "--t-end", "0.2"});
    CHECK(r.code == 0);
    const auto csv = slurp(tmp.path / "fig2.csv");
    CHECK(csv.rfind("t,x1,x2,z2,u,d,w,V1,V2,V3\n", 0) == 0);
    std::istringstream in(csv);
    CHECK(ptsmc::read_trajectory_csv(in).size() == 201);
    const auto summary = nlohmann::json::parse(slurp(tmp.path / "fig2_summary.json"));
    CHECK(summary["scenario"] == "fig2");
    CHECK(summary["spec"]["tanh_gain"] == 50.0);
    CHECK(summary.contains("chattering"));
    CHECK(summary["lyapunov"].contains("V2"));
}

TEST_CASE("cli: overrides and failures") {
    TempDir tmp("ptsmc_cli_fail");
    auto r = invoke({"run", (tmp.path / "missing.ini").string()});
    CHECK(r.code == ptsmc::cli::kBadInput);
    CHECK(r.err.find("missing.ini") != std::string::npos);

    r = invoke({"run", "fig1", "--dt", "-1", "--out", tmp.path.string()});
    CHECK(r.code == ptsmc::cli::kBadInput);

    r = invoke({"run", "fig1", "--surrogate", "cubic"});
    CHECK(r.code == ptsmc::cli::kBadInput);

    // far initial condition under a coarse step overflows
    const auto cfg = tmp.path / "far.ini";
    std::ofstream(cfg) << "[scenario]\nbase = fig1\nname = far\n[sim]\nx1_0 = 6\nt_end = 0.1\n";
    r = invoke({"run", cfg.string(), "--out", tmp.path.string()});
    CHECK(r.code == ptsmc::cli::kRunFailed);
    CHECK(r.err.find("last finite state") != std::string::npos);

    // a configured check that fails gives a nonzero exit, outputs still written
    const auto strict = tmp.path / "strict.ini";
    std::ofstream(strict) << "[scenario]\nbase = fig2\nname = strict\n[sim]\nt_end = 0.2\n"
                             "[checks]\nrequire_convergence = true\n";
    r = invoke({"run", strict.string(), "--out", tmp.path.string()});
    CHECK(r.code == ptsmc::cli::kChecksFailed);
    CHECK(fs::exists(tmp.path / "strict.csv"));
}

TEST_CASE("cli: sweep") {
    TempDir tmp("ptsmc_cli_sweep");
    const auto cfg = tmp.path / "sweep.ini";
    std::ofstream(cfg) << "[scenario]\nbase = fig2\nname = grid\n[sim]\nt_end = 2\n"
                          "[sweep]\nic = 0, 0\nic = 1, -1.5\n";
    const auto r = invoke({"sweep", cfg.string(), "--out", tmp.path.string()});
    CHECK(r.code == 0);
    const auto csv = slurp(tmp.path / "grid_sweep.csv");
    std::istringstream in(csv);
    std::string header, origin, second;
    std::getline(in, header);
    std::getline(in, origin);
    std::getline(in, second);
    CHECK(header == "x1_0,x2_0,t_conv,converged,max_abs_u");
    CHECK(origin.rfind("0.0000000000000000e+00,0.0000000000000000e+00,0.0000000000000000e+00,1,", 0) == 0);
    CHECK(second.find(",1,") != std::string::npos);

    const auto empty = tmp.path / "empty.ini";
    std::ofstream(empty) << "[scenario]\nbase = fig2\n";
    CHECK(invoke({"sweep", empty.string(), "--out", tmp.path.string()}).code == ptsmc::cli::kBadInput);
}

TEST_CASE("cli: check-lemma") {
    TempDir tmp("ptsmc_cli_lemma");
    auto r = invoke({"check-lemma", "--alpha", "2", "--out", tmp.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    const auto csv = slurp(tmp.path / "lemma_check.csv");
    CHECK(csv.rfind("alpha,a,analytic,numeric,rel_err\n", 0) == 0);

    r = invoke({"check-lemma", "--alpha", "2", "--a-min", "0.5", "--a-max", "1", "--points", "2",
                "--out", tmp.path.string()});
    CHECK(r.code == 0);
    CHECK(slurp(tmp.path / "lemma_check.csv").find("1.0000000000000000e+00,1.0000000000000000e+00,") !=
          std::string::npos);

    r = invoke({"check-lemma", "--tolerance", "0", "--out", tmp.path.string()});
    CHECK(r.code == ptsmc::cli::kChecksFailed);

    r = invoke({"check-lemma", "--a-min", "0", "--out", tmp.path.string()});
    CHECK(r.code == ptsmc::cli::kBadInput);
}

TEST_CASE("cli: show prints a parseable preset") {
    const auto r = invoke({"show", "fig3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("law = integral") != std::string::npos);
}
