#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "ptsmc/analysis.hpp"
#include "ptsmc/controllers.hpp"
#include "ptsmc/plant.hpp"
#include "ptsmc/scenario.hpp"

namespace py = pybind11;
using namespace ptsmc;

namespace {

// Holder so pybind11 does not treat the variant as a plain Python union.
struct Disturbance {
    DisturbanceModel model;
};

SignSurrogate make_surrogate(const std::string& kind, double gain) {
    if (kind == "exact") return SignSurrogate::exact_sign();
    if (kind == "tanh") return SignSurrogate::smooth(gain);
    throw ConfigError("surrogate must be 'exact' or 'tanh'");
}

py::dict columns(const SimResult& r) {
    const auto n = static_cast<py::ssize_t>(r.samples.size());
    py::dict out;
    auto column = [&](const char* name, double Sample::*field) {
        py::array_t<double> a(n);
        auto view = a.mutable_unchecked<1>();
        for (py::ssize_t i = 0; i < n; ++i) view(i) = r.samples[static_cast<std::size_t>(i)].*field;
        out[name] = a;
    };
    column("t", &Sample::t);
    column("x1", &Sample::x1);
    column("x2", &Sample::x2);
    column("z2", &Sample::z2);
    column("u", &Sample::u);
    column("d", &Sample::d);
    column("w", &Sample::w);
    column("V1", &Sample::V1);
    column("V2", &Sample::V2);
    column("V3", &Sample::V3);
    return out;
}

py::dict summary_dict(const RunSummary& s) {
    py::dict d;
    d["t_conv"] = s.convergence.t_conv;
    d["t_conv_x1"] = s.convergence_x1.t_conv;
    d["sign_flips_per_second"] = s.chattering.sign_flips_per_second;
    d["u_total_variation"] = s.chattering.u_total_variation;
    d["V1_monotone"] = s.v1.pass;
    d["V2_monotone"] = s.v2.pass;
    d["V3_monotone"] = s.v3.pass;
    d["max_abs_u"] = s.max_abs_u;
    d["saturation_events"] = s.saturation_events;
    d["mean_u_tail"] = s.mean_u_tail;
    d["residual_z2"] = s.residual_z2;
    d["tracking_rms"] = s.tracking_rms;
    d["final_w"] = s.final_w;
    d["checks_passed"] = s.checks_passed;
    d["notes"] = s.notes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Power tower sliding mode controllers, closed-loop simulation and analysis";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<OverflowError>(m, "OverflowError", base.ptr());

    m.def(
        "pt_value",
        [](double a, double alpha, const std::string& surrogate, double gain) {
            return pt_value(a, {alpha, make_surrogate(surrogate, gain)});
        },
        py::arg("a"), py::arg("alpha"), py::arg("surrogate") = "exact", py::arg("tanh_gain") = 50.0,
        "|a|^{|a|^alpha} * S(a)");
    m.def(
        "pt_derivative_factor",
        [](double a, double alpha, double zero_band) {
            return pt_derivative_factor(a, {alpha, SignSurrogate::exact_sign()}, {zero_band, 700.0});
        },
        py::arg("a"), py::arg("alpha"), py::arg("zero_band") = 1e-12);
    m.def(
        "sign_surrogate",
        [](double a, const std::string& surrogate, double gain) {
            return sign_surrogate(a, make_surrogate(surrogate, gain));
        },
        py::arg("a"), py::arg("surrogate") = "exact", py::arg("tanh_gain") = 50.0);

    py::enum_<ControlLaw>(m, "ControlLaw")
        .value("nominal", ControlLaw::nominal)
        .value("robust_sign", ControlLaw::robust_sign)
        .value("integral", ControlLaw::integral)
        .value("terminal_sm", ControlLaw::terminal_sm);

    py::class_<ControllerSpec>(m, "ControllerSpec")
        .def(py::init<>())
        .def_readwrite("law", &ControllerSpec::law)
        .def_readwrite("K1", &ControllerSpec::K1)
        .def_readwrite("K2", &ControllerSpec::K2)
        .def_readwrite("beta", &ControllerSpec::beta)
        .def_readwrite("gamma", &ControllerSpec::gamma)
        .def_readwrite("k_tsm", &ControllerSpec::k_tsm)
        .def_readwrite("D_max", &ControllerSpec::D_max)
        .def_property(
            "surrogate",
            [](const ControllerSpec& s) {
                return s.surrogate.kind == SignSurrogate::Kind::tanh ? "tanh" : "exact";
            },
            [](ControllerSpec& s, const std::string& kind) {
                s.surrogate = make_surrogate(kind, s.surrogate.gain);
            })
        .def_property(
            "tanh_gain", [](const ControllerSpec& s) { return s.surrogate.gain; },
            [](ControllerSpec& s, double g) { s.surrogate.gain = g; })
        .def("validate", &ControllerSpec::validate);

    py::class_<ControlOutput>(m, "ControlOutput")
        .def_readonly("u", &ControlOutput::u)
        .def_readonly("z2", &ControlOutput::z2)
        .def_readonly("x2_star", &ControlOutput::x2_star)
        .def_readonly("s", &ControlOutput::s)
        .def_readonly("saturated", &ControlOutput::saturated);

    m.def("fictive_control", &fictive_control, py::arg("x1"), py::arg("spec"));
    m.def("nominal_control", &nominal_control, py::arg("x1"), py::arg("x2"), py::arg("spec"));
    m.def("robust_sign_control", &robust_sign_control, py::arg("x1"), py::arg("x2"), py::arg("spec"));
    m.def("terminal_sm_control", &terminal_sm_control, py::arg("x1"), py::arg("x2"), py::arg("spec"));
    m.def(
        "integral_control",
        [](double x1, double x2, double w, const ControllerSpec& spec) {
            const auto r = integral_control(x1, x2, {w}, spec);
            return py::make_tuple(r.out, r.w_dot);
        },
        py::arg("x1"), py::arg("x2"), py::arg("w"), py::arg("spec"), "Returns (ControlOutput, w_dot).");
    m.def(
        "evaluate_control",
        [](double x1, double x2, double w, const ControllerSpec& spec) {
            const auto r = evaluate_control(x1, x2, {w}, spec);
            return py::make_tuple(r.out, r.w_dot);
        },
        py::arg("x1"), py::arg("x2"), py::arg("w") = 0.0, py::arg("spec"));

    py::class_<Disturbance>(m, "DisturbanceModel")
        .def_static("zero", [] { return Disturbance{ZeroDisturbance{}}; })
        .def_static("constant", [](double v) { return Disturbance{ConstantDisturbance{v}}; })
        .def_static(
            "sinusoid",
            [](double amplitude, double omega, double phase) {
                return Disturbance{SinusoidDisturbance{amplitude, omega, phase}};
            },
            py::arg("amplitude") = 1.0, py::arg("omega") = 1.0, py::arg("phase") = 0.0)
        .def_static("tabulated",
                    [](std::vector<std::pair<double, double>> knots) {
                        Disturbance d{TabulatedDisturbance{std::move(knots)}};
                        validate(d.model);
                        return d;
                    })
        .def("__call__", [](const Disturbance& d, double t) { return disturbance_value(d.model, t); })
        .def("__repr__", [](const Disturbance& d) { return "DisturbanceModel." + describe(d.model); });

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("t_end", &SimConfig::t_end)
        .def_readwrite("x1_0", &SimConfig::x1_0)
        .def_readwrite("x2_0", &SimConfig::x2_0)
        .def_readwrite("w_0", &SimConfig::w_0)
        .def_readwrite("record_stride", &SimConfig::record_stride);

    py::class_<SimResult>(m, "SimResult")
        .def_property_readonly("steps", [](const SimResult& r) { return r.meta.steps; })
        .def_property_readonly("saturation_events",
                               [](const SimResult& r) { return r.meta.saturation_events; })
        .def("__len__", [](const SimResult& r) { return r.samples.size(); })
        .def("columns", &columns, "Recorded trajectory as a dict of numpy arrays.");

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("t_conv", &ConvergenceReport::t_conv)
        .def_readonly("first_entry", &ConvergenceReport::first_entry)
        .def_readonly("band", &ConvergenceReport::band)
        .def_readonly("stayed", &ConvergenceReport::stayed);

    py::class_<ChatteringReport>(m, "ChatteringReport")
        .def_readonly("sign_flips_per_second", &ChatteringReport::sign_flips_per_second)
        .def_readonly("u_total_variation", &ChatteringReport::u_total_variation)
        .def_readonly("window", &ChatteringReport::window);

    m.def(
        "run",
        [](const SimConfig& config, const ControllerSpec& spec, const Disturbance& d) {
            return ptsmc::run(config, spec, d.model);
        },
        py::arg("config"), py::arg("spec"), py::arg("disturbance"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "convergence_time",
        [](const SimResult& r, double eps, const std::string& norm) {
            const auto n = norm == "x1" ? StateNorm::x1_only : norm == "x2" ? StateNorm::x2_only : StateNorm::both;
            return convergence_time(r, eps, n);
        },
        py::arg("result"), py::arg("epsilon"), py::arg("norm") = "both");
    m.def("chattering_index", py::overload_cast<const SimResult&, double>(&chattering_index),
          py::arg("result"), py::arg("window"));
    m.def(
        "lemma1_oracle",
        [](double alpha, const std::vector<double>& grid, double step) {
            py::list rows;
            for (const auto& r : lemma1_oracle(alpha, grid, step))
                rows.append(py::make_tuple(r.a, r.analytic, r.numeric, r.rel_err));
            return rows;
        },
        py::arg("alpha"), py::arg("grid"), py::arg("relative_step") = kDefaultLemmaStep,
        "Rows of (a, analytic, numeric, rel_err).");

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("controller", &ScenarioConfig::controller)
        .def_property(
            "disturbance", [](const ScenarioConfig& c) { return Disturbance{c.disturbance}; },
            [](ScenarioConfig& c, const Disturbance& d) { c.disturbance = d.model; })
        .def_readwrite("sim", &ScenarioConfig::sim)
        .def("__str__", &format_scenario);

    m.def("preset_names", &preset_names);
    m.def("preset", [](const std::string& name) {
        auto c = find_preset(name);
        if (!c) throw ConfigError("unknown preset '" + name + "'");
        return *c;
    });
    m.def("load_scenario", [](const std::string& path) { return load_scenario(path); });
    m.def(
        "run_scenario",
        [](const ScenarioConfig& c) {
            SimResult r;
            {
                py::gil_scoped_release release;
                c.validate();
                r = ptsmc::run(c.sim, c.controller, c.disturbance);
            }
            return py::make_tuple(r, summary_dict(summarize(r, c)));
        },
        py::arg("scenario"), "Returns (SimResult, summary dict).");
}
