// Python bindings.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rydswap/report.hpp"

namespace py = pybind11;
using namespace rydswap;

namespace {

GateParams params_or_default(const std::string& variant, const std::optional<GateParams>& p) {
  return p ? *p : table1_params(parse_variant(variant));
}

py::dict report_dict(const GateProtocol& proto, const GateReport& r) {
  py::dict d;
  d["u_gate"] = r.u_gate;
  d["ideal"] = proto.ideal;
  d["fidelity"] = r.fidelity;
  d["fidelity_with_loss"] = r.fidelity_with_loss;
  d["phase_optimized_fidelity"] = r.phase_optimized_fidelity;
  d["rotation_fidelity"] = rotation_fidelity(r.u_gate, proto.ideal);
  d["loss"] = r.loss;
  d["loss_matrix"] = Eigen::MatrixXd(r.loss_matrix.real());
  d["mean_loss"] = r.mean_loss;
  d["rydberg_time"] = r.rydberg_time;
  d["t_bar_r"] = r.t_bar_r;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rydswap, m) {
  m.doc() = "Pulse-level simulator of Rydberg SWAP and controlled-SWAP gates";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<GateParams>(m, "GateParams")
      .def(py::init<>())
      .def_readwrite("omega1_max", &GateParams::omega1_max)
      .def_readwrite("omega2", &GateParams::omega2)
      .def_readwrite("delta", &GateParams::delta)
      .def_readwrite("v_tt", &GateParams::v_tt)
      .def_readwrite("v_ct", &GateParams::v_ct)
      .def_readwrite("v_ct_targets", &GateParams::v_ct_targets)
      .def_readwrite("v_cc", &GateParams::v_cc)
      .def_readwrite("v_block", &GateParams::v_block)
      .def_readwrite("gate_time", &GateParams::gate_time)
      .def_readwrite("sigma_ratio", &GateParams::sigma_ratio)
      .def_readwrite("omega_c", &GateParams::omega_c)
      .def_readwrite("tau", &GateParams::tau)
      .def_readwrite("controls", &GateParams::controls)
      .def("__repr__", [](const GateParams& p) {
        return "GateParams(omega2/2pi=" + fmt(p.omega2 / kTwoPi) + " MHz, delta/2pi=" + fmt(p.delta / kTwoPi) +
               " MHz, T=" + fmt(p.gate_time) + " us)";
      });

  m.def("variants", [] {
    std::vector<std::string> out;
    for (Variant v : {Variant::kSwap, Variant::kISwap, Variant::kSqrtISwap, Variant::kBSwap, Variant::kCISwap,
                      Variant::kCSwapCCSdag, Variant::kCkSwap, Variant::kMuxSwap4T, Variant::kMuxSwap3T}) {
      out.push_back(variant_name(v));
    }
    return out;
  });
  m.def("table1_params", [](const std::string& v) { return table1_params(parse_variant(v)); }, py::arg("variant"));

  m.def(
      "run_gate",
      [](const std::string& variant, const std::optional<GateParams>& params, bool with_loss) {
        const GateProtocol proto = make_protocol(parse_variant(variant), params_or_default(variant, params));
        RunOptions opt;
        opt.with_loss = with_loss;
        opt.phase_optimized = true;
        GateReport r;
        {
          py::gil_scoped_release release;
          r = run_gate(proto, nullptr, opt);
        }
        return report_dict(proto, r);
      },
      py::arg("variant"), py::arg("params") = py::none(), py::arg("with_loss") = true);

  m.def("process_fidelity", &process_fidelity, py::arg("u"), py::arg("ideal"));
  m.def("rotation_fidelity", &rotation_fidelity, py::arg("u"), py::arg("ideal"));

  m.def(
      "effective_params",
      [](double o1, double o2, double delta, double v) {
        const EffectiveParams e = effective_params(o1, o2, delta, v);
        py::dict d;
        d["a"] = e.a;
        d["b"] = e.b;
        d["c"] = e.c;
        d["omega_eff"] = e.omega_eff;
        d["lambda0"] = e.lambda0;
        d["lambda_minus"] = e.lambda_minus;
        d["lambda_plus"] = e.lambda_plus;
        d["eigvec_minus"] = Eigen::VectorXd(e.eigvec_minus);
        d["eigvec_plus"] = Eigen::VectorXd(e.eigvec_plus);
        return d;
      },
      py::arg("omega1"), py::arg("omega2"), py::arg("delta"), py::arg("v"));
  m.def("dark_state", [](double o1, double o2) { return Eigen::VectorXd(dark_state(o1, o2)); }, py::arg("omega1"),
        py::arg("omega2"));
  m.def(
      "swap_time_estimate",
      [](double o1, double delta) {
        const SwapTimeEstimate s = swap_time_estimate(o1, delta);
        return py::make_tuple(s.full, s.half);
      },
      py::arg("omega1_max"), py::arg("delta"));
  m.def(
      "predict_phases",
      [](double o2, double delta, double v, double t) {
        const PhasePrediction p = predict_phases(o2, delta, v, t);
        py::dict d;
        d["r_c01"] = p.r_c01;
        d["one_c01"] = p.one_c01;
        d["r_c00"] = p.r_c00;
        d["r_c11"] = p.r_c11;
        d["one_c11"] = p.one_c11;
        return d;
      },
      py::arg("omega2"), py::arg("delta"), py::arg("v"), py::arg("t"));
  m.def(
      "calibrate_swap_time",
      [](const std::string& variant, const std::optional<GateParams>& params, double seed, bool half_rotation) {
        CalibrationOptions opt;
        opt.half_rotation = half_rotation;
        py::gil_scoped_release release;
        return calibrate_swap_time(params_or_default(variant, params), seed, opt).gate_time;
      },
      py::arg("variant"), py::arg("params") = py::none(), py::arg("seed"), py::arg("half_rotation") = false);

  m.def(
      "doppler_sigma",
      [](double temperature_k, double mass_kg, double lambda1_m, double lambda2_m, bool counter) {
        return doppler_sigma({temperature_k, mass_kg, lambda1_m, lambda2_m, counter});
      },
      py::arg("temperature_k"), py::arg("mass_kg") = 2.2069e-25, py::arg("lambda1_m") = 459.6e-9,
      py::arg("lambda2_m") = 1040e-9, py::arg("counter_propagating") = true);
  m.def(
      "monte_carlo_fidelity",
      [](const std::string& variant, const std::optional<GateParams>& params, double temp_uk, double omega1_width,
         double omega2_width, int shots, std::uint64_t seed, int jobs) {
        NoiseSpec spec;
        spec.doppler.temperature = temp_uk * 1e-6;
        spec.intensity.microwave_width = omega1_width;
        spec.intensity.rydberg_width = omega2_width;
        spec.n_shots = shots;
        spec.seed = seed;
        const GateProtocol proto = make_protocol(parse_variant(variant), params_or_default(variant, params));
        MonteCarloResult r;
        {
          py::gil_scoped_release release;
          r = monte_carlo_fidelity(proto, spec, jobs);
        }
        py::dict d;
        d["mean"] = r.mean_fidelity;
        d["std"] = r.std_fidelity;
        d["fidelities"] = r.fidelities;
        return d;
      },
      py::arg("variant"), py::arg("params") = py::none(), py::arg("temp_uK") = 0.0, py::arg("omega1_width") = 0.0,
      py::arg("omega2_width") = 0.0, py::arg("shots") = 40, py::arg("seed") = 1, py::arg("jobs") = 0);

  m.def("list_presets", &list_presets);
  m.def(
      "run_scenario",
      [](const std::string& config_or_preset, const std::vector<std::string>& overrides, const std::string& out,
         int jobs) {
        const bool is_file = config_or_preset.find('/') != std::string::npos ||
                             (config_or_preset.size() > 5 &&
                              config_or_preset.compare(config_or_preset.size() - 5, 5, ".yaml") == 0);
        const ScenarioConfig cfg =
            load_config(is_file ? config_or_preset : preset_path(config_or_preset), overrides);
        RunContext ctx;
        ctx.out_dir = out;
        ctx.jobs = jobs;
        ScenarioOutcome res;
        {
          py::gil_scoped_release release;
          res = run_scenario(cfg, ctx);
        }
        py::dict d;
        for (const auto& [k, v] : res.summary) d[py::str(k)] = v;
        d["files"] = res.files;
        d["passed"] = res.passed;
        return d;
      },
      py::arg("config"), py::arg("overrides") = std::vector<std::string>{}, py::arg("out") = "",
      py::arg("jobs") = 0);
}
