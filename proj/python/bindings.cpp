// Copyright 2026 The d2dee Authors
// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "d2dee/acceptance.hpp"
#include "d2dee/bounds.hpp"
#include "d2dee/config.hpp"
#include "d2dee/energy.hpp"
#include "d2dee/errors.hpp"
#include "d2dee/simkit.hpp"
#include "d2dee/specfun.hpp"

namespace py = pybind11;
using namespace d2dee;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-aware D2D relay selection: special functions, bounds and campaigns";
  m.attr("__version__") = D2DEE_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_OverflowError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

  m.def("q_function", &specfun::q_function, py::arg("x"));
  m.def("erfi", &specfun::erfi, py::arg("x"));
  m.def("e1", [](double x) { return specfun::exp_integral(x, specfun::ExpIntegralKind::E1); }, py::arg("x"));
  m.def("ei", [](double x) { return specfun::exp_integral(x, specfun::ExpIntegralKind::Ei); }, py::arg("x"));

  m.def("direct_energy_j",
        [](double snr_linear, double tx_power_w, double circuit_power_w, double payload_bits,
           double bandwidth_hz) {
          energy::RadioParams p{tx_power_w, circuit_power_w, payload_bits, bandwidth_hz};
          p.validate();
          return energy::direct_energy(
                     channel::SnrSample::from_linear(snr_linear, channel::Hop::ToBaseStation), p)
              .total();
        },
        py::arg("snr_linear"), py::arg("tx_power_w") = 0.2, py::arg("circuit_power_w") = 0.1,
        py::arg("payload_bits") = 8192.0, py::arg("bandwidth_hz") = 2e5);
  m.def("optimal_power",
        [](double g, double pckt_w, double p_min_w, double p_max_w) {
          return energy::optimal_power(g, pckt_w, {p_min_w, p_max_w});
        },
        py::arg("g"), py::arg("pckt_w"), py::arg("p_min_w") = 1e-3, py::arg("p_max_w") = 0.2);

  py::class_<bounds::ShadowScenario>(m, "ShadowScenario")
      .def(py::init<>())
      .def_readwrite("mean_snr_db", &bounds::ShadowScenario::mean_snr_db)
      .def_readwrite("sigma_db", &bounds::ShadowScenario::sigma_db)
      .def_readwrite("gamma_th_db", &bounds::ShadowScenario::gamma_th_db)
      .def_readwrite("eta1", &bounds::ShadowScenario::eta1)
      .def_readwrite("eta2", &bounds::ShadowScenario::eta2)
      .def_readwrite("pckt_min_w", &bounds::ShadowScenario::pckt_min_w)
      .def_readwrite("pckt_max_w", &bounds::ShadowScenario::pckt_max_w)
      .def_readwrite("n_devices", &bounds::ShadowScenario::n_devices);

  py::class_<bounds::BoundPair>(m, "BoundPair")
      .def_readonly("lower", &bounds::BoundPair::lower)
      .def_readonly("upper", &bounds::BoundPair::upper)
      .def_readonly("oracle", &bounds::BoundPair::oracle)
      .def_readonly("closed_form_ok", &bounds::BoundPair::closed_form_ok);

  m.def("direct_bound", [](const bounds::ShadowScenario& s) { return bounds::direct_bound(s); });
  m.def("relay_upper_bound",
        [](const bounds::ShadowScenario& s) { return bounds::relay_upper_bound(s, bounds::RelayMethod::ClosedForm); });
  m.def("min_uniform_mean", &bounds::min_uniform_mean, py::arg("a"), py::arg("b"), py::arg("n"));

  m.def("parse_config_text",
        [](const std::string& text) { return config_to_text(parse_config_text(text)); },
        py::arg("text"), "Validates a scenario and returns its canonical key = value form.");
  m.def("config_keys", &config_keys);

  m.def("run_campaign",
        [](const std::string& config_text, const std::string& scheme, int n_devices) {
          const ScenarioConfig cfg = parse_config_text(config_text);
          const sim::Scheme s = sim::scheme_from_name(scheme);
          sim::CampaignResult r;
          {
            py::gil_scoped_release release;
            r = sim::run_campaign(cfg, s, n_devices);
          }
          py::dict d;
          d["scheme"] = sim::scheme_name(r.scheme);
          d["n_devices"] = r.n_devices;
          d["layout"] = r.layout;
          d["mean_energy_j"] = r.mean_energy_j;
          d["mean_energy_stderr"] = r.mean_energy_stderr;
          d["energy_efficiency_bpj"] = r.energy_efficiency_bpj;
          d["relay_fraction"] = r.relay_fraction;
          d["n_tx_until_depletion"] = r.n_tx_until_depletion;
          d["slots"] = r.slots;
          return d;
        },
        py::arg("config_text"), py::arg("scheme"), py::arg("n_devices"));

  m.def("run_acceptance",
        [](std::vector<int> only, std::uint64_t seed) {
          acceptance::Options opt;
          opt.only = std::move(only);
          opt.seed = seed;
          std::vector<std::tuple<int, std::string, bool, std::string>> out;
          for (const auto& r : acceptance::run(opt)) out.emplace_back(r.id, r.name, r.pass, r.measured);
          return out;
        },
        py::arg("only") = std::vector<int>{}, py::arg("seed") = acceptance::Options{}.seed);
}
