#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cavitysim/dynamics.hpp"
#include "cavitysim/models.hpp"
#include "cavitysim/protocols.hpp"
#include "cavitysim/readout.hpp"
#include "cavitysim/spectra.hpp"

namespace py = pybind11;
using namespace cavitysim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "cavity-QED simulation and analysis toolkit";
  m.attr("__version__") = "0.1.0";

  // ---- models --------------------------------------------------------
  py::class_<CavityParams>(m, "CavityParams")
      .def(py::init<>())
      .def_readwrite("g_A", &CavityParams::g_A)
      .def_readwrite("g_B", &CavityParams::g_B)
      .def_readwrite("kappa", &CavityParams::kappa)
      .def_readwrite("gamma", &CavityParams::gamma)
      .def_readwrite("delta_c", &CavityParams::delta_c)
      .def_readwrite("delta_a", &CavityParams::delta_a)
      .def_readwrite("omega_probe", &CavityParams::omega_probe)
      .def_readwrite("omega_side_A", &CavityParams::omega_side_A)
      .def_readwrite("omega_side_B", &CavityParams::omega_side_B)
      .def_readwrite("phi_rel", &CavityParams::phi_rel);

  py::class_<Rb87Params>(m, "Rb87Params")
      .def(py::init<>())
      .def_readwrite("g", &Rb87Params::g)
      .def_readwrite("kappa", &Rb87Params::kappa)
      .def_readwrite("gamma", &Rb87Params::gamma)
      .def_readwrite("omega", &Rb87Params::omega)
      .def_readwrite("delta", &Rb87Params::delta)
      .def_readwrite("delta2", &Rb87Params::delta2)
      .def_readwrite("delta3", &Rb87Params::delta3)
      .def("coop", &Rb87Params::coop);

  py::class_<FiguresOfMerit>(m, "FiguresOfMerit")
      .def_readonly("cooperativity", &FiguresOfMerit::cooperativity)
      .def_readonly("finesse", &FiguresOfMerit::finesse)
      .def_readonly("fsr_mhz", &FiguresOfMerit::fsr_mhz);
  m.def("figures_of_merit", &figures_of_merit, py::arg("g"), py::arg("kappa"),
        py::arg("gamma"), py::arg("cavity_length_um"));
  m.def("coupling_profile", &coupling_profile);

  py::class_<LindbladSystem>(m, "LindbladSystem")
      .def_property_readonly(
          "hamiltonian", [](const LindbladSystem& s) { return s.hamiltonian.m; })
      .def_property_readonly("collapse_ops",
                             [](const LindbladSystem& s) {
                               std::vector<Matrix> out;
                               for (const auto& l : s.collapse_ops)
                                 out.push_back(l.m);
                               return out;
                             })
      .def_readonly("basis_labels", &LindbladSystem::basis_labels)
      .def_readonly("detectable_sinks", &LindbladSystem::detectable_sinks)
      .def_readonly("nondetectable_sinks", &LindbladSystem::nondetectable_sinks)
      .def("dim", &LindbladSystem::dim);
  m.def("build_tavis_cummings", &build_tavis_cummings, py::arg("params"),
        py::arg("n_atoms"), py::arg("fock_levels"));
  m.def("build_rb87_two_atom", &build_rb87_two_atom);

  // ---- dynamics ------------------------------------------------------
  m.def("steady_state", &steady_state);
  m.def("evolve", &evolve, py::arg("system"), py::arg("rho0"), py::arg("t"),
        py::arg("steps") = 0);
  m.def("evolve_expm", &evolve_expm);

  // ---- spectra -------------------------------------------------------
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("detunings_mhz", &Spectrum::detunings_mhz)
      .def_readonly("signal", &Spectrum::signal)
      .def_readonly("label", &Spectrum::label);
  m.def("probe_transmission_analytic", &probe_transmission_analytic);
  m.def("side_drive_spectrum_analytic", &side_drive_spectrum_analytic);
  m.def("probe_transmission_numeric", &probe_transmission_numeric,
        py::arg("params"), py::arg("n_atoms"), py::arg("probe_detunings"),
        py::arg("fock_levels") = 2);
  m.def("side_drive_spectrum_numeric", &side_drive_spectrum_numeric,
        py::arg("params"), py::arg("n_atoms"), py::arg("probe_detunings"),
        py::arg("delta_c"), py::arg("fock_levels") = 2);
  m.def("find_peaks", &find_peaks, py::arg("spectrum"),
        py::arg("min_rel_height") = 0.05);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("g", &FitResult::g)
      .def_readonly("kappa", &FitResult::kappa)
      .def_readonly("g_err", &FitResult::g_err)
      .def_readonly("kappa_err", &FitResult::kappa_err)
      .def_readonly("residual_norm", &FitResult::residual_norm)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged);
  m.def(
      "fit_cavity_params",
      [](const std::vector<std::pair<Spectrum, int>>& traces, double g_guess,
         double kappa_guess, double gamma_fixed, int max_iter) {
        std::vector<LabeledSpectrum> data;
        for (const auto& [s, n] : traces) data.push_back({s, n});
        return fit_cavity_params(data, g_guess, kappa_guess, gamma_fixed,
                                 max_iter);
      },
      py::arg("traces"), py::arg("g_guess"), py::arg("kappa_guess"),
      py::arg("gamma_fixed") = 6.0, py::arg("max_iter") = 200);

  // ---- readout -------------------------------------------------------
  m.def("optimal_threshold", &optimal_threshold);
  m.def(
      "readout_error_probs",
      [](double mu_low, double mu_high, int k) {
        return readout_error_probs({mu_low, mu_high, k});
      },
      py::arg("mu_low"), py::arg("mu_high"), py::arg("k_threshold"));
  m.def("clopper_pearson", &clopper_pearson, py::arg("successes"),
        py::arg("trials"), py::arg("confidence") = 0.95);
  m.def("poisson_pmf", &poisson_pmf);
  m.def("poisson_cdf", &poisson_cdf);

  // ---- protocols -----------------------------------------------------
  py::class_<CarvingOutcome>(m, "CarvingOutcome")
      .def_readonly("fidelity", &CarvingOutcome::fidelity)
      .def_readonly("success_probability", &CarvingOutcome::success_probability)
      .def_readonly("pulse_time_us", &CarvingOutcome::pulse_time_us);
  m.def("carving_outcome_simplified", &carving_outcome_simplified,
        py::arg("omega"), py::arg("gamma"), py::arg("cooperativity"),
        py::arg("t_us"));
  m.def("carving_outcome_rb87", &carving_outcome_rb87, py::arg("params"),
        py::arg("t_us"), py::arg("exact_rates") = true);
  m.def("carving_ceiling_rb87", &carving_ceiling_rb87, py::arg("params"),
        py::arg("exact_rates") = true);

  py::class_<CarvingRates>(m, "CarvingRates")
      .def_readonly("delta3_tilde", &CarvingRates::delta3_tilde)
      .def_readonly("delta4_tilde", &CarvingRates::delta4_tilde)
      .def_readonly("gamma3d", &CarvingRates::gamma3d)
      .def_readonly("gamma3nd", &CarvingRates::gamma3nd)
      .def_readonly("gamma4d", &CarvingRates::gamma4d)
      .def_readonly("gamma4nd", &CarvingRates::gamma4nd);
  m.def("carving_rates_rb87", &carving_rates_rb87, py::arg("params"),
        py::arg("exact") = true);

  py::class_<GateMetrics>(m, "GateMetrics")
      .def_readonly("omega_opt", &GateMetrics::omega_opt)
      .def_readonly("f_uncorr", &GateMetrics::f_uncorr)
      .def_readonly("p_success", &GateMetrics::p_success)
      .def_readonly("f_corr", &GateMetrics::f_corr)
      .def_readonly("f_phase_corrected", &GateMetrics::f_phase_corrected)
      .def_readonly("alpha", &GateMetrics::alpha)
      .def_readonly("alpha_balanced_p", &GateMetrics::alpha_balanced_p)
      .def_readonly("t_gate_us", &GateMetrics::t_gate_us);
  m.def("cz_gate_metrics_simplified", &cz_gate_metrics_simplified,
        py::arg("gamma"), py::arg("kappa"), py::arg("g"),
        py::arg("omega") = std::nullopt);
  m.def("cz_gate_metrics_simplified_coop", &cz_gate_metrics_simplified_coop,
        py::arg("gamma"), py::arg("kappa"), py::arg("cooperativity"),
        py::arg("omega") = std::nullopt);
  m.def("cz_gate_metrics_rb87", &cz_gate_metrics_rb87, py::arg("params"),
        py::arg("t_gate_us") = std::nullopt);
  m.def("cz_gate_optimal_rb87", &cz_gate_optimal_rb87, py::arg("params"));

  py::enum_<BellTarget>(m, "BellTarget")
      .value("PhiPlus", BellTarget::PhiPlus)
      .value("PhiMinus", BellTarget::PhiMinus);
  py::class_<BellFidelity>(m, "BellFidelity")
      .def_readonly("fidelity", &BellFidelity::fidelity)
      .def_readonly("uncertainty", &BellFidelity::uncertainty);
  m.def(
      "bell_fidelity",
      [](const std::vector<std::vector<double>>& pops,
         const std::vector<std::vector<double>>& errs, BellTarget target) {
        if (pops.size() != 3)
          throw std::invalid_argument("populations must be 3x4 (x, y, z bases)");
        MeasurementSet ms;
        for (int b = 0; b < 3; ++b) {
          if (pops[b].size() != 4)
            throw std::invalid_argument("populations must be 3x4");
          for (int i = 0; i < 4; ++i) ms.populations[b][i] = pops[b][i];
          if (!errs.empty())
            for (int i = 0; i < 4; ++i) ms.errors[b][i] = errs[b][i];
        }
        return bell_fidelity(ms, target);
      },
      py::arg("populations"), py::arg("errors") = std::vector<std::vector<double>>{},
      py::arg("target") = BellTarget::PhiMinus);
  m.def("bell_fidelity_from_density", [](const Matrix& rho, BellTarget target) {
    return bell_fidelity(measurement_set_from_density(rho), target);
  });
}
