#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cavitysim/dynamics.hpp"
#include "cavitysim/models.hpp"

namespace cavitysim {

enum class SpectrumAxis { Probe, Cavity };
enum class SpectrumMethod { Analytic, NumericSteadyState };

struct Spectrum {
  std::vector<double> detunings_mhz;
  std::vector<double> signal; // photon-number proportional, >= 0
  SpectrumAxis axis = SpectrumAxis::Probe;
  SpectrumMethod method = SpectrumMethod::Analytic;
  std::string label;
};

// Weak-probe intracavity photon number with generalized complex detunings
//   kt = kappa/2 - i Dc,  gt = gamma/2 - i Da,  Ct_i = g_i^2/(kt gt),
//   n  = | omega_probe sqrt(kappa) / ((1 + Ct_A + Ct_B) kt) |^2.
// The sweep is over the probe detuning Delta_P: Da = delta_a - Delta_P,
// Dc = delta_c - Delta_P (delta_a/delta_c are the static offsets in p).
Spectrum probe_transmission_analytic(const CavityParams& p,
                                     const std::vector<double>& probe_detunings);

// Weak side-drive analytic counterpart:
//   n = | sqrt(gamma kappa)/(kt gt) * (Omega_A Ct_A/gt... ) | -- evaluated
// directly from the steady-state linear response of the driven atoms.
Spectrum side_drive_spectrum_analytic(const CavityParams& p, int n_atoms,
                                      const std::vector<double>& probe_detunings);

// Numeric steady-state <a^dag a> over a probe-detuning sweep, averaging the
// in-phase and out-of-phase side drive (phi_rel in {0, pi}) when both atoms
// are driven.
Spectrum side_drive_spectrum_numeric(const CavityParams& p, int n_atoms,
                                     const std::vector<double>& probe_detunings,
                                     double delta_c, int fock_levels = 2);

// Numeric steady-state cavity-probe transmission spectrum.
Spectrum probe_transmission_numeric(const CavityParams& p, int n_atoms,
                                    const std::vector<double>& probe_detunings,
                                    int fock_levels = 2);

struct FitResult {
  double g = 0.0, kappa = 0.0;
  double g_err = 0.0, kappa_err = 0.0;
  std::vector<double> amplitudes; // per trace
  std::vector<double> offsets;    // per trace
  double residual_norm = 0.0;
  Eigen::MatrixXd covariance;
  int iterations = 0;
  bool converged = false;
};

struct LabeledSpectrum {
  Spectrum spectrum;
  int n_atoms = 0; // 0, 1 or 2
};

// Simultaneous damped Gauss-Newton fit of (g, kappa) across bare/one/two-atom
// probe spectra with per-trace amplitude and additive offset.  Damping
// schedule: x10 on failed step, /10 on success, start 1e-3.  Throws on
// non-convergence (message carries best-so-far parameters).
FitResult fit_cavity_params(const std::vector<LabeledSpectrum>& spectra,
                            double g_guess, double kappa_guess,
                            double gamma_fixed = 6.0, int max_iter = 200);

// Probability of error-state population after an Omega pulse of given
// length, vs drive detuning, via the full 28-state model.
Spectrum loss_spectrum(const Rb87Params& p, int initial_state_1based,
                       double pulse_time_us,
                       const std::vector<double>& detunings);

// Peak positions (quadratic interpolation around local maxima).
std::vector<double> find_peaks(const Spectrum& s, double min_rel_height = 0.05);

} // namespace cavitysim
