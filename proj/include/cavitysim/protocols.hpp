#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cavitysim/dynamics.hpp"
#include "cavitysim/models.hpp"

namespace cavitysim {

enum class CarvingModel { SimplifiedAnalytic, Rb87Effective, Rb87FullNumeric };

struct CarvingOutcome {
  double fidelity = 0.0;
  double success_probability = 1.0;
  double pulse_time_us = 0.0;
  CarvingModel model = CarvingModel::SimplifiedAnalytic;
};

// gamma_{|10>} = Omega^2/(2 gamma), gamma_{|11>} = Omega^2/(C gamma).
std::pair<double, double> carving_rates_simplified(double omega, double gamma,
                                                   double cooperativity);

// Echoed-carve amplitude damping on the qubit basis {00,01,10,11}:
// diag(e^{-g11 t/2}, e^{-g10 t/2}, e^{-g10 t/2}, e^{-g11 t/2}).
// Non-trace-preserving by design.
Matrix carve_operator(double gamma10, double gamma11, double t_us);

// P = (e^{-Omega^2 t/(C gamma)} + e^{-Omega^2 t/(2 gamma)})/2,
// F = e^{-Omega^2 t/(C gamma)}/(2P).
CarvingOutcome carving_outcome_simplified(double omega, double gamma,
                                          double cooperativity, double t_us);

// Effective carving rates of the two-atom Rb-87 model.  If `exact` the
// rates come from Reiter elimination of the full 28-state system;
// otherwise the closed-form large-C expressions are used (lowercase
// cooperativity c = g^2/(kappa gamma)).
struct CarvingRates {
  double delta3_tilde, delta4_tilde;
  double gamma3d, gamma3nd, gamma4d, gamma4nd;
  double gamma3() const { return gamma3d + gamma3nd; }
  double gamma4() const { return gamma4d + gamma4nd; }
};

CarvingRates carving_rates_rb87(const Rb87Params& p, bool exact = true);

CarvingOutcome carving_outcome_rb87(const Rb87Params& p, double t_us,
                                    bool exact_rates = true);

// Long-time plateau of the carving fidelity in the Gamma4/Gamma3 -> 0
// idealization: 1/(2 - Gamma3d/Gamma3).
double carving_ceiling_rb87(const Rb87Params& p, bool exact_rates = true);

// ---- pulse sequences -------------------------------------------------

struct PulseSegment {
  enum class Kind { Rotation, Drive, LocalZ, Wait } kind = Kind::Wait;
  // Rotation: global qubit rotation (axis x/y/z, angle) on both atoms.
  char axis = 'x';
  double angle = 0.0;
  // Drive / Wait: duration; Drive uses the system's built-in drive.
  double duration_us = 0.0;
  // LocalZ: phase on atom A's |1> component.
  double phase = 0.0;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
};

PulseSchedule spin_echo_carving(double pulse_time_us);
PulseSchedule carr_purcell_carving(double pulse_time_us);

// Composes exact segment propagation (matrix exponential of the
// Liouvillian for drive/wait) with instantaneous qubit rotations on the
// qubit manifold of the given system (4-dim manifold assumed first).
Matrix run_pulse_sequence(const LindbladSystem& sys,
                          const PulseSchedule& schedule, const Matrix& rho0);

// Post-selects rho on no population in the system's detectable sinks and
// returns (qubit 4x4 block renormalized, success probability).
std::pair<Matrix, double> post_select(const LindbladSystem& sys,
                                      const Matrix& rho);

// ---- CZ gate ---------------------------------------------------------

struct GateMetrics {
  double omega_opt = 0.0;
  double f_uncorr = 0.0;   // raw fidelity, no post-selection
  double p_success = 1.0;
  double f_corr = 0.0;     // error-detected (post-selected) fidelity
  double f_phase_corrected = 0.0; // after optimal local Z on atom A
  double alpha = 1.0;      // balancing amplitude
  double alpha_balanced_p = 1.0; // success probability at F_corr = 1
  double t_gate_us = 0.0;
};

// Simplified two-level model in the strong-coupling regime (g >> Omega >>
// gamma).  Cooperativity convention of the source expressions:
// C = g^2/(kappa gamma).  When omega is omitted, Omega_opt = sqrt(C/2) gamma.
//   F_uncorr = (1/16)(2 + e^{-pi gamma/(2 Omega)} + e^{-pi Omega/(C gamma)})^2
//   alpha = e^{-pi/sqrt(2C)}, balanced F_corr = 1, P = e^{-2 pi/sqrt(2C)}.
GateMetrics cz_gate_metrics_simplified(double gamma, double kappa, double g,
                                       std::optional<double> omega = {});

// Same model parametrized by cooperativity directly (g = sqrt(C kappa gamma)).
GateMetrics cz_gate_metrics_simplified_coop(double gamma, double kappa,
                                            double cooperativity,
                                            std::optional<double> omega = {});

// Full Rb-87 effective-rate gate metrics at t_g = sqrt(3) pi / Omega:
//   F = (1/(16 P_g)) |2 + e^{(i D3t - G3t/2) t_g} + e^{(i D4t - G4/2) t_g}|^2
// with G3t = (Gamma3 + GammaD)/2 composites.  f_corr is this post-selected
// fidelity; f_uncorr = P_g * f_corr; f_phase_corrected applies the optimal
// local Z.
GateMetrics cz_gate_metrics_rb87(const Rb87Params& p,
                                 std::optional<double> t_gate_us = {});

// Maximizes the error-detected fidelity over Omega in the validity window
// Omega <= g/10 (the "paper operating point").
GateMetrics cz_gate_optimal_rb87(Rb87Params p);

// ---- Bell-state fidelity from measured populations -------------------

struct MeasurementSet {
  // populations[basis][b], basis 0=x,1=y,2=z; b in {00,01,10,11}.
  std::array<std::array<double, 4>, 3> populations{};
  std::array<std::array<double, 4>, 3> errors{}; // standard errors, optional
};

enum class BellTarget { PhiPlus, PhiMinus };

std::pair<double, double> parity_and_trace(const MeasurementSet& m, int basis);

struct BellFidelity {
  double fidelity = 0.0;
  double uncertainty = 0.0;
};

// F = (1/4)(<Tr> +- Pi_x -+ Pi_y + Pi_z), upper signs for Phi+,
// uncorrelated error propagation.  Sub-unity trace allowed.
BellFidelity bell_fidelity(const MeasurementSet& m, BellTarget target);

// Populations a 4x4 density matrix would produce under ideal basis
// rotations (z: none; x: R_y(-pi/2) on both; y: R_x(pi/2) on both).
MeasurementSet measurement_set_from_density(const Matrix& rho4);

} // namespace cavitysim
