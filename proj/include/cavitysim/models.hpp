#pragma once

#include <string>
#include <vector>

#include "cavitysim/atomic_data.hpp"
#include "cavitysim/operators.hpp"

namespace cavitysim {

// All frequencies are angular-MHz in the rotating frame; detunings are
// (resonance - drive).  kappa is the cavity FWHM with cavity decay split
// into two polarization operators of rate kappa/2 each (single operator
// sqrt(kappa)*a when unpolarized); gamma is the atomic linewidth.

struct CavityParams {
  double g_A = 100.0, g_B = 100.0; // atom-cavity couplings
  double kappa = 65.0;
  double gamma = 6.0;
  double delta_c = 0.0, delta_a = 0.0; // cavity / atom detunings from drive
  double omega_probe = 0.0;            // cavity drive amplitude
  double omega_side_A = 0.0, omega_side_B = 0.0; // side drives on the atoms
  double phi_rel = 0.0; // relative side-drive phase (0 in-phase, pi out)

  bool valid() const {
    return g_A >= 0 && g_B >= 0 && kappa >= 0 && gamma >= 0;
  }
};

struct Rb87Params {
  double g = 100.0;
  double kappa = 65.0;
  double gamma = 6.0;
  double omega = 0.1; // side drive on atom A
  double delta = 0.0; // drive detuning from |e>
  double delta2 = kDefaultDelta2Mhz;
  double delta3 = kDefaultDelta3Mhz;
  BranchingAggregates branching = branching_aggregates();
  double drive_ratio = 3.0; // the sqrt(9) coefficient, kept configurable

  double gamma_d() const { return branching.gamma_d_frac * gamma; }
  double gamma_nd() const { return branching.gamma_nd_frac * gamma; }
  double gamma_3d() const { return branching.gamma_3d_frac * gamma; }
  double gamma_3nd() const { return branching.gamma_3nd_frac * gamma; }
  // Lowercase cooperativity as used by the effective-rate expressions.
  double coop() const { return g * g / (kappa * gamma); }
};

struct LindbladSystem {
  Operator hamiltonian;
  std::vector<Operator> collapse_ops;
  std::vector<std::string> basis_labels;
  // Basis indices whose population counts as a detectable /
  // nondetectable error (populated by the Rb-87 builder).
  std::vector<int> detectable_sinks;
  std::vector<int> nondetectable_sinks;

  int dim() const { return hamiltonian.dim(); }
};

// Tavis-Cummings with two-level atoms, ordering atom A (x) atom B (x) cavity.
// H = delta_c a^dag a + sum_alpha (delta_a |e><e|_alpha
//     + g_alpha(|e><g|_alpha a + h.c.))
//     + omega_probe (a + a^dag)
//     + omega_side_A (|e><g|_A + h.c.) + omega_side_B e^{i phi}|e><g|_B + h.c.
// Collapse: sqrt(kappa) a, sqrt(gamma) |g><e|_alpha.
LindbladSystem build_tavis_cummings(const CavityParams& p, int n_atoms,
                                    int fock_levels);

// 28-state two-atom Rb-87 model over the enumerated basis |1>..|28>,
// with the verbatim coefficient pattern (sqrt(9), sqrt(1/8), signed L_c2)
// and all 10 Lindblad operators.
LindbladSystem build_rb87_two_atom(const Rb87Params& p);

// Axial coupling profile g(x) = a cos(2 pi (x - x0)/P) + c.
double coupling_profile(double x_um, double a, double x0_um, double period_um,
                        double c);

struct FiguresOfMerit {
  double cooperativity; // C = 4 g^2 / (kappa gamma)
  double finesse;       // FSR / kappa
  double fsr_mhz;       // c / (2 L)
};

FiguresOfMerit figures_of_merit(double g, double kappa, double gamma,
                                double cavity_length_um);

} // namespace cavitysim
