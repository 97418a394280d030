#pragma once

#include <vector>

#include "cavitysim/models.hpp"
#include "cavitysim/operators.hpp"

namespace cavitysim {

constexpr double kTolSteadyState = 1e-9;

// d rho/dt = -i[H,rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
Matrix liouvillian_apply(const LindbladSystem& sys, const Matrix& rho);

// Column-major vectorized Liouvillian superoperator (dim^2 x dim^2).
Matrix liouvillian_matrix(const LindbladSystem& sys);

// Unique steady state via null-space solve of the vectorized Liouvillian
// with trace constraint; throws if the null space is degenerate (the
// message carries the detected degeneracy count).
Matrix steady_state(const LindbladSystem& sys);

// Fixed-step RK4 propagation of the master equation for time t (us).
// The step is refined so that ||L||*h <= 0.05; `steps` is a lower bound.
// Hermiticity is enforced by symmetrization each step.
Matrix evolve(const LindbladSystem& sys, const Matrix& rho0, double t,
              int steps = 0);

// Exact propagation of a time-independent segment via the matrix
// exponential of the vectorized Liouvillian.  Used for long
// piecewise-constant pulses where RK4 step counts would be prohibitive.
Matrix evolve_expm(const LindbladSystem& sys, const Matrix& rho0, double t);

// Cached propagator for repeated application at the same duration.
Matrix propagator_expm(const LindbladSystem& sys, double t);
Matrix apply_propagator(const Matrix& prop, const Matrix& rho);

struct EffectiveLindblad {
  Matrix op;           // full-dim x n_ground block: L_k Hnh^-1 V+
  bool detectable;     // inherited from the parent collapse channel
};

// Reiter-style effective operators on a ground subspace after adiabatic
// elimination of an excited subspace.
//   Hnh   = H_e - (i/2) sum_k (L_k^dag L_k)|_e
//   H_eff = -(1/2) V- [Hnh^-1 + (Hnh^-1)^dag] V+
//   L_eff = L_k Hnh^-1 V+
struct EffectiveSystem {
  Matrix effective_hamiltonian;           // n_ground x n_ground
  std::vector<EffectiveLindblad> lindblads;
  std::vector<int> ground_indices;

  // Total decay rate out of ground state column j, split by detectability.
  double rate(int j, bool detectable) const;
  double total_rate(int j) const;
};

// `ground` and `excited` are 0-based basis indices; `perturbation` is the
// drive coupling (full-dim matrix, its excited<-ground block is V+).
// Channel k is detectable if detect_flags[k] (defaults to all true).
EffectiveSystem adiabatic_eliminate(const LindbladSystem& sys,
                                    const std::vector<int>& ground,
                                    const std::vector<int>& excited,
                                    const Matrix& perturbation,
                                    const std::vector<bool>& detect_flags = {});

} // namespace cavitysim
