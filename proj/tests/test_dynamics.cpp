#include "doctest.h"

#include <cmath>

#include "cavitysim/dynamics.hpp"

using namespace cavitysim;

namespace {

// Decaying driven two-level atom.
LindbladSystem two_level(double omega, double gamma, double delta = 0.0) {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = delta;
  h(1, 0) = omega;
  h(0, 1) = omega;
  LindbladSystem sys;
  sys.hamiltonian = Operator(h);
  Matrix l = Matrix::Zero(2, 2);
  l(0, 1) = std::sqrt(gamma);
  sys.collapse_ops.push_back(Operator(l));
  return sys;
}

} // namespace

TEST_CASE("liouvillian_matrix agrees with direct application") {
  auto sys = two_level(1.3, 0.7, 0.4);
  Matrix rho(2, 2);
  rho << 0.6, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.4;
  Matrix direct = liouvillian_apply(sys, rho);
  Matrix sup = liouvillian_matrix(sys);
  Eigen::VectorXcd v = sup * Eigen::Map<const Eigen::VectorXcd>(rho.data(), 4);
  Matrix via_sup = Eigen::Map<const Matrix>(v.data(), 2, 2);
  CHECK((direct - via_sup).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("liouvillian preserves trace and hermiticity") {
  auto sys = two_level(2.0, 1.0);
  Matrix rho(2, 2);
  rho << 0.7, Complex(0.0, 0.1), Complex(0.0, -0.1), 0.3;
  Matrix d = liouvillian_apply(sys, rho);
  CHECK(std::abs(d.trace()) == doctest::Approx(0.0));
  CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("steady state of the driven damped atom matches optical Bloch") {
  double omega = 1.5, gamma = 2.0;
  auto sys = two_level(omega, gamma);
  Matrix rho = steady_state(sys);
  // resonant two-level: P_e = s/2/(1+s), s = 8 omega^2 / gamma^2
  double s = 8.0 * omega * omega / (gamma * gamma);
  CHECK(rho(1, 1).real() == doctest::Approx(0.5 * s / (1.0 + s)));
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(check_density(rho).ok());
}

TEST_CASE("steady state rejects degenerate Liouvillians") {
  // no drive, no decay: every diagonal state is stationary
  LindbladSystem sys;
  sys.hamiltonian = Operator(Matrix::Zero(2, 2));
  CHECK_THROWS_AS(steady_state(sys), std::runtime_error);
}

TEST_CASE("RK4 evolution reproduces Rabi oscillation") {
  double omega = 3.0;
  auto sys = two_level(omega, 0.0);
  Matrix rho0 = Matrix::Zero(2, 2);
  rho0(0, 0) = 1.0;
  double t = 0.6;
  Matrix rho = evolve(sys, rho0, t);
  CHECK(rho(1, 1).real() ==
        doctest::Approx(std::sin(omega * t) * std::sin(omega * t)).epsilon(1e-6));
  CHECK(rho.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("expm propagation matches RK4 and composes") {
  auto sys = two_level(1.1, 0.9, 0.3);
  Matrix rho0 = Matrix::Zero(2, 2);
  rho0(1, 1) = 1.0;
  Matrix a = evolve(sys, rho0, 2.0);
  Matrix b = evolve_expm(sys, rho0, 2.0);
  CHECK((a - b).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-7));

  Matrix u1 = propagator_expm(sys, 0.7);
  Matrix c = apply_propagator(u1, apply_propagator(u1, rho0));
  Matrix d = evolve_expm(sys, rho0, 1.4);
  CHECK((c - d).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("evolution decays to the steady state") {
  auto sys = two_level(1.5, 2.0);
  Matrix rho0 = Matrix::Zero(2, 2);
  rho0(1, 1) = 1.0;
  Matrix late = evolve_expm(sys, rho0, 50.0);
  Matrix ss = steady_state(sys);
  CHECK((late - ss).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("adiabatic elimination of a detuned three-level Raman system") {
  // |g>, |m>, |e>: drive g->e (Omega), e decays to m at gamma, detuning D.
  double omega = 0.05, gamma = 1.0, delta = 20.0;
  Matrix h = Matrix::Zero(3, 3);
  h(2, 2) = delta;
  h(2, 0) = omega;
  h(0, 2) = omega;
  LindbladSystem sys;
  sys.hamiltonian = Operator(h);
  Matrix l = Matrix::Zero(3, 3);
  l(1, 2) = std::sqrt(gamma);
  sys.collapse_ops.push_back(Operator(l));

  Matrix v = Matrix::Zero(3, 3);
  v(2, 0) = omega;
  v(0, 2) = omega;
  auto eff = adiabatic_eliminate(sys, {0}, {2}, v);

  // light shift -Omega^2 D/(D^2 + gamma^2/4), scattering Omega^2 gamma/(D^2+gamma^2/4)
  double denom = delta * delta + gamma * gamma / 4.0;
  CHECK(eff.effective_hamiltonian(0, 0).real() ==
        doctest::Approx(-omega * omega * delta / denom));
  CHECK(eff.total_rate(0) == doctest::Approx(omega * omega * gamma / denom));
  CHECK(eff.rate(0, true) == doctest::Approx(eff.total_rate(0)));
  CHECK(eff.rate(0, false) == doctest::Approx(0.0));
}

TEST_CASE("adiabatic elimination input validation") {
  auto sys = two_level(1.0, 1.0);
  CHECK_THROWS_AS(adiabatic_eliminate(sys, {}, {1}, Matrix::Zero(2, 2)),
                  std::invalid_argument);
}
