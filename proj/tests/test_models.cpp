#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "cavitysim/models.hpp"

using namespace cavitysim;

TEST_CASE("tavis-cummings single-excitation eigenstructure") {
  CavityParams p;
  p.g_A = 100.0;
  p.g_B = 100.0;
  p.kappa = 0.0;
  p.gamma = 0.0;

  SUBCASE("one atom: vacuum Rabi doublet at +-g") {
    auto sys = build_tavis_cummings(p, 1, 2);
    auto d = eigendecompose(sys.hamiltonian);
    // spectrum: {-g, 0, 0 (double excitation sector cut), +g}
    CHECK(d.eigenvalues.minCoeff() == doctest::Approx(-100.0));
    CHECK(d.eigenvalues.maxCoeff() == doctest::Approx(100.0));
  }

  SUBCASE("two atoms: bright states at +-sqrt(2) g and a dark state") {
    auto sys = build_tavis_cummings(p, 2, 2);
    auto d = eigendecompose(sys.hamiltonian);
    CHECK(d.eigenvalues.minCoeff() == doctest::Approx(-100.0 * std::sqrt(2.0)));
    CHECK(d.eigenvalues.maxCoeff() >= 100.0 * std::sqrt(2.0) - 1e-9);
    // the antisymmetric single-excitation state stays at zero energy
    Vector dark = Vector::Zero(sys.dim());
    // |e g 0> - |g e 0>; cavity is the last (fastest) factor, fock=2
    dark(2 * 2 * 1 + 0) = 1.0 / std::sqrt(2.0);  // |e,g,0>
    dark(2 * 1 + 0) = -1.0 / std::sqrt(2.0);     // |g,e,0>
    CHECK((sys.hamiltonian.m * dark).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("tavis-cummings collapse operators and validation") {
  CavityParams p;
  auto sys = build_tavis_cummings(p, 2, 3);
  CHECK(sys.dim() == 12);
  REQUIRE(sys.collapse_ops.size() == 3);
  // cavity decay rate kappa, atomic decay gamma
  double k = (sys.collapse_ops[0].m.adjoint() * sys.collapse_ops[0].m)
                 .diagonal()
                 .real()
                 .maxCoeff();
  CHECK(k == doctest::Approx(2.0 * p.kappa)); // <2|a^dag a|2> = 2
  CHECK_THROWS_AS(build_tavis_cummings(p, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_tavis_cummings(p, 1, 1), std::invalid_argument);
}

TEST_CASE("rb87 two-atom model structure") {
  Rb87Params p;
  auto sys = build_rb87_two_atom(p);
  CHECK(sys.dim() == 28);
  CHECK(sys.basis_labels.size() == 28);
  REQUIRE(sys.collapse_ops.size() == 10);
  CHECK(hermiticity_error(sys.hamiltonian.m) < kTolHermitian);

  // coupling pattern of the verbatim Hamiltonian
  const Matrix& H = sys.hamiltonian.m;
  CHECK(H(4, 2).real() == doctest::Approx(p.omega));          // |5><3|
  CHECK(H(6, 2).real() == doctest::Approx(-3.0 * p.omega));   // |7><3|
  CHECK(H(10, 8).real() == doctest::Approx(p.g));             // |11><9|
  CHECK(H(4, 8).real() == doctest::Approx(std::sqrt(2.0) * p.g));
  CHECK(H(11, 8).real() == doctest::Approx(std::sqrt(1.0 / 8.0) * p.g));
  CHECK(H(6, 6).real() == doctest::Approx(p.delta3));
  CHECK(H(11, 11).real() == doctest::Approx(p.delta2));

  // sink bookkeeping: detectable 13-18, 21, 22, 25-28; nondetectable 19, 20, 23, 24
  std::vector<int> det = sys.detectable_sinks;
  std::sort(det.begin(), det.end());
  CHECK(det == std::vector<int>{12, 13, 14, 15, 16, 17, 20, 21, 24, 25, 26, 27});
  std::vector<int> nd = sys.nondetectable_sinks;
  std::sort(nd.begin(), nd.end());
  CHECK(nd == std::vector<int>{18, 19, 22, 23});

  // cavity operators carry the sign convention of the printed pair
  CHECK(sys.collapse_ops[0].m(12, 8).real() ==
        doctest::Approx(std::sqrt(p.kappa / 2.0)));
  CHECK(sys.collapse_ops[1].m(14, 8).real() ==
        doctest::Approx(-std::sqrt(p.kappa / 2.0)));
}

TEST_CASE("rb87 aggregate rates follow branching fractions") {
  Rb87Params p;
  CHECK(p.gamma_d() == doctest::Approx(25.0 / 28.0 * p.gamma));
  CHECK(p.gamma_nd() == doctest::Approx(3.0 / 28.0 * p.gamma));
  CHECK(p.gamma_3d() == doctest::Approx(0.0));
  CHECK(p.gamma_3nd() == doctest::Approx(p.gamma));
  CHECK(p.coop() == doctest::Approx(100.0 * 100.0 / (65.0 * 6.0)));
}

TEST_CASE("coupling profile") {
  CHECK(coupling_profile(0.0, 50.0, 0.0, 10.0, 50.0) == doctest::Approx(100.0));
  CHECK(coupling_profile(5.0, 50.0, 0.0, 10.0, 50.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(coupling_profile(0, 1, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("figures of merit") {
  auto f = figures_of_merit(100.0, 65.0, 6.0, 100.0);
  CHECK(f.cooperativity == doctest::Approx(4.0 * 1e4 / 390.0));
  CHECK(f.fsr_mhz == doctest::Approx(1.49896229e6).epsilon(1e-6));

  // published finesse from the measured linewidth
  auto fp = figures_of_merit(100.0, 57.9, 6.0, 100.0);
  CHECK(fp.finesse == doctest::Approx(25904.0).epsilon(0.005));
  CHECK_THROWS_AS(figures_of_merit(100, 0, 6, 100), std::invalid_argument);
}
