#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "cavitysim/spectra.hpp"

using namespace cavitysim;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

} // namespace

TEST_CASE("analytic probe transmission: vacuum Rabi splitting") {
  CavityParams p;
  p.omega_probe = 1.0;

  SUBCASE("bare cavity: single Lorentzian at zero") {
    CavityParams q = p;
    q.g_A = q.g_B = 0.0;
    auto s = probe_transmission_analytic(q, grid(-250, 250, 1001));
    auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0] == doctest::Approx(0.0).epsilon(1e-6));
  }

  SUBCASE("one atom: doublet at +-g") {
    CavityParams q = p;
    q.g_B = 0.0;
    auto s = probe_transmission_analytic(q, grid(-250, 250, 1001));
    auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0] == doctest::Approx(-100.0).epsilon(0.01));
    CHECK(peaks[1] == doctest::Approx(100.0).epsilon(0.01));
  }

  SUBCASE("two atoms: doublet at +-sqrt(2) g") {
    auto s = probe_transmission_analytic(p, grid(-250, 250, 1001));
    auto peaks = find_peaks(s);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0] == doctest::Approx(-std::sqrt(2.0) * 100.0).epsilon(0.01));
    CHECK(peaks[1] == doctest::Approx(std::sqrt(2.0) * 100.0).epsilon(0.01));
  }
}

TEST_CASE("numeric steady-state spectrum matches the analytic line shape") {
  CavityParams p;
  p.g_B = 0.0;
  p.omega_probe = 0.05; // weak-probe regime
  auto dps = grid(-180, 180, 41);
  auto ana = probe_transmission_analytic(p, dps);
  auto num = probe_transmission_numeric(p, 1, dps, 2);
  // normalize both to their maxima and compare
  double ma = 0, mn = 0;
  for (double v : ana.signal) ma = std::max(ma, v);
  for (double v : num.signal) mn = std::max(mn, v);
  for (std::size_t i = 0; i < dps.size(); ++i)
    CHECK(num.signal[i] / mn ==
          doctest::Approx(ana.signal[i] / ma).epsilon(0.02).scale(1.0));
}

// Least-squares amplitude + background of the bright-only analytic shape;
// what survives at each point is the part the linear-response model cannot
// produce (the invariant above shows it has no central feature).
static std::vector<double> bright_model_residual(const Spectrum& numeric,
                                                 const Spectrum& analytic) {
  const std::size_t n = numeric.signal.size();
  Eigen::MatrixXd m(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, 0) = analytic.signal[i];
    m(i, 1) = 1.0;
    y(i) = numeric.signal[i];
  }
  Eigen::VectorXd r = y - m * m.colPivHouseholderQr().solve(y);
  return {r.data(), r.data() + n};
}

TEST_CASE("side drive: two-atom dark-state feature") {
  CavityParams p;
  p.omega_side_A = p.omega_side_B = 3.0; // strong enough to populate |D>
  auto dps = grid(-200, 200, 17);        // includes 0
  // fock 3: the dark state emits via the doubly-excited cascade
  auto s1 = side_drive_spectrum_numeric(p, 1, dps, 0.0, 3);
  auto s2 = side_drive_spectrum_numeric(p, 2, dps, 0.0, 3);
  std::size_t mid = dps.size() / 2;
  REQUIRE(dps[mid] == doctest::Approx(0.0));
  // central local maximum appears only with two atoms
  CHECK(s2.signal[mid] > s2.signal[mid - 1]);
  CHECK(s2.signal[mid] > s2.signal[mid + 1]);
  CHECK(s1.signal[mid] < s1.signal[mid - 1]);
  CHECK(s1.signal[mid] < s1.signal[mid + 1]);
  // the central-peak amplitude above the bright-state background dwarfs
  // whatever the one-atom trace leaves behind at resonance
  auto r1 = bright_model_residual(s1, side_drive_spectrum_analytic(p, 1, dps));
  auto r2 = bright_model_residual(s2, side_drive_spectrum_analytic(p, 2, dps));
  CHECK(r2[mid] > 10.0 * std::max(std::abs(r1[mid]), 1e-12));
  CHECK(r2[mid] > 0.3 * *std::max_element(s2.signal.begin(), s2.signal.end()));
  // bright-state shoulders sit near +-sqrt(2) g for two atoms
  auto peaks2 = find_peaks(s2);
  REQUIRE(peaks2.size() >= 3);
}

TEST_CASE("analytic side drive: out-of-phase drive cancels at resonance") {
  CavityParams p;
  p.omega_side_A = p.omega_side_B = 0.3;
  p.phi_rel = M_PI;
  auto s = side_drive_spectrum_analytic(p, 2, {0.0});
  CHECK(s.signal[0] == doctest::Approx(0.0));
}

TEST_CASE("fit recovers parameters from noiseless synthetic spectra") {
  CavityParams p;
  p.omega_probe = 1.0;
  auto dps = grid(-220, 220, 121);
  std::vector<LabeledSpectrum> data;
  for (int n_atoms : {0, 1, 2}) {
    CavityParams q = p;
    if (n_atoms < 2) q.g_B = 0;
    if (n_atoms < 1) q.g_A = 0;
    data.push_back({probe_transmission_analytic(q, dps), n_atoms});
  }
  auto fit = fit_cavity_params(data, 80.0, 80.0, 6.0);
  CHECK(fit.converged);
  CHECK(fit.g == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(fit.kappa == doctest::Approx(65.0).epsilon(1e-6));
}

TEST_CASE("fit with noise keeps errors calibrated") {
  CavityParams p;
  p.omega_probe = 1.0;
  auto dps = grid(-220, 220, 121);
  std::mt19937_64 rng(7);
  std::vector<LabeledSpectrum> data;
  for (int n_atoms : {0, 1, 2}) {
    CavityParams q = p;
    if (n_atoms < 2) q.g_B = 0;
    if (n_atoms < 1) q.g_A = 0;
    auto s = probe_transmission_analytic(q, dps);
    double top = 0;
    for (double v : s.signal) top = std::max(top, v);
    std::normal_distribution<double> n01(0.0, 0.01 * top);
    for (double& v : s.signal) v += n01(rng);
    data.push_back({s, n_atoms});
  }
  auto fit = fit_cavity_params(data, 90.0, 75.0, 6.0);
  CHECK(fit.converged);
  CHECK(std::abs(fit.g - 100.0) < 5.0 * std::max(fit.g_err, 1e-3));
  CHECK(std::abs(fit.kappa - 65.0) < 5.0 * std::max(fit.kappa_err, 1e-3));
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(fit_cavity_params({}, 100, 65), std::invalid_argument);
}

TEST_CASE("loss spectrum grows with drive resonance") {
  Rb87Params p;
  p.omega = 1.0;
  auto s = loss_spectrum(p, 4, 5.0, {2000.0, 0.0});
  // resonant drive scatters much more than a far-detuned one
  CHECK(s.signal[1] > 3.0 * s.signal[0]);
  CHECK_THROWS_AS(loss_spectrum(p, 1, 5.0, {0.0}), std::invalid_argument);
}

TEST_CASE("find_peaks interpolates between samples") {
  Spectrum s;
  s.detunings_mhz = grid(-10, 10, 21);
  for (double x : s.detunings_mhz)
    s.signal.push_back(1.0 / (1.0 + (x - 0.5) * (x - 0.5)));
  auto peaks = find_peaks(s);
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0] == doctest::Approx(0.5).epsilon(0.05));
}
