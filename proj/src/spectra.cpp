#include "cavitysim/spectra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cavitysim {

namespace {

struct Lorentz {
  Complex kt, gt, ctA, ctB;
};

// Generalized complex detunings at probe detuning dp.
Lorentz lorentz_terms(const CavityParams& p, int n_atoms, double dp) {
  Complex kt(p.kappa / 2.0, -(p.delta_c - dp));
  Complex gt(p.gamma / 2.0, -(p.delta_a - dp));
  Complex ctA = p.g_A * p.g_A / (kt * gt);
  Complex ctB = n_atoms > 1 ? p.g_B * p.g_B / (kt * gt) : Complex(0, 0);
  return {kt, gt, ctA, ctB};
}

Matrix number_operator(const LindbladSystem& sys) {
  // a^dag a from the recorded factor structure: cavity is the last factor.
  const auto& dims = sys.hamiltonian.subsystem_dims;
  int fock = dims.back();
  Operator n_op(Matrix::Zero(fock, fock));
  for (int m = 0; m < fock; ++m) n_op.m(m, m) = m;
  Operator full = n_op;
  for (std::size_t i = dims.size() - 1; i-- > 0;)
    full = tensor(identity(dims[i]), full);
  return full.m;
}

} // namespace

Spectrum probe_transmission_analytic(const CavityParams& p,
                                     const std::vector<double>& dps) {
  Spectrum s;
  s.detunings_mhz = dps;
  s.method = SpectrumMethod::Analytic;
  s.label = "probe_analytic";
  int n_atoms = (p.g_B > 0) ? 2 : (p.g_A > 0 ? 1 : 0);
  for (double dp : dps) {
    auto t = lorentz_terms(p, 2, dp);
    if (n_atoms < 2) t.ctB = 0;
    if (n_atoms < 1) t.ctA = 0;
    Complex amp = p.omega_probe * std::sqrt(p.kappa) /
                  ((1.0 + t.ctA + t.ctB) * t.kt);
    s.signal.push_back(std::norm(amp));
  }
  return s;
}

Spectrum side_drive_spectrum_analytic(const CavityParams& p, int n_atoms,
                                      const std::vector<double>& dps) {
  Spectrum s;
  s.detunings_mhz = dps;
  s.method = SpectrumMethod::Analytic;
  s.label = "side_analytic";
  for (double dp : dps) {
    auto t = lorentz_terms(p, n_atoms, dp);
    Complex drive = p.omega_side_A * p.g_A;
    if (n_atoms > 1)
      drive += p.omega_side_B * p.g_B * std::exp(Complex(0, p.phi_rel));
    Complex amp = std::sqrt(p.gamma) * drive /
                  (t.kt * t.gt * (1.0 + t.ctA + t.ctB));
    s.signal.push_back(std::norm(amp));
  }
  return s;
}

Spectrum probe_transmission_numeric(const CavityParams& p, int n_atoms,
                                    const std::vector<double>& dps,
                                    int fock_levels) {
  Spectrum s;
  s.detunings_mhz = dps;
  s.method = SpectrumMethod::NumericSteadyState;
  s.label = "probe_numeric";
  for (double dp : dps) {
    CavityParams q = p;
    q.delta_a = p.delta_a - dp;
    q.delta_c = p.delta_c - dp;
    if (n_atoms < 2) q.g_B = 0;
    auto sys = build_tavis_cummings(q, std::max(n_atoms, 1), fock_levels);
    Matrix rho = steady_state(sys);
    s.signal.push_back(
        std::max(0.0, (number_operator(sys) * rho).trace().real()));
  }
  return s;
}

Spectrum side_drive_spectrum_numeric(const CavityParams& p, int n_atoms,
                                     const std::vector<double>& dps,
                                     double delta_c, int fock_levels) {
  Spectrum s;
  s.detunings_mhz = dps;
  s.method = SpectrumMethod::NumericSteadyState;
  s.label = "side_numeric";
  const bool both = n_atoms > 1 && p.omega_side_B != 0.0;
  for (double dp : dps) {
    CavityParams q = p;
    q.delta_a = p.delta_a - dp;
    q.delta_c = delta_c - dp;
    q.omega_probe = 0.0;
    if (n_atoms < 2) q.g_B = 0;
    double val = 0.0;
    // Average the in-phase and out-of-phase drive when both atoms are driven.
    std::vector<double> phases = both ? std::vector<double>{0.0, M_PI}
                                      : std::vector<double>{0.0};
    for (double phi : phases) {
      q.phi_rel = phi;
      auto sys = build_tavis_cummings(q, std::max(n_atoms, 1), fock_levels);
      Matrix rho = steady_state(sys);
      val += (number_operator(sys) * rho).trace().real();
    }
    s.signal.push_back(std::max(0.0, val / phases.size()));
  }
  return s;
}

FitResult fit_cavity_params(const std::vector<LabeledSpectrum>& spectra,
                            double g_guess, double kappa_guess,
                            double gamma_fixed, int max_iter) {
  if (spectra.empty())
    throw std::invalid_argument("fit_cavity_params: need at least one spectrum");
  if (!std::isfinite(g_guess) || !std::isfinite(kappa_guess))
    throw std::invalid_argument("fit_cavity_params: finite initial guess required");

  const int n_traces = static_cast<int>(spectra.size());
  const int n_par = 2 + 2 * n_traces; // g, kappa, amp_i, off_i
  int n_res = 0;
  for (const auto& t : spectra) n_res += static_cast<int>(t.spectrum.signal.size());

  auto model_point = [&](double g, double kappa, int n_atoms, double dp) {
    Complex kt(kappa / 2.0, dp);
    Complex gt(gamma_fixed / 2.0, dp);
    Complex ct = Complex(n_atoms) * g * g / (kt * gt);
    return std::norm(std::sqrt(kappa) / ((1.0 + ct) * kt));
  };

  auto residuals = [&](const Eigen::VectorXd& th, Eigen::VectorXd& r) {
    int k = 0;
    for (int t = 0; t < n_traces; ++t) {
      const auto& sp = spectra[t].spectrum;
      for (std::size_t i = 0; i < sp.signal.size(); ++i) {
        double m = th(2 + 2 * t) *
                       model_point(th(0), th(1), spectra[t].n_atoms,
                                   sp.detunings_mhz[i]) +
                   th(3 + 2 * t);
        r(k++) = sp.signal[i] - m;
      }
    }
  };

  Eigen::VectorXd theta(n_par);
  theta(0) = g_guess;
  theta(1) = kappa_guess;
  for (int t = 0; t < n_traces; ++t) {
    double peak = 0.0;
    for (double v : spectra[t].spectrum.signal) peak = std::max(peak, v);
    double ref = model_point(g_guess, kappa_guess, spectra[t].n_atoms, 0.0);
    for (double dp : spectra[t].spectrum.detunings_mhz)
      ref = std::max(ref, model_point(g_guess, kappa_guess, spectra[t].n_atoms, dp));
    theta(2 + 2 * t) = ref > 0 ? peak / ref : 1.0;
    theta(3 + 2 * t) = 0.0;
  }

  Eigen::VectorXd r(n_res), r_try(n_res);
  residuals(theta, r);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  double grad0 = -1.0;
  Eigen::MatrixXd jac(n_res, n_par);
  FitResult out;

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    // Numerical Jacobian of the residuals (central differences).
    for (int j = 0; j < n_par; ++j) {
      double h = std::max(1e-7, 1e-7 * std::abs(theta(j)));
      Eigen::VectorXd tp = theta, tm = theta;
      tp(j) += h;
      tm(j) -= h;
      Eigen::VectorXd rp(n_res), rm(n_res);
      residuals(tp, rp);
      residuals(tm, rm);
      jac.col(j) = (rp - rm) / (2 * h);
    }
    Eigen::VectorXd grad = jac.transpose() * r;
    if (grad0 < 0) grad0 = grad.norm();
    if (grad.norm() < 1e-8 * std::max(grad0, 1.0)) break;

    Eigen::MatrixXd jtj = jac.transpose() * jac;
    bool stepped = false;
    for (int tries = 0; tries < 30 && !stepped; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (int j = 0; j < n_par; ++j)
        a(j, j) += lambda * std::max(jtj(j, j), 1e-12);
      Eigen::VectorXd delta = a.ldlt().solve(-grad);
      Eigen::VectorXd cand = theta + delta;
      residuals(cand, r_try);
      double c2 = r_try.squaredNorm();
      if (c2 < cost) {
        theta = cand;
        r = r_try;
        cost = c2;
        lambda = std::max(lambda / 10.0, 1e-14);
        stepped = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!stepped) break;
  }

  Eigen::VectorXd grad = jac.transpose() * r;
  bool converged = grad.norm() < 1e-8 * std::max(grad0, 1.0) ||
                   cost < 1e-20 * n_res;
  if (!converged && iter >= max_iter) {
    std::ostringstream os;
    os << "fit_cavity_params: no convergence after " << max_iter
       << " iterations; best g=" << theta(0) << " kappa=" << theta(1)
       << " residual=" << std::sqrt(cost);
    throw std::runtime_error(os.str());
  }

  out.g = theta(0);
  out.kappa = theta(1);
  out.iterations = iter;
  out.converged = converged;
  out.residual_norm = std::sqrt(cost);
  int dof = std::max(1, n_res - n_par);
  double sigma2 = cost / dof;
  Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::MatrixXd cov =
      sigma2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
  out.covariance = cov;
  out.g_err = std::sqrt(std::max(0.0, cov(0, 0)));
  out.kappa_err = std::sqrt(std::max(0.0, cov(1, 1)));
  for (int t = 0; t < n_traces; ++t) {
    out.amplitudes.push_back(theta(2 + 2 * t));
    out.offsets.push_back(theta(3 + 2 * t));
  }
  if (!converged) {
    std::ostringstream os;
    os << "fit_cavity_params: stalled (degenerate data?); best g=" << out.g
       << " kappa=" << out.kappa << " residual=" << out.residual_norm;
    throw std::runtime_error(os.str());
  }
  return out;
}

Spectrum loss_spectrum(const Rb87Params& p, int initial_state_1based,
                       double pulse_time_us,
                       const std::vector<double>& detunings) {
  if (pulse_time_us <= 0)
    throw std::invalid_argument("loss_spectrum: pulse_time > 0 required");
  if (initial_state_1based != 3 && initial_state_1based != 4)
    throw std::invalid_argument("loss_spectrum: initial state must be |10> (3) or |11> (4)");
  Spectrum s;
  s.detunings_mhz = detunings;
  s.method = SpectrumMethod::NumericSteadyState;
  s.label = initial_state_1based == 3 ? "loss_10" : "loss_11";
  for (double d : detunings) {
    Rb87Params q = p;
    q.delta = d;
    auto sys = build_rb87_two_atom(q);
    Matrix rho0 = Matrix::Zero(28, 28);
    rho0(initial_state_1based - 1, initial_state_1based - 1) = 1.0;
    Matrix rho = evolve_expm(sys, rho0, pulse_time_us);
    double err = 0.0;
    for (int i : sys.detectable_sinks) err += rho(i, i).real();
    for (int i : sys.nondetectable_sinks) err += rho(i, i).real();
    s.signal.push_back(std::max(0.0, err));
  }
  return s;
}

std::vector<double> find_peaks(const Spectrum& s, double min_rel_height) {
  std::vector<double> peaks;
  double top = 0.0;
  for (double v : s.signal) top = std::max(top, v);
  for (std::size_t i = 1; i + 1 < s.signal.size(); ++i) {
    if (s.signal[i] >= s.signal[i - 1] && s.signal[i] > s.signal[i + 1] &&
        s.signal[i] > min_rel_height * top) {
      // Quadratic interpolation around the sample maximum.
      double y0 = s.signal[i - 1], y1 = s.signal[i], y2 = s.signal[i + 1];
      double denom = y0 - 2 * y1 + y2;
      double frac = denom != 0 ? 0.5 * (y0 - y2) / denom : 0.0;
      double x = s.detunings_mhz[i] +
                 frac * (s.detunings_mhz[i + 1] - s.detunings_mhz[i]);
      peaks.push_back(x);
    }
  }
  return peaks;
}

} // namespace cavitysim
