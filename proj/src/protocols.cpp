#include "cavitysim/protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace cavitysim {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix qubit_rotation_2x2(char axis, double angle) {
  Matrix sigma(2, 2);
  switch (axis) {
    case 'x': sigma << 0, 1, 1, 0; break;
    case 'y': sigma << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'z': sigma << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("rotation axis must be x, y or z");
  }
  Matrix id = Matrix::Identity(2, 2);
  return std::cos(angle / 2) * id -
         Complex(0, 1) * std::sin(angle / 2) * sigma;
}

// Global rotation on the 4-dim qubit manifold (first four basis states),
// identity elsewhere.
Matrix embed_global_rotation(int dim, char axis, double angle) {
  Matrix r = qubit_rotation_2x2(axis, angle);
  Matrix u = Matrix::Identity(dim, dim);
  // qubit basis order |0,0>,|0,1>,|1,0>,|1,1>, atom A first factor
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          u(2 * a + b, 2 * c + d) = r(a, c) * r(b, d);
  return u;
}

} // namespace

std::pair<double, double> carving_rates_simplified(double omega, double gamma,
                                                   double cooperativity) {
  if (omega < 0 || gamma <= 0 || cooperativity <= 0)
    throw std::invalid_argument("carving_rates_simplified: positive parameters required");
  return {omega * omega / (2.0 * gamma), omega * omega / (cooperativity * gamma)};
}

Matrix carve_operator(double gamma10, double gamma11, double t_us) {
  if (t_us < 0) throw std::invalid_argument("carve_operator: t >= 0 required");
  Matrix u = Matrix::Zero(4, 4);
  double slow = std::exp(-gamma11 * t_us / 2.0);
  double fast = std::exp(-gamma10 * t_us / 2.0);
  u(0, 0) = slow;
  u(1, 1) = fast;
  u(2, 2) = fast;
  u(3, 3) = slow;
  return u;
}

CarvingOutcome carving_outcome_simplified(double omega, double gamma,
                                          double cooperativity, double t_us) {
  auto [g10, g11] = carving_rates_simplified(omega, gamma, cooperativity);
  CarvingOutcome o;
  o.model = CarvingModel::SimplifiedAnalytic;
  o.pulse_time_us = t_us;
  double e_slow = std::exp(-g11 * t_us);
  double e_fast = std::exp(-g10 * t_us);
  o.success_probability = (e_slow + e_fast) / 2.0;
  o.fidelity = e_slow / (2.0 * o.success_probability);
  return o;
}

CarvingRates carving_rates_rb87(const Rb87Params& p, bool exact) {
  if (!exact) {
    const double om2 = p.omega * p.omega;
    const double c = p.coop(); // lowercase cooperativity g^2/(kappa gamma)
    CarvingRates r;
    r.delta3_tilde = (9.0 / p.delta3 + 1.0 / (36.0 * p.delta2)) * om2;
    r.delta4_tilde = 9.0 * om2 / p.delta3;
    r.gamma3d = (8.0 * p.gamma + 4.0 * p.gamma_d()) / 9.0 * om2 /
                (p.gamma * p.gamma);
    r.gamma3nd = 4.0 * p.gamma_nd() / 9.0 * om2 / (p.gamma * p.gamma);
    r.gamma4d = om2 / (2.0 * p.gamma * c) +
                9.0 * om2 / (p.delta3 * p.delta3) * p.gamma_3d();
    r.gamma4nd = om2 * p.gamma_nd() / (16.0 * p.gamma * p.gamma * c * c) +
                 9.0 * om2 / (p.delta3 * p.delta3) * p.gamma_3nd();
    return r;
  }
  auto sys = build_rb87_two_atom(p);
  std::vector<int> ground = {2, 3};               // |1,0>, |1,1>
  std::vector<int> excited;
  for (int i = 4; i <= 11; ++i) excited.push_back(i); // |5>..|12>
  // Drive perturbation (the Omega terms of the Hamiltonian).
  Matrix v = Matrix::Zero(28, 28);
  const double r3 = p.drive_ratio;
  v(4, 2) = p.omega;
  v(6, 2) = -r3 * p.omega;
  v(5, 3) = p.omega;
  v(7, 3) = -r3 * p.omega;
  v += v.adjoint().eval();
  auto eff = adiabatic_eliminate(sys, ground, excited, v);
  CarvingRates r;
  r.delta3_tilde = -eff.effective_hamiltonian(0, 0).real();
  r.delta4_tilde = -eff.effective_hamiltonian(1, 1).real();
  r.gamma3d = eff.rate(0, true);
  r.gamma3nd = eff.rate(0, false);
  r.gamma4d = eff.rate(1, true);
  r.gamma4nd = eff.rate(1, false);
  return r;
}

CarvingOutcome carving_outcome_rb87(const Rb87Params& p, double t_us,
                                    bool exact_rates) {
  CarvingRates r = carving_rates_rb87(p, exact_rates);
  CarvingOutcome o;
  o.model = CarvingModel::Rb87Effective;
  o.pulse_time_us = t_us;
  double g3 = r.gamma3(), g4 = r.gamma4();
  double P = 1.0 - 0.5 * (r.gamma4d / g4) * (1.0 - std::exp(-g4 * t_us)) -
             0.5 * (r.gamma3d / g3) * (1.0 - std::exp(-g3 * t_us));
  o.success_probability = P;
  o.fidelity = std::exp(-g4 * t_us) / (2.0 * P);
  return o;
}

double carving_ceiling_rb87(const Rb87Params& p, bool exact_rates) {
  CarvingRates r = carving_rates_rb87(p, exact_rates);
  return 1.0 / (2.0 - r.gamma3d / r.gamma3());
}

PulseSchedule spin_echo_carving(double t) {
  PulseSchedule s;
  s.segments.push_back({PulseSegment::Kind::Drive, 'x', 0, t, 0});
  s.segments.push_back({PulseSegment::Kind::Rotation, 'x', kPi, 0, 0});
  s.segments.push_back({PulseSegment::Kind::Drive, 'x', 0, t, 0});
  return s;
}

PulseSchedule carr_purcell_carving(double t) {
  PulseSchedule s;
  s.segments.push_back({PulseSegment::Kind::Drive, 'x', 0, t / 2, 0});
  s.segments.push_back({PulseSegment::Kind::Rotation, 'x', kPi, 0, 0});
  s.segments.push_back({PulseSegment::Kind::Drive, 'x', 0, t, 0});
  s.segments.push_back({PulseSegment::Kind::Rotation, 'x', kPi, 0, 0});
  s.segments.push_back({PulseSegment::Kind::Drive, 'x', 0, t / 2, 0});
  return s;
}

Matrix run_pulse_sequence(const LindbladSystem& sys,
                          const PulseSchedule& schedule, const Matrix& rho0) {
  const int dim = sys.dim();
  Matrix rho = rho0;
  // Cache propagators per distinct duration; carving schedules reuse them.
  std::vector<std::pair<double, Matrix>> props;
  auto propagate = [&](double t) {
    for (const auto& [dur, prop] : props)
      if (dur == t) {
        rho = apply_propagator(prop, rho);
        return;
      }
    props.emplace_back(t, propagator_expm(sys, t));
    rho = apply_propagator(props.back().second, rho);
  };
  for (const auto& seg : schedule.segments) {
    switch (seg.kind) {
      case PulseSegment::Kind::Rotation: {
        Matrix u = embed_global_rotation(dim, seg.axis, seg.angle);
        rho = (u * rho * u.adjoint()).eval();
        break;
      }
      case PulseSegment::Kind::Drive:
      case PulseSegment::Kind::Wait:
        if (seg.duration_us > 0) propagate(seg.duration_us);
        break;
      case PulseSegment::Kind::LocalZ: {
        Matrix u = Matrix::Identity(dim, dim);
        // phase on atom A's |1> component (qubit states |1,0>, |1,1>)
        u(2, 2) = std::exp(Complex(0, seg.phase));
        u(3, 3) = std::exp(Complex(0, seg.phase));
        rho = (u * rho * u.adjoint()).eval();
        break;
      }
    }
  }
  return rho;
}

std::pair<Matrix, double> post_select(const LindbladSystem& sys,
                                      const Matrix& rho) {
  double p_err = 0.0;
  for (int i : sys.detectable_sinks) p_err += rho(i, i).real();
  double p = 1.0 - p_err;
  Matrix q = rho.topLeftCorner(4, 4) / p;
  return {q, p};
}

namespace {

GateMetrics simplified_metrics(double gamma, double coop, double omega) {
  GateMetrics m;
  m.omega_opt = std::sqrt(coop / 2.0) * gamma;
  if (omega <= 0) omega = m.omega_opt;
  m.t_gate_us = kPi / omega;
  // strong-coupling error exponents (see module notes)
  double e10 = std::exp(-kPi * gamma / (2.0 * omega));
  double e11 = std::exp(-kPi * omega / (coop * gamma));
  m.f_uncorr = std::pow(2.0 + e10 + e11, 2) / 16.0;
  m.p_success = (2.0 + e10 * e10 + e11 * e11) / 4.0;
  m.f_corr = m.f_uncorr / m.p_success;
  m.f_phase_corrected = m.f_corr; // no coherent phase error in this model
  m.alpha = std::exp(-kPi / std::sqrt(2.0 * coop));
  m.alpha_balanced_p = std::exp(-2.0 * kPi / std::sqrt(2.0 * coop));
  return m;
}

} // namespace

GateMetrics cz_gate_metrics_simplified(double gamma, double kappa, double g,
                                       std::optional<double> omega) {
  if (gamma <= 0 || kappa <= 0 || g <= 0)
    throw std::invalid_argument("cz_gate_metrics_simplified: positive parameters");
  double coop = g * g / (kappa * gamma);
  return simplified_metrics(gamma, coop, omega.value_or(0.0));
}

GateMetrics cz_gate_metrics_simplified_coop(double gamma, double kappa,
                                            double cooperativity,
                                            std::optional<double> omega) {
  if (gamma <= 0 || kappa <= 0 || cooperativity <= 0)
    throw std::invalid_argument("cz_gate_metrics_simplified: positive parameters");
  return simplified_metrics(gamma, cooperativity, omega.value_or(0.0));
}

GateMetrics cz_gate_metrics_rb87(const Rb87Params& p,
                                 std::optional<double> t_gate_us) {
  const double om = p.omega, om2 = om * om;
  const double c = p.coop();
  const double g2 = p.gamma * p.gamma;
  CarvingRates cv = carving_rates_rb87(p, false);
  // dark-state-route rates of the gate derivation
  double g3d = 9.0 * om2 / (p.delta3 * p.delta3) * p.gamma_3d() +
               2.0 * om2 / (9.0 * c * p.gamma);
  double g3nd = 9.0 * om2 / (p.delta3 * p.delta3) * p.gamma_3nd();
  double gDd = p.gamma_d() / 3.0 + 2.0 * p.gamma / 3.0;
  double gDnd = p.gamma_nd() / 3.0;
  double gt3d = (g3d + gDd) / 2.0, gt3nd = (g3nd + gDnd) / 2.0;
  double gt3 = gt3d + gt3nd;
  double g4 = cv.gamma4();
  (void)g2;

  GateMetrics m;
  m.omega_opt = om;
  double tg = t_gate_us.value_or(std::sqrt(3.0) * kPi / om);
  m.t_gate_us = tg;
  Complex e3 = std::exp(Complex(-gt3 / 2.0, cv.delta3_tilde) * tg);
  Complex e4 = std::exp(Complex(-g4 / 2.0, cv.delta4_tilde) * tg);
  double pg = 1.0 - 0.25 * ((cv.gamma4d / g4) * (1.0 - std::exp(-g4 * tg)) +
                            (gt3d / gt3) * (1.0 - std::exp(-gt3 * tg)));
  m.p_success = pg;
  m.f_uncorr = std::norm(2.0 + e3 + e4) / 16.0;
  m.f_corr = m.f_uncorr / pg;
  m.f_phase_corrected = std::pow(2.0 + std::abs(e3 + e4), 2) / (16.0 * pg);
  m.alpha = std::exp(-kPi / std::sqrt(2.0 * c));
  m.alpha_balanced_p = std::exp(-2.0 * kPi / std::sqrt(2.0 * c));
  return m;
}

GateMetrics cz_gate_optimal_rb87(Rb87Params p) {
  // Validity window of the effective description: Omega <= g/10.
  const double lo = p.gamma / 20.0, hi = p.g / 10.0;
  double best_om = lo;
  GateMetrics best;
  best.f_corr = -1.0;
  const int n = 600;
  for (int i = 0; i <= n; ++i) {
    p.omega = lo + (hi - lo) * i / n;
    GateMetrics m = cz_gate_metrics_rb87(p);
    if (m.f_corr > best.f_corr) {
      best = m;
      best_om = p.omega;
    }
  }
  // local refinement
  double step = (hi - lo) / n;
  for (int pass = 0; pass < 30; ++pass) {
    step /= 2.0;
    for (double cand : {best_om - step, best_om + step}) {
      if (cand < lo || cand > hi) continue;
      p.omega = cand;
      GateMetrics m = cz_gate_metrics_rb87(p);
      if (m.f_corr > best.f_corr) {
        best = m;
        best_om = cand;
      }
    }
  }
  best.omega_opt = best_om;
  return best;
}

std::pair<double, double> parity_and_trace(const MeasurementSet& m, int basis) {
  const auto& p = m.populations.at(basis);
  double parity = p[0] - p[1] - p[2] + p[3];
  double tr = p[0] + p[1] + p[2] + p[3];
  return {parity, tr};
}

BellFidelity bell_fidelity(const MeasurementSet& m, BellTarget target) {
  auto [px, trx] = parity_and_trace(m, 0);
  auto [py, try_] = parity_and_trace(m, 1);
  auto [pz, trz] = parity_and_trace(m, 2);
  double avg_tr = (trx + try_ + trz) / 3.0;
  double sx = target == BellTarget::PhiPlus ? 1.0 : -1.0;
  BellFidelity out;
  out.fidelity = 0.25 * (avg_tr + sx * px - sx * py + pz);

  // uncorrelated propagation; population b in basis i enters with
  // coefficient (1/4)(1/3 +- s(b))
  auto sgn = [](int b) { return (b == 0 || b == 3) ? 1.0 : -1.0; };
  double var = 0.0;
  for (int b = 0; b < 4; ++b) {
    double cx = 0.25 * (1.0 / 3.0 + sx * sgn(b));
    double cy = 0.25 * (1.0 / 3.0 - sx * sgn(b));
    double cz = 0.25 * (1.0 / 3.0 + sgn(b));
    var += cx * cx * m.errors[0][b] * m.errors[0][b];
    var += cy * cy * m.errors[1][b] * m.errors[1][b];
    var += cz * cz * m.errors[2][b] * m.errors[2][b];
  }
  out.uncertainty = std::sqrt(var);
  return out;
}

MeasurementSet measurement_set_from_density(const Matrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4)
    throw std::invalid_argument("measurement_set_from_density: 4x4 input required");
  MeasurementSet out;
  // U with U^dag sigma_z U = sigma_x  (x basis) and = sigma_y (y basis)
  Matrix ux = qubit_rotation_2x2('y', -kPi / 2);
  Matrix uy = qubit_rotation_2x2('x', kPi / 2);
  auto rotate = [&](const Matrix& u) {
    Matrix uu(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) uu(2 * a + b, 2 * c + d) = u(a, c) * u(b, d);
    return (uu * rho4 * uu.adjoint()).eval();
  };
  Matrix rx = rotate(ux), ry = rotate(uy);
  for (int b = 0; b < 4; ++b) {
    out.populations[0][b] = rx(b, b).real();
    out.populations[1][b] = ry(b, b).real();
    out.populations[2][b] = rho4(b, b).real();
  }
  return out;
}

} // namespace cavitysim
