#include "cavitysim/models.hpp"

#include <cmath>
#include <stdexcept>

namespace cavitysim {

LindbladSystem build_tavis_cummings(const CavityParams& p, int n_atoms,
                                    int fock_levels) {
  if (!p.valid()) throw std::invalid_argument("build_tavis_cummings: bad params");
  if (n_atoms != 1 && n_atoms != 2)
    throw std::invalid_argument("build_tavis_cummings: n_atoms must be 1 or 2");
  if (fock_levels < 2)
    throw std::invalid_argument("build_tavis_cummings: fock_levels >= 2 required");

  std::vector<int> dims;
  for (int i = 0; i < n_atoms; ++i) dims.push_back(2);
  dims.push_back(fock_levels);
  const Operator id_atom = identity(2);
  const Operator id_cav = identity(fock_levels);

  auto embed_atom = [&](const Operator& op, int which) {
    Operator out = (which == 0) ? op : id_atom;
    if (n_atoms == 2) out = tensor(out, which == 1 ? op : id_atom);
    return tensor(out, id_cav);
  };
  auto embed_cav = [&](const Operator& op) {
    Operator out = id_atom;
    if (n_atoms == 2) out = tensor(out, id_atom);
    return tensor(out, op);
  };

  const Operator a = annihilation(fock_levels);
  const Operator sm = projector(2, 0, 1); // |g><e|
  const Operator pe = projector(2, 1, 1); // |e><e|

  const Operator a_full = embed_cav(a);
  const Operator ad_full = a_full.adjoint();

  Matrix H = p.delta_c * (ad_full.m * a_full.m);
  const double gs[2] = {p.g_A, p.g_B};
  const double side[2] = {p.omega_side_A, p.omega_side_B};
  for (int at = 0; at < n_atoms; ++at) {
    Matrix sp = embed_atom(sm, at).adjoint().m; // |e><g|
    H += p.delta_a * embed_atom(pe, at).m;
    H += gs[at] * (sp * a_full.m) + gs[at] * (sp * a_full.m).adjoint().eval();
    Complex amp = side[at];
    if (at == 1) amp *= std::exp(Complex(0, p.phi_rel));
    H += amp * sp + (amp * sp).adjoint().eval();
  }
  if (p.omega_probe != 0.0)
    H += p.omega_probe * (a_full.m + ad_full.m);

  LindbladSystem sys;
  sys.hamiltonian = Operator(std::move(H), dims);
  sys.collapse_ops.push_back(
      Operator(std::sqrt(p.kappa) * a_full.m, dims));
  for (int at = 0; at < n_atoms; ++at)
    sys.collapse_ops.push_back(
        Operator(std::sqrt(p.gamma) * embed_atom(sm, at).m, dims));

  for (int idx = 0; idx < sys.dim(); ++idx) {
    std::string lbl;
    int rem = idx;
    for (auto it = dims.rbegin(); it != dims.rend(); ++it) {
      lbl = std::to_string(rem % *it) + (lbl.empty() ? "" : ",") + lbl;
      rem /= *it;
    }
    sys.basis_labels.push_back("|" + lbl + ">");
  }
  return sys;
}

LindbladSystem build_rb87_two_atom(const Rb87Params& p) {
  const int N = 28;
  auto op = [&](int i, int j) { // 1-based |i><j|
    Matrix m = Matrix::Zero(N, N);
    m(i - 1, j - 1) = 1.0;
    return m;
  };
  const double r = p.drive_ratio; // printed sqrt(9)

  Matrix H = p.delta * (op(5, 5) + op(6, 6) + op(11, 11)) +
             p.delta3 * (op(7, 7) + op(8, 8)) + p.delta2 * op(12, 12);
  Matrix V = p.omega * (op(5, 3) - r * op(7, 3) + op(6, 4) - r * op(8, 4));
  Matrix G = p.g * (op(11, 9) + std::sqrt(2.0) * op(5, 9) +
                    std::sqrt(2.0) * op(6, 10) + std::sqrt(1.0 / 8.0) * op(12, 9));
  H += V + V.adjoint().eval() + G + G.adjoint().eval();

  LindbladSystem sys;
  sys.hamiltonian = Operator(std::move(H), {N});

  auto add = [&](Matrix m, bool detectable, const std::vector<int>& sinks) {
    sys.collapse_ops.push_back(Operator(std::move(m), {N}));
    auto& list = detectable ? sys.detectable_sinks : sys.nondetectable_sinks;
    for (int s : sinks)
      list.push_back(s - 1);
  };
  const double k2 = std::sqrt(p.kappa / 2.0), g2 = std::sqrt(p.gamma / 2.0);
  add(k2 * (op(13, 9) + op(14, 10)), true, {13, 14});           // L_c1
  add(-k2 * (op(15, 9) + op(16, 10)), true, {15, 16});          // L_c2
  add(std::sqrt(p.gamma_d()) * (op(17, 5) + op(18, 6)), true, {17, 18});
  add(std::sqrt(p.gamma_nd()) * (op(19, 5) + op(20, 6)), false, {19, 20});
  add(std::sqrt(p.gamma_3d()) * (op(21, 7) + op(22, 8)), true, {21, 22});
  add(std::sqrt(p.gamma_3nd()) * (op(23, 7) + op(24, 8)), false, {23, 24});
  add(g2 * op(25, 11), true, {25});
  add(g2 * op(26, 11), true, {26});
  add(g2 * op(27, 12), true, {27});
  add(g2 * op(28, 12), true, {28});

  sys.basis_labels = {
      "|0,0>",  "|0,1>",  "|1,0>",  "|1,1>",  "|e,0>",   "|e,1>",  "|e3,0>",
      "|e3,1>", "|S_0>",  "|S_1>",  "|S_e>",  "|~S_e>",  "|-,0>",  "|-,1>",
      "|+,0>",  "|+,1>",  "|Od,0>", "|Od,1>", "|Ond,0>", "|Ond,1>", "|O3d,0>",
      "|O3d,1>", "|O3nd,0>", "|O3nd,1>", "|-,O1>", "|+,O2>", "|-,~O1>",
      "|+,~O2>"};
  return sys;
}

double coupling_profile(double x_um, double a, double x0_um, double period_um,
                        double c) {
  if (period_um <= 0) throw std::invalid_argument("coupling_profile: period > 0");
  return a * std::cos(2.0 * M_PI * (x_um - x0_um) / period_um) + c;
}

FiguresOfMerit figures_of_merit(double g, double kappa, double gamma,
                                double cavity_length_um) {
  if (kappa <= 0 || gamma <= 0 || cavity_length_um <= 0 || g < 0)
    throw std::invalid_argument("figures_of_merit: parameters must be positive");
  constexpr double c_light = 299792458.0; // m/s
  double fsr_mhz = c_light / (2.0 * cavity_length_um * 1e-6) / 1e6;
  return {4.0 * g * g / (kappa * gamma), fsr_mhz / kappa, fsr_mhz};
}

} // namespace cavitysim
