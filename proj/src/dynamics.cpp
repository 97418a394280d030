#include "cavitysim/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace cavitysim {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXcd vec(const Matrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Matrix unvec(const Eigen::VectorXcd& v, int d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

double generator_norm_estimate(const LindbladSystem& sys) {
  double est = 2.0 * sys.hamiltonian.m.cwiseAbs().rowwise().sum().maxCoeff();
  for (const auto& l : sys.collapse_ops) {
    Matrix ldl = l.m.adjoint() * l.m;
    est += 2.0 * ldl.cwiseAbs().rowwise().sum().maxCoeff();
  }
  return est;
}

} // namespace

Matrix liouvillian_apply(const LindbladSystem& sys, const Matrix& rho) {
  if (rho.rows() != sys.dim() || rho.cols() != sys.dim())
    throw std::invalid_argument("liouvillian_apply: dimension mismatch");
  const Matrix& H = sys.hamiltonian.m;
  Matrix out = Complex(0, -1) * (H * rho - rho * H);
  for (const auto& l : sys.collapse_ops) {
    Matrix ldl = l.m.adjoint() * l.m;
    out += l.m * rho * l.m.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

Matrix liouvillian_matrix(const LindbladSystem& sys) {
  const int d = sys.dim();
  const Matrix& H = sys.hamiltonian.m;
  Matrix id = Matrix::Identity(d, d);
  Matrix sup = Complex(0, -1) * (kron(id, H) - kron(H.transpose(), id));
  for (const auto& l : sys.collapse_ops) {
    Matrix ldl = l.m.adjoint() * l.m;
    sup += kron(l.m.conjugate(), l.m) - 0.5 * kron(id, ldl) -
           0.5 * kron(ldl.transpose(), id);
  }
  return sup;
}

Matrix steady_state(const LindbladSystem& sys) {
  const int d = sys.dim();
  Matrix sup = liouvillian_matrix(sys);
  Eigen::BDCSVD<Matrix> svd(sup, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double scale = sv(0) > 0 ? sv(0) : 1.0;
  // Uniqueness: exactly one singular value at numerical zero.
  int n_null = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) / scale < 1e-7) ++n_null;
  if (n_null != 1) {
    std::ostringstream os;
    os << "steady_state: Liouvillian null space degeneracy " << n_null;
    throw std::runtime_error(os.str());
  }
  Matrix rho = unvec(svd.matrixV().col(d * d - 1), d);
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14)
    throw std::runtime_error("steady_state: traceless null vector");
  rho /= tr;
  return rho;
}

Matrix evolve(const LindbladSystem& sys, const Matrix& rho0, double t,
              int steps) {
  if (t < 0) throw std::invalid_argument("evolve: t >= 0 required");
  if (t == 0) return rho0;
  double est = generator_norm_estimate(sys);
  int n = std::max({steps, 1, static_cast<int>(std::ceil(est * t / 0.05))});
  const double h = t / n;
  Matrix rho = rho0;
  for (int i = 0; i < n; ++i) {
    Matrix k1 = liouvillian_apply(sys, rho);
    Matrix k2 = liouvillian_apply(sys, (rho + 0.5 * h * k1).eval());
    Matrix k3 = liouvillian_apply(sys, (rho + 0.5 * h * k2).eval());
    Matrix k4 = liouvillian_apply(sys, (rho + h * k3).eval());
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = ((rho + rho.adjoint()) / 2.0).eval();
  }
  return rho;
}

Matrix propagator_expm(const LindbladSystem& sys, double t) {
  Matrix sup = liouvillian_matrix(sys) * t;
  return sup.exp();
}

Matrix apply_propagator(const Matrix& prop, const Matrix& rho) {
  const int d = rho.rows();
  Eigen::VectorXcd v = prop * vec(rho);
  Matrix out = unvec(v, d);
  return ((out + out.adjoint()) / 2.0).eval();
}

Matrix evolve_expm(const LindbladSystem& sys, const Matrix& rho0, double t) {
  return apply_propagator(propagator_expm(sys, t), rho0);
}

double EffectiveSystem::rate(int j, bool detectable) const {
  double r = 0.0;
  for (const auto& l : lindblads)
    if (l.detectable == detectable) r += l.op.col(j).squaredNorm();
  return r;
}

double EffectiveSystem::total_rate(int j) const {
  return rate(j, true) + rate(j, false);
}

EffectiveSystem adiabatic_eliminate(const LindbladSystem& sys,
                                    const std::vector<int>& ground,
                                    const std::vector<int>& excited,
                                    const Matrix& perturbation,
                                    const std::vector<bool>& detect_flags) {
  const int ne = static_cast<int>(excited.size());
  const int ng = static_cast<int>(ground.size());
  if (ne == 0 || ng == 0)
    throw std::invalid_argument("adiabatic_eliminate: empty subspace");

  // Non-Hermitian Hamiltonian on the excited block.
  Matrix hnh(ne, ne);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < ne; ++j) hnh(i, j) = sys.hamiltonian.m(excited[i], excited[j]);
  for (const auto& l : sys.collapse_ops) {
    Matrix ldl = l.m.adjoint() * l.m;
    for (int i = 0; i < ne; ++i)
      for (int j = 0; j < ne; ++j)
        hnh(i, j) -= Complex(0, 0.5) * ldl(excited[i], excited[j]);
  }
  Eigen::FullPivLU<Matrix> lu(hnh);
  if (!lu.isInvertible())
    throw std::runtime_error("adiabatic_eliminate: singular non-Hermitian Hamiltonian");
  Matrix hinv = lu.inverse();

  // V+ : ground -> excited block of the perturbation.
  Matrix vplus(ne, ng);
  for (int i = 0; i < ne; ++i)
    for (int j = 0; j < ng; ++j) vplus(i, j) = perturbation(excited[i], ground[j]);

  EffectiveSystem eff;
  eff.ground_indices = ground;
  eff.effective_hamiltonian =
      (-0.5 * vplus.adjoint() * (hinv + hinv.adjoint()) * vplus).eval();

  for (std::size_t k = 0; k < sys.collapse_ops.size(); ++k) {
    const Matrix& l = sys.collapse_ops[k].m;
    Matrix lblock(l.rows(), ne);
    for (int i = 0; i < ne; ++i) lblock.col(i) = l.col(excited[i]);
    Matrix leff = lblock * hinv * vplus;
    if (leff.cwiseAbs().maxCoeff() < 1e-300) continue;
    bool det;
    if (!detect_flags.empty()) {
      det = detect_flags[k];
    } else if (!sys.detectable_sinks.empty() || !sys.nondetectable_sinks.empty()) {
      // Detectable iff the channel feeds detectable sink rows.
      det = true;
      for (int r = 0; r < leff.rows(); ++r) {
        if (leff.row(r).cwiseAbs().maxCoeff() > 1e-14) {
          bool in_nd = false;
          for (int s : sys.nondetectable_sinks) in_nd |= (s == r);
          if (in_nd) det = false;
        }
      }
    } else {
      det = true;
    }
    eff.lindblads.push_back({std::move(leff), det});
  }
  return eff;
}

} // namespace cavitysim
