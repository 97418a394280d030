#include "cavitysim/operators.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace cavitysim {

namespace {

void check_finite(const Matrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("operator entries must be finite");
}

} // namespace

Operator::Operator(Matrix mat) : m(std::move(mat)) {
  if (m.rows() != m.cols()) throw std::invalid_argument("operator must be square");
  check_finite(m);
  subsystem_dims = {static_cast<int>(m.rows())};
}

Operator::Operator(Matrix mat, std::vector<int> dims)
    : m(std::move(mat)), subsystem_dims(std::move(dims)) {
  if (m.rows() != m.cols()) throw std::invalid_argument("operator must be square");
  check_finite(m);
  long prod = 1;
  for (int d : subsystem_dims) prod *= d;
  if (prod != m.rows())
    throw std::invalid_argument("product of subsystem dims must equal dim");
}

Operator identity(int n) { return Operator(Matrix::Identity(n, n)); }

Operator identity(const std::vector<int>& dims) {
  long n = 1;
  for (int d : dims) n *= d;
  return {Matrix::Identity(n, n), dims};
}

Operator tensor(const Operator& a, const Operator& b) {
  const int na = a.dim(), nb = b.dim();
  Matrix out(na * nb, na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      out.block(i * nb, j * nb, nb, nb) = a.m(i, j) * b.m;
  std::vector<int> dims = a.subsystem_dims;
  dims.insert(dims.end(), b.subsystem_dims.begin(), b.subsystem_dims.end());
  return {std::move(out), std::move(dims)};
}

Operator annihilation(int n) {
  if (n < 2) throw std::invalid_argument("annihilation: need n >= 2");
  Matrix a = Matrix::Zero(n, n);
  for (int m = 1; m < n; ++m) a(m - 1, m) = std::sqrt(double(m));
  return Operator(std::move(a));
}

Operator projector(int n, int i, int j) {
  Matrix p = Matrix::Zero(n, n);
  p(i, j) = 1.0;
  return Operator(std::move(p));
}

double hermiticity_error(const Matrix& m) {
  double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

EigenDecomposition eigendecompose(const Operator& h) {
  double asym = hermiticity_error(h.m);
  if (asym > kTolHermitian) {
    std::ostringstream os;
    os << "eigendecompose: non-Hermitian input, relative asymmetry " << asym;
    throw std::invalid_argument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      ((h.m + h.m.adjoint()) / 2.0).eval());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

DensityCheck check_density(const Matrix& rho, double expected_trace) {
  DensityCheck c;
  c.hermitian = hermiticity_error(rho) <= kTolHermitian * 100;
  c.trace = rho.trace().real();
  c.trace_ok = std::abs(rho.trace() - Complex(expected_trace, 0)) <= kTolTrace;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(((rho + rho.adjoint()) / 2.0).eval());
  c.min_eigenvalue = solver.eigenvalues().minCoeff();
  c.positive = c.min_eigenvalue >= -kTolPositivity;
  return c;
}

} // namespace cavitysim
