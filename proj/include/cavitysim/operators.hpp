#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cavitysim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Default numerical tolerances for operator-level checks.
constexpr double kTolHermitian = 1e-10;   // relative
constexpr double kTolOrthonormal = 1e-10; // relative
constexpr double kTolTrace = 1e-8;
constexpr double kTolPositivity = 1e-8;

// Dense operator on a small tensor-product Hilbert space.  subsystem_dims
// records the factor structure; their product always equals the matrix
// dimension.
struct Operator {
  Matrix m;
  std::vector<int> subsystem_dims;

  Operator() = default;
  explicit Operator(Matrix mat);
  Operator(Matrix mat, std::vector<int> dims);

  int dim() const { return static_cast<int>(m.rows()); }
  Operator adjoint() const { return {m.adjoint().eval(), subsystem_dims}; }
};

Operator identity(int n);
Operator identity(const std::vector<int>& dims);

// Kronecker product; subsystem dimension lists concatenate.
Operator tensor(const Operator& a, const Operator& b);

// Standard lowering operator on an n-level Fock space, <m-1|a|m> = sqrt(m).
// Requires n >= 2.
Operator annihilation(int n);

// |i><j| on an n-dimensional space (0-based indices).
Operator projector(int n, int i, int j);

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues; // ascending
  Matrix eigenvectors;         // columns, orthonormal
};

// Hermitian eigendecomposition; rejects non-Hermitian input reporting the
// measured relative asymmetry.
EigenDecomposition eigendecompose(const Operator& h);

double hermiticity_error(const Matrix& m); // relative max asymmetry

// Density-matrix validity: Hermitian, trace close to `expected_trace`,
// eigenvalues >= -kTolPositivity.
struct DensityCheck {
  bool hermitian = false;
  bool trace_ok = false;
  bool positive = false;
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  bool ok() const { return hermitian && trace_ok && positive; }
};

DensityCheck check_density(const Matrix& rho, double expected_trace = 1.0);

} // namespace cavitysim
