#include "pulseinterp/qcore.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace pulseinterp {

CMatrix identity(int dim) { return CMatrix::Identity(dim, dim); }

CMatrix pauli(PauliAxis axis) {
  const Complex i(0.0, 1.0);
  CMatrix m(2, 2);
  switch (axis) {
    case PauliAxis::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case PauliAxis::Y:
      m << 0.0, -i, i, 0.0;
      break;
    case PauliAxis::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

CMatrix kron2(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw std::invalid_argument("kron2: both operands must be 2x2");
  }
  return Eigen::kroneckerProduct(a, b).eval();
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (!m.allFinite()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double unitarity_error(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

CMatrix expm_hermitian(const CMatrix& h, double s) {
  if (!is_hermitian(h)) {
    throw std::invalid_argument("expm_hermitian: matrix is not Hermitian");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  const Eigen::VectorXcd phases =
      (eig.eigenvalues() * (-s)).unaryExpr([](double x) { return std::polar(1.0, x); });
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace pulseinterp
