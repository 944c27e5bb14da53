#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pulseinterp {

using Complex = std::complex<double>;

/// Dense complex operator. Only dimensions 2 (one qubit) and 4 (two qubits) are used.
using CMatrix = Eigen::MatrixXcd;

enum class PauliAxis { X, Y, Z };

CMatrix identity(int dim);

CMatrix pauli(PauliAxis axis);

/// Kronecker product of two single-qubit operators; throws std::invalid_argument
/// unless both are 2x2.
CMatrix kron2(const CMatrix& a, const CMatrix& b);

/// True when `m` is square and equals its adjoint to within `tol` entrywise.
bool is_hermitian(const CMatrix& m, double tol = 1e-12);

/// Largest entry of |U^dagger U - I|.
double unitarity_error(const CMatrix& u);

/// exp(-i s H) for Hermitian H, computed from the eigendecomposition of H.
/// Throws std::invalid_argument if H fails the Hermiticity check.
CMatrix expm_hermitian(const CMatrix& h, double s);

/// 1 - |Tr(U^dagger V)|^2 / h^2. Invariant under a global phase on either argument.
template <typename DerivedU, typename DerivedV>
double gate_infidelity(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v,
                       int h);

double trace_overlap_fidelity(const Complex& trace, int h);

}  // namespace pulseinterp

#include "pulseinterp/qcore_impl.hpp"
