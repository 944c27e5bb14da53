#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pulseinterp {

inline double trace_overlap_fidelity(const Complex& trace, int h) {
  return std::norm(trace) / (static_cast<double>(h) * static_cast<double>(h));
}

template <typename DerivedU, typename DerivedV>
double gate_infidelity(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v,
                       int h) {
  if (u.rows() != h || u.cols() != h || v.rows() != h || v.cols() != h) {
    throw std::invalid_argument("gate_infidelity: expected two " + std::to_string(h) + "x" +
                                std::to_string(h) + " matrices");
  }
  // Tr(U^dagger V) = sum_ij conj(U_ij) V_ij
  const Complex tr = u.conjugate().cwiseProduct(v).sum();
  return std::clamp(1.0 - trace_overlap_fidelity(tr, h), 0.0, 1.0);
}

}  // namespace pulseinterp
