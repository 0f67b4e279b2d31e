#pragma once

#include <cmath>

#include "ftmesh/circuit.hpp"
#include "ftmesh/types.hpp"

namespace ftmesh {

inline double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  return u.rows() == u.cols() && unitarity_defect(u) <= tol;
}

inline bool is_normalized(const Vector& v, double tol = 1e-10) {
  return std::abs(v.norm() - 1.0) <= tol;
}

// 1 - |<a|b>|^2. Inputs must be normalized; off-normalization beyond 1e-10
// is rejected rather than silently renormalized.
inline double state_infidelity(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("state_infidelity: dimension mismatch");
  if (!is_normalized(a) || !is_normalized(b))
    throw std::domain_error("state_infidelity: input vector is not normalized");
  return detail::one_minus_square(std::abs(a.dot(b)));
}

// 1 - |tr(u^dag v)|^2 / d^2; invariant under a global phase on either side.
inline double unitary_infidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw std::invalid_argument("unitary_infidelity: dimension mismatch");
  if (!is_unitary(u) || !is_unitary(v))
    throw std::domain_error("unitary_infidelity: input matrix is not unitary");
  const double d = static_cast<double>(u.rows());
  const double x = std::abs((u.adjoint() * v).trace()) / d;
  return detail::one_minus_square(x);
}

}  // namespace ftmesh
