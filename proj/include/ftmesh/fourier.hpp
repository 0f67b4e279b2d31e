#pragma once

#include <cmath>
#include <numbers>

#include "ftmesh/types.hpp"

namespace ftmesh {

// d-dimensional discrete Fourier transform matrix,
// F(j,k) = exp(2*pi*i*(j-1)(k-1)/d) / sqrt(d) in 1-based indexing.
inline Matrix fourier_matrix(int d) {
  if (d < 1) throw std::invalid_argument("fourier_matrix: dimension must be >= 1");
  Matrix f(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      // reduce the exponent mod d before evaluating, keeps large j*k accurate
      const long long e = (static_cast<long long>(j) * k) % d;
      const double arg = 2.0 * std::numbers::pi * static_cast<double>(e) / d;
      f(j, k) = scale * Complex(std::cos(arg), std::sin(arg));
    }
  }
  return f;
}

// Diagonal of a phase-shifter layer: diag(1, e^{i phi_2}, ..., e^{i phi_d}).
inline Vector phase_layer_diagonal(int d, const Eigen::Ref<const RealVector>& free_phases) {
  if (d < 1) throw std::invalid_argument("phase_layer: dimension must be >= 1");
  if (free_phases.size() != d - 1)
    throw std::invalid_argument("phase_layer: expected " + std::to_string(d - 1) +
                                " free phases, got " +
                                std::to_string(free_phases.size()));
  Vector diag(d);
  diag(0) = Complex(1.0, 0.0);
  for (int k = 1; k < d; ++k) {
    const double phi = free_phases(k - 1);
    diag(k) = Complex(std::cos(phi), std::sin(phi));
  }
  return diag;
}

inline Matrix phase_layer(int d, const Eigen::Ref<const RealVector>& free_phases) {
  return Matrix(phase_layer_diagonal(d, free_phases).asDiagonal());
}

}  // namespace ftmesh
