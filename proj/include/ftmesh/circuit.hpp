#pragma once

#include <cmath>
#include <vector>

#include "ftmesh/fourier.hpp"
#include "ftmesh/types.hpp"

namespace ftmesh {

namespace detail {

inline Eigen::Ref<const RealVector> layer_phases(const MeshConfig& cfg,
                                                 const PhaseVector& phases,
                                                 int layer) {
  return phases.segment(static_cast<Eigen::Index>(layer) * (cfg.dim - 1),
                        cfg.dim - 1);
}

}  // namespace detail

// V = P_N F_d P_{N-1} F_d ... P_1 F_d P_0 for a unitary-mode config.
inline Matrix evaluate_unitary(const MeshConfig& cfg, const PhaseVector& phases) {
  cfg.validate();
  if (cfg.mode != Mode::Unitary)
    throw std::invalid_argument("evaluate_unitary: config is not in unitary mode");
  check_phase_length(cfg, phases);
  const int d = cfg.dim;
  const Matrix f = fourier_matrix(d);
  Matrix v = phase_layer_diagonal(d, detail::layer_phases(cfg, phases, 0)).asDiagonal();
  Matrix tmp(d, d);
  for (int j = 1; j <= cfg.ft_layers; ++j) {
    tmp.noalias() = f * v;
    v = phase_layer_diagonal(d, detail::layer_phases(cfg, phases, j)).asDiagonal() * tmp;
  }
  return v;
}

// (P_N F_d ... P_1 F_d)|1> for a state-mode config.
inline Vector evaluate_state(const MeshConfig& cfg, const PhaseVector& phases) {
  cfg.validate();
  if (cfg.mode != Mode::State)
    throw std::invalid_argument("evaluate_state: config is not in state mode");
  check_phase_length(cfg, phases);
  const int d = cfg.dim;
  const Matrix f = fourier_matrix(d);
  Vector v = Vector::Zero(d);
  v(0) = Complex(1.0, 0.0);
  for (int j = 0; j < cfg.ft_layers; ++j) {
    v = f * v;
    v = phase_layer_diagonal(d, detail::layer_phases(cfg, phases, j)).cwiseProduct(v);
  }
  return v;
}

namespace detail {

// max(0, 1 - x^2) evaluated as (1-x)(1+x); keeps relative meaning near zero.
inline double one_minus_square(double x) {
  const double v = (1.0 - x) * (1.0 + x);
  return v > 0.0 ? v : 0.0;
}

// Unitary-mode objective I(target, V(phi)) = 1 - |tr(target^dag V)|^2 / d^2
// together with its gradient w.r.t. every free phase. Gradient uses cached
// prefix/suffix products of the layer matrices.
inline double unitary_infidelity_and_gradient(const MeshConfig& cfg,
                                              const PhaseVector& phases,
                                              const Matrix& target,
                                              RealVector* grad) {
  const int d = cfg.dim;
  const int n_players = cfg.phase_layer_count();
  const Matrix f = fourier_matrix(d);

  std::vector<Vector> diags(n_players);
  for (int j = 0; j < n_players; ++j)
    diags[j] = phase_layer_diagonal(d, layer_phases(cfg, phases, j));

  // layer sequence A_0 = P_0, A_1 = F, A_2 = P_1, ..., A_{2N} = P_N
  const int m_count = 2 * cfg.ft_layers + 1;

  // pre[m] = A_m ... A_0, suf[m] = A_{M-1} ... A_m
  std::vector<Matrix> pre(m_count), suf(m_count);
  pre[0] = diags[0].asDiagonal();
  for (int m = 1; m < m_count; ++m) {
    if (m % 2 == 1)
      pre[m].noalias() = f * pre[m - 1];
    else
      pre[m] = diags[m / 2].asDiagonal() * pre[m - 1];
  }
  suf[m_count - 1] = diags[n_players - 1].asDiagonal();
  for (int m = m_count - 2; m >= 0; --m) {
    if (m % 2 == 1)
      suf[m].noalias() = suf[m + 1] * f;
    else
      suf[m] = suf[m + 1] * diags[m / 2].asDiagonal();
  }

  const Matrix& v = pre[m_count - 1];
  const Matrix udag = target.adjoint();
  const Complex t = (udag * v).trace();
  const double x = std::abs(t) / d;
  const double infid = one_minus_square(x);
  if (grad == nullptr) return infid;

  grad->resize(cfg.free_phase_count());
  const double scale = 2.0 / (static_cast<double>(d) * d);
  Matrix c(d, d);
  for (int j = 0; j < n_players; ++j) {
    const int m = 2 * j;
    // G = P_j * pre[m-1] * udag * suf[m+1]; only its diagonal is needed
    if (m + 1 < m_count)
      c.noalias() = udag * suf[m + 1];
    else
      c = udag;
    Vector diag_b(d);
    if (m > 0) {
      for (int k = 0; k < d; ++k) diag_b(k) = (pre[m - 1].row(k) * c.col(k)).value();
    } else {
      diag_b = c.diagonal();
    }
    for (int k = 1; k < d; ++k) {
      const Complex g_kk = diags[j](k) * diag_b(k);
      (*grad)(static_cast<Eigen::Index>(j) * (d - 1) + (k - 1)) =
          scale * std::imag(std::conj(t) * g_kk);
    }
  }
  return infid;
}

// State-mode objective I(V(phi)|1>, target) and its gradient; O(N d^2).
inline double state_infidelity_and_gradient(const MeshConfig& cfg,
                                            const PhaseVector& phases,
                                            const Vector& target,
                                            RealVector* grad) {
  const int d = cfg.dim;
  const int n_players = cfg.phase_layer_count();
  const Matrix f = fourier_matrix(d);

  std::vector<Vector> diags(n_players);
  for (int j = 0; j < n_players; ++j)
    diags[j] = phase_layer_diagonal(d, layer_phases(cfg, phases, j));

  // forward pass: r[j] = state entering phase layer j, s[j] = state leaving it
  std::vector<Vector> s(n_players);
  Vector v = Vector::Zero(d);
  v(0) = Complex(1.0, 0.0);
  std::vector<Vector> r(n_players);
  for (int j = 0; j < n_players; ++j) {
    v = f * v;
    r[j] = v;
    v = diags[j].cwiseProduct(v);
    s[j] = v;
  }
  const Complex c = target.dot(v);  // <target|psi>
  const double infid = one_minus_square(std::abs(c));
  if (grad == nullptr) return infid;

  grad->resize(cfg.free_phase_count());
  // backward pass: w[j] = L_j^dag target with L_j the layers after P_{j}
  Vector w = target;
  for (int j = n_players - 1; j >= 0; --j) {
    for (int k = 1; k < d; ++k) {
      (*grad)(static_cast<Eigen::Index>(j) * (d - 1) + (k - 1)) =
          2.0 * std::imag(std::conj(c) * s[j](k) * std::conj(w(k)));
    }
    w = diags[j].conjugate().cwiseProduct(w);
    w = f.adjoint() * w;
  }
  return infid;
}

}  // namespace detail

// Gradient of the unitary infidelity 1 - |tr(target^dag V(phi))|^2/d^2
// with respect to every free phase.
inline RealVector gradient_unitary(const MeshConfig& cfg, const PhaseVector& phases,
                                   const Matrix& target) {
  cfg.validate();
  if (cfg.mode != Mode::Unitary)
    throw std::invalid_argument("gradient_unitary: config is not in unitary mode");
  check_phase_length(cfg, phases);
  if (target.rows() != cfg.dim || target.cols() != cfg.dim)
    throw std::invalid_argument("gradient_unitary: target dimension mismatch");
  RealVector g;
  detail::unitary_infidelity_and_gradient(cfg, phases, target, &g);
  return g;
}

// Gradient of the state infidelity 1 - |<target|V(phi)|1>|^2.
inline RealVector gradient_state(const MeshConfig& cfg, const PhaseVector& phases,
                                 const Vector& target) {
  cfg.validate();
  if (cfg.mode != Mode::State)
    throw std::invalid_argument("gradient_state: config is not in state mode");
  check_phase_length(cfg, phases);
  if (target.size() != cfg.dim)
    throw std::invalid_argument("gradient_state: target dimension mismatch");
  RealVector g;
  detail::state_infidelity_and_gradient(cfg, phases, target, &g);
  return g;
}

}  // namespace ftmesh
