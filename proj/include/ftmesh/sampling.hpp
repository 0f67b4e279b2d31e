#pragma once

#include <numbers>
#include <optional>
#include <utility>

#include "ftmesh/circuit.hpp"
#include "ftmesh/rng.hpp"
#include "ftmesh/types.hpp"

namespace ftmesh {

enum class TargetKind { HaarUnitary, HaarState, BlockDiagonal, Planted };

inline const char* to_string(TargetKind k) {
  switch (k) {
    case TargetKind::HaarUnitary: return "haar-unitary";
    case TargetKind::HaarState: return "haar-state";
    case TargetKind::BlockDiagonal: return "block-diagonal";
    case TargetKind::Planted: return "planted";
  }
  return "?";
}

struct TargetSpec {
  TargetKind kind = TargetKind::HaarUnitary;
  Matrix matrix;  // unitary targets
  Vector state;   // state targets
  SeedSpec provenance;
  std::optional<std::pair<int, int>> block_dims;

  bool is_state() const { return state.size() > 0; }
  int dim() const {
    return is_state() ? static_cast<int>(state.size())
                      : static_cast<int>(matrix.rows());
  }
};

// Haar-uniform unitary via the Ginibre + QR construction. The diagonal of R
// is rotated to positive reals, which makes the QR-based map well defined and
// the distribution exactly Haar.
inline Matrix haar_unitary(int d, const SeedSpec& seed) {
  if (d < 1) throw std::invalid_argument("haar_unitary: dimension must be >= 1");
  Rng rng(seed);
  Matrix z(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) z(j, k) = rng.normal_complex();
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int k = 0; k < d; ++k) {
    const Complex rkk = r(k, k);
    const double a = std::abs(rkk);
    q.col(k) *= (a > 0.0) ? rkk / a : Complex(1.0, 0.0);
  }
  return q;
}

// Haar-uniform pure state: normalized complex Gaussian vector.
inline Vector haar_state(int d, const SeedSpec& seed) {
  if (d < 1) throw std::invalid_argument("haar_state: dimension must be >= 1");
  Rng rng(seed);
  Vector v(d);
  for (int j = 0; j < d; ++j) v(j) = rng.normal_complex();
  v /= v.norm();
  return v;
}

// U_{d1} (+) U_{d2}, both blocks independently Haar. d1 = d2 = d/2 for even d,
// d1 = (d-1)/2 and d2 = (d+1)/2 for odd d. Off-block entries are exact zeros.
inline TargetSpec block_diagonal_unitary(int d, const SeedSpec& seed) {
  if (d < 2)
    throw std::invalid_argument("block_diagonal_unitary: dimension must be >= 2");
  const int d1 = d / 2;
  const int d2 = d - d1;
  Matrix u = Matrix::Zero(d, d);
  u.topLeftCorner(d1, d1) = haar_unitary(d1, seed.child(0));
  u.bottomRightCorner(d2, d2) = haar_unitary(d2, seed.child(1));
  TargetSpec t;
  t.kind = TargetKind::BlockDiagonal;
  t.matrix = std::move(u);
  t.provenance = seed;
  t.block_dims = {d1, d2};
  return t;
}

// Target obtained by forward-evaluating the circuit at phases drawn uniform
// in [0, 2pi); guarantees a zero-infidelity solution exists.
inline std::pair<TargetSpec, PhaseVector> planted_target(const MeshConfig& cfg,
                                                         const SeedSpec& seed) {
  cfg.validate();
  Rng rng(seed);
  PhaseVector phases(cfg.free_phase_count());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  TargetSpec t;
  t.kind = TargetKind::Planted;
  t.provenance = seed;
  if (cfg.mode == Mode::Unitary)
    t.matrix = evaluate_unitary(cfg, phases);
  else
    t.state = evaluate_state(cfg, phases);
  return {std::move(t), std::move(phases)};
}

}  // namespace ftmesh
