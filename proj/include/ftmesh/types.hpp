#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ftmesh {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Free phase parameters of all phase-shifter layers, flattened layer-major.
// Within each layer the entries are the phases of modes 2..d; mode 1 is
// pinned to zero and has no entry here.
using PhaseVector = Eigen::VectorXd;

enum class Mode { Unitary, State };

inline const char* to_string(Mode m) {
  return m == Mode::Unitary ? "unitary" : "state";
}

// Circuit topology: N Fourier layers interleaved with phase-shifter layers.
// Unitary mode has N+1 phase layers (P_0..P_N); state mode acts on the fixed
// input |1> and drops P_0, leaving N phase layers (P_1..P_N).
struct MeshConfig {
  int dim = 2;
  int ft_layers = 1;
  Mode mode = Mode::Unitary;

  int phase_layer_count() const {
    return mode == Mode::Unitary ? ft_layers + 1 : ft_layers;
  }
  int free_phase_count() const { return phase_layer_count() * (dim - 1); }

  void validate() const {
    if (dim < 2) throw std::invalid_argument("MeshConfig: dim must be >= 2");
    if (ft_layers < 1)
      throw std::invalid_argument("MeshConfig: ft_layers must be >= 1");
  }
};

inline void check_phase_length(const MeshConfig& cfg, const PhaseVector& phases) {
  if (phases.size() != cfg.free_phase_count())
    throw std::invalid_argument(
        "phase vector has length " + std::to_string(phases.size()) +
        ", config requires " + std::to_string(cfg.free_phase_count()));
}

}  // namespace ftmesh
