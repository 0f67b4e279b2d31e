#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "ftmesh/circuit.hpp"
#include "ftmesh/parallel.hpp"
#include "ftmesh/rng.hpp"
#include "ftmesh/sampling.hpp"
#include "ftmesh/types.hpp"

namespace ftmesh {

struct OptimSettings {
  int n_starts = 30;
  int max_iterations = 10000;
  double grad_tolerance = 1e-12;
  double infidelity_target = 1e-15;  // early stop at the double noise floor
  int jobs = 1;

  static OptimSettings defaults_for(Mode mode) {
    OptimSettings s;
    s.n_starts = mode == Mode::Unitary ? 30 : 20;
    return s;
  }

  void validate() const {
    if (n_starts < 1) throw std::invalid_argument("OptimSettings: n_starts must be >= 1");
    if (max_iterations < 0)
      throw std::invalid_argument("OptimSettings: max_iterations must be >= 0");
    if (grad_tolerance <= 0.0 || infidelity_target <= 0.0)
      throw std::invalid_argument("OptimSettings: tolerances must be positive");
  }
};

enum class StartStatus {
  ConvergedGradient,  // gradient norm below tolerance
  ConvergedTarget,    // objective below infidelity_target
  Stalled,            // line search could make no further progress
  MaxIterations,
  Aborted,  // non-finite objective
};

inline const char* to_string(StartStatus s) {
  switch (s) {
    case StartStatus::ConvergedGradient: return "converged-gradient";
    case StartStatus::ConvergedTarget: return "converged-target";
    case StartStatus::Stalled: return "stalled";
    case StartStatus::MaxIterations: return "max-iterations";
    case StartStatus::Aborted: return "aborted";
  }
  return "?";
}

struct StartReport {
  int start_index = 0;
  double final_infidelity = std::numeric_limits<double>::infinity();
  int iterations = 0;
  StartStatus status = StartStatus::Aborted;

  bool converged() const {
    return status == StartStatus::ConvergedGradient ||
           status == StartStatus::ConvergedTarget;
  }
};

struct OptimResult {
  PhaseVector best_phases;
  double best_infidelity = std::numeric_limits<double>::infinity();
  int best_start = -1;
  std::vector<StartReport> per_start;
  double wall_time_ms = 0.0;
  SeedSpec seed;

  long total_iterations() const {
    long n = 0;
    for (const auto& r : per_start) n += r.iterations;
    return n;
  }
};

struct MultiStartError : std::runtime_error {
  std::vector<StartReport> reports;
  explicit MultiStartError(std::vector<StartReport> r)
      : std::runtime_error("multi_start: all starts aborted"), reports(std::move(r)) {}
};

// Subset of free phases exposed to the optimizer; the rest are fixed to 0.
// Used by the phase-reduction ablations.
struct PhaseSubset {
  int full_size = 0;
  std::vector<int> active;  // strictly increasing indices into the full vector

  static PhaseSubset all(int n) {
    PhaseSubset s;
    s.full_size = n;
    s.active.resize(n);
    std::iota(s.active.begin(), s.active.end(), 0);
    return s;
  }

  static PhaseSubset without(int n, const std::vector<int>& fixed) {
    PhaseSubset s;
    s.full_size = n;
    for (int i = 0; i < n; ++i)
      if (std::find(fixed.begin(), fixed.end(), i) == fixed.end())
        s.active.push_back(i);
    return s;
  }

  int size() const { return static_cast<int>(active.size()); }

  PhaseVector expand(const RealVector& x) const {
    PhaseVector full = PhaseVector::Zero(full_size);
    for (int i = 0; i < size(); ++i) full(active[i]) = x(i);
    return full;
  }

  std::vector<int> fixed_indices() const {
    std::vector<int> fixed;
    int j = 0;
    for (int i = 0; i < full_size; ++i) {
      if (j < size() && active[j] == i)
        ++j;
      else
        fixed.push_back(i);
    }
    return fixed;
  }
};

// Infidelity objective over the reduced phase vector, for either mode.
class InfidelityObjective {
 public:
  InfidelityObjective(const MeshConfig& cfg, const TargetSpec& target,
                      PhaseSubset subset)
      : cfg_(cfg), target_(&target), subset_(std::move(subset)) {
    cfg_.validate();
    if (target.is_state() != (cfg.mode == Mode::State))
      throw std::invalid_argument("objective: target kind incompatible with mode");
    if (target.dim() != cfg.dim)
      throw std::invalid_argument("objective: target dimension mismatch");
    if (subset_.full_size != cfg.free_phase_count())
      throw std::invalid_argument("objective: subset size mismatch");
  }

  int size() const { return subset_.size(); }
  const PhaseSubset& subset() const { return subset_; }
  const MeshConfig& config() const { return cfg_; }

  double value(const RealVector& x) const {
    const PhaseVector full = subset_.expand(x);
    if (cfg_.mode == Mode::Unitary)
      return detail::unitary_infidelity_and_gradient(cfg_, full, target_->matrix, nullptr);
    return detail::state_infidelity_and_gradient(cfg_, full, target_->state, nullptr);
  }

  double value_and_gradient(const RealVector& x, RealVector& grad) const {
    const PhaseVector full = subset_.expand(x);
    RealVector full_grad;
    double f;
    if (cfg_.mode == Mode::Unitary)
      f = detail::unitary_infidelity_and_gradient(cfg_, full, target_->matrix, &full_grad);
    else
      f = detail::state_infidelity_and_gradient(cfg_, full, target_->state, &full_grad);
    grad.resize(size());
    for (int i = 0; i < size(); ++i) grad(i) = full_grad(subset_.active[i]);
    return f;
  }

 private:
  MeshConfig cfg_;
  const TargetSpec* target_;
  PhaseSubset subset_;
};

namespace detail {

struct BfgsOutcome {
  RealVector x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  StartStatus status = StartStatus::Aborted;
};

// Strong-Wolfe line search (bracket + zoom with bisection). Returns true and
// fills (alpha, x, f, g) on success; on failure the inputs are untouched.
template <typename Objective>
bool wolfe_line_search(const Objective& obj, const RealVector& x0, double f0,
                       double dphi0, const RealVector& p, double alpha_init,
                       RealVector& x_out, double& f_out, RealVector& g_out) {
  constexpr double c1 = 1e-4;
  constexpr double c2 = 0.9;
  constexpr int max_evals = 60;

  auto eval = [&](double a, double& f, RealVector& g, double& dphi) {
    x_out = x0 + a * p;
    f = obj.value_and_gradient(x_out, g);
    dphi = g.dot(p);
  };

  double a_prev = 0.0, f_prev = f0, dphi_prev = dphi0;
  double a = alpha_init;
  double f, dphi;
  RealVector g(x0.size());
  int evals = 0;

  double lo = -1.0, hi = -1.0;        // bracket
  double f_lo = 0.0, dphi_lo = 0.0;

  // bracketing phase
  for (;;) {
    if (evals++ >= max_evals) return false;
    eval(a, f, g, dphi);
    if (!std::isfinite(f)) return false;
    if (f > f0 + c1 * a * dphi0 || (evals > 1 && f >= f_prev)) {
      lo = a_prev; f_lo = f_prev; dphi_lo = dphi_prev;
      hi = a;
      break;
    }
    if (std::abs(dphi) <= -c2 * dphi0) {
      f_out = f;
      g_out = g;
      return true;
    }
    if (dphi >= 0.0) {
      lo = a; f_lo = f; dphi_lo = dphi;
      hi = a_prev;
      break;
    }
    a_prev = a; f_prev = f; dphi_prev = dphi;
    a *= 2.0;
    if (a > 1e6) return false;
  }

  // zoom phase
  (void)f_lo;
  (void)dphi_lo;
  double best_a = -1.0, best_f = f0;
  RealVector best_g;
  for (; evals < max_evals; ++evals) {
    a = 0.5 * (lo + hi);
    eval(a, f, g, dphi);
    if (!std::isfinite(f)) return false;
    if (f > f0 + c1 * a * dphi0 || f >= f_lo) {
      hi = a;
    } else {
      if (f < best_f) { best_a = a; best_f = f; best_g = g; }
      if (std::abs(dphi) <= -c2 * dphi0) {
        f_out = f;
        g_out = g;
        return true;
      }
      if (dphi * (hi - lo) >= 0.0) hi = lo;
      lo = a; f_lo = f; dphi_lo = dphi;
    }
    if (std::abs(hi - lo) <= 1e-18 * std::max(1.0, std::abs(lo))) break;
  }
  // no Wolfe point, but accept the best sufficient decrease seen
  if (best_a > 0.0 && best_f < f0) {
    x_out = x0 + best_a * p;
    f_out = best_f;
    g_out = best_g;
    return true;
  }
  return false;
}

// BFGS with inverse-Hessian updates and a strong-Wolfe line search. The
// objective is 2pi-periodic and bounded, so no box constraints are needed.
template <typename Objective>
BfgsOutcome bfgs_minimize(const Objective& obj, const RealVector& init,
                          const OptimSettings& settings) {
  const int n = static_cast<int>(init.size());
  BfgsOutcome out;
  out.x = init;

  RealVector g(n);
  double f;
  try {
    f = obj.value_and_gradient(out.x, g);
  } catch (...) {
    out.status = StartStatus::Aborted;
    return out;
  }
  if (!std::isfinite(f) || !g.allFinite()) {
    out.status = StartStatus::Aborted;
    return out;
  }
  out.f = f;

  if (n == 0) {
    out.status = StartStatus::ConvergedGradient;
    return out;
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool h_is_identity = true;
  bool first_update = true;
  RealVector x_new(n), g_new(n);
  double f_new;

  out.status = StartStatus::MaxIterations;
  while (out.iterations < settings.max_iterations) {
    if (out.f <= settings.infidelity_target) {
      out.status = StartStatus::ConvergedTarget;
      return out;
    }
    if (g.norm() <= settings.grad_tolerance) {
      out.status = StartStatus::ConvergedGradient;
      return out;
    }

    RealVector p = -(h * g);
    double dphi0 = p.dot(g);
    if (!(dphi0 < 0.0)) {  // not a descent direction, reset
      h.setIdentity();
      h_is_identity = true;
      first_update = true;
      p = -g;
      dphi0 = -g.squaredNorm();
    }

    bool ok = wolfe_line_search(obj, out.x, out.f, dphi0, p, 1.0, x_new, f_new, g_new);
    if (!ok && !h_is_identity) {
      h.setIdentity();
      h_is_identity = true;
      first_update = true;
      p = -g;
      dphi0 = -g.squaredNorm();
      const double a0 = std::min(1.0, 1.0 / std::max(g.norm(), 1e-12));
      ok = wolfe_line_search(obj, out.x, out.f, dphi0, p, a0, x_new, f_new, g_new);
    }
    if (!ok) {
      out.status = StartStatus::Stalled;
      return out;
    }
    if (!std::isfinite(f_new) || !g_new.allFinite()) {
      out.status = StartStatus::Aborted;
      return out;
    }

    const RealVector s = x_new - out.x;
    const RealVector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (first_update) {
        h = (sy / y.squaredNorm()) * Eigen::MatrixXd::Identity(n, n);
        first_update = false;
      }
      const double rho = 1.0 / sy;
      const RealVector hy = h * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      h.noalias() -= rho * (s * hy.transpose());
      h.noalias() -= rho * (hy * s.transpose());
      h.noalias() += (rho * rho * (y.dot(hy)) + rho) * (s * s.transpose());
      h_is_identity = false;
    }

    out.x = x_new;
    out.f = f_new;
    g = g_new;
    ++out.iterations;
  }
  // final convergence checks after exhausting the budget
  if (out.f <= settings.infidelity_target)
    out.status = StartStatus::ConvergedTarget;
  else if (g.norm() <= settings.grad_tolerance)
    out.status = StartStatus::ConvergedGradient;
  return out;
}

}  // namespace detail

struct LocalResult {
  PhaseVector phases;
  double infidelity = std::numeric_limits<double>::infinity();
  int iterations = 0;
  StartStatus status = StartStatus::Aborted;
};

// Single local quasi-Newton descent from a given initial phase vector.
inline LocalResult local_minimize(const MeshConfig& cfg, const TargetSpec& target,
                                  const PhaseVector& init, const OptimSettings& settings,
                                  const PhaseSubset& subset) {
  settings.validate();
  check_phase_length(cfg, init);
  InfidelityObjective obj(cfg, target, subset);
  RealVector x0(subset.size());
  for (int i = 0; i < subset.size(); ++i) x0(i) = init(subset.active[i]);
  const auto outcome = detail::bfgs_minimize(obj, x0, settings);
  LocalResult res;
  res.phases = subset.expand(outcome.x);
  res.infidelity = outcome.f;
  res.iterations = outcome.iterations;
  res.status = outcome.status;
  return res;
}

inline LocalResult local_minimize(const MeshConfig& cfg, const TargetSpec& target,
                                  const PhaseVector& init, const OptimSettings& settings) {
  return local_minimize(cfg, target, init, settings,
                        PhaseSubset::all(cfg.free_phase_count()));
}

// Multi-start protocol: n_starts independent descents from phases drawn
// uniform in [0, 2pi) on per-start substreams seed.child(s); the best local
// minimum wins, ties broken by lowest start index. The result is invariant
// to the execution order of the starts.
inline OptimResult multi_start(const MeshConfig& cfg, const TargetSpec& target,
                               const OptimSettings& settings, const SeedSpec& seed,
                               const PhaseSubset& subset) {
  settings.validate();
  const auto t0 = std::chrono::steady_clock::now();
  InfidelityObjective obj(cfg, target, subset);
  const int n = subset.size();

  std::vector<detail::BfgsOutcome> outcomes(settings.n_starts);
  parallel_for(settings.n_starts, settings.jobs, [&](int s) {
    Rng rng(seed.child(static_cast<std::uint64_t>(s)));
    RealVector x0(n);
    for (int i = 0; i < n; ++i) x0(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
    outcomes[s] = detail::bfgs_minimize(obj, x0, settings);
  });

  OptimResult result;
  result.seed = seed;
  result.per_start.reserve(settings.n_starts);
  for (int s = 0; s < settings.n_starts; ++s) {
    StartReport r;
    r.start_index = s;
    r.status = outcomes[s].status;
    r.iterations = outcomes[s].iterations;
    if (r.status != StartStatus::Aborted) r.final_infidelity = outcomes[s].f;
    result.per_start.push_back(r);
    if (r.status != StartStatus::Aborted &&
        outcomes[s].f < result.best_infidelity) {
      result.best_infidelity = outcomes[s].f;
      result.best_start = s;
    }
  }
  if (result.best_start < 0) throw MultiStartError(result.per_start);
  result.best_phases = subset.expand(outcomes[result.best_start].x);
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

inline OptimResult multi_start(const MeshConfig& cfg, const TargetSpec& target,
                               const OptimSettings& settings, const SeedSpec& seed) {
  return multi_start(cfg, target, settings, seed,
                     PhaseSubset::all(cfg.free_phase_count()));
}

}  // namespace ftmesh
