#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "ftmesh/types.hpp"

namespace ftmesh {

namespace detail {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic seed lineage: a master seed plus a path of stream indices.
// Equal (master_seed, stream_path) always yields the identical stream,
// independent of execution order or worker count.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> stream_path;

  SeedSpec child(std::uint64_t index) const {
    SeedSpec s = *this;
    s.stream_path.push_back(index);
    return s;
  }

  std::uint64_t derive() const {
    std::uint64_t h = detail::splitmix64_mix(master_seed);
    for (std::uint64_t p : stream_path)
      h = detail::splitmix64_mix(h ^ detail::splitmix64_mix(p));
    return h;
  }
};

inline const char* generator_name() { return "splitmix64-boxmuller"; }

// Counter-based stream generator (splitmix64). Gaussian variates via
// Box-Muller so that outputs are bit-reproducible across platforms, unlike
// std::normal_distribution.
class Rng {
 public:
  explicit Rng(const SeedSpec& seed) : state_(seed.derive()) {}
  explicit Rng(std::uint64_t raw_state) : state_(raw_state) {}

  std::uint64_t next_u64() { return detail::splitmix64_mix(state_++); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  Complex normal_complex() { return Complex(normal(), normal()); }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace ftmesh
