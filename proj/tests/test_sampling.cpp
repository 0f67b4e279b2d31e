#include <doctest.h>

#include <algorithm>

#include <ftmesh/ftmesh.hpp>

#include "test_support.hpp"

using namespace ftmesh;

TEST_CASE("haar_unitary: determinism and unitarity") {
  const SeedSpec seed{42, {1, 2, 3}};
  const Matrix a = haar_unitary(5, seed);
  const Matrix b = haar_unitary(5, seed);
  CHECK(a == b);  // bit-identical
  CHECK(unitarity_defect(a) <= 1e-12);
  const Matrix c = haar_unitary(5, seed.child(0));
  CHECK((a - c).cwiseAbs().maxCoeff() > 1e-3);  // different stream
}

TEST_CASE("haar_unitary: d=1 gives a unit-modulus scalar") {
  const Matrix u = haar_unitary(1, SeedSpec{7, {}});
  CHECK(std::abs(std::abs(u(0, 0)) - 1.0) <= 1e-14);
}

TEST_CASE("haar_unitary: invalid dimension") {
  CHECK_THROWS_AS(haar_unitary(0, SeedSpec{}), std::invalid_argument);
}

TEST_CASE("haar moment E|U_11|^2 = 1/d within 3 standard errors") {
  const int d = 4;
  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Matrix u = haar_unitary(d, SeedSpec{101, {static_cast<uint64_t>(i)}});
    const double v = std::norm(u(0, 0));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double se = std::sqrt(var / n);
  CHECK(std::abs(mean - 1.0 / d) <= 3.0 * se);
}

TEST_CASE("haar_state: normalization, determinism, moment") {
  const SeedSpec seed{55, {9}};
  const Vector a = haar_state(3, seed);
  CHECK(a == haar_state(3, seed));
  CHECK(std::abs(a.norm() - 1.0) <= 1e-12);

  const Vector s1 = haar_state(1, SeedSpec{55, {1}});
  CHECK(std::abs(std::abs(s1(0)) - 1.0) <= 1e-14);

  const int d = 3, n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector v = haar_state(d, SeedSpec{56, {static_cast<uint64_t>(i)}});
    const double x = std::norm(v(0));
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0 / d) <= 3.0 * se);
}

TEST_CASE("haar left invariance: |(WU)_11|^2 vs |U_11|^2 two-sample KS") {
  const int d = 3, n = 10000;
  const Matrix w = haar_unitary(d, SeedSpec{200, {}});
  std::vector<double> plain(n), rotated(n);
  for (int i = 0; i < n; ++i) {
    const Matrix u = haar_unitary(d, SeedSpec{201, {static_cast<uint64_t>(i)}});
    const Matrix u2 = haar_unitary(d, SeedSpec{202, {static_cast<uint64_t>(i)}});
    plain[i] = std::norm(u(0, 0));
    rotated[i] = std::norm((w * u2)(0, 0));
  }
  std::sort(plain.begin(), plain.end());
  std::sort(rotated.begin(), rotated.end());
  // two-sample KS statistic
  double dmax = 0.0;
  std::size_t i = 0, j = 0;
  while (i < plain.size() && j < rotated.size()) {
    if (plain[i] <= rotated[j])
      ++i;
    else
      ++j;
    dmax = std::max(dmax, std::abs(static_cast<double>(i) / n -
                                   static_cast<double>(j) / n));
  }
  const double crit = 1.628 * std::sqrt(2.0 / n);  // 1% level
  CHECK(dmax < crit);
}

TEST_CASE("block_diagonal_unitary structure") {
  SUBCASE("even split") {
    const TargetSpec t = block_diagonal_unitary(6, SeedSpec{1, {}});
    REQUIRE(t.block_dims.has_value());
    CHECK(t.block_dims->first == 3);
    CHECK(t.block_dims->second == 3);
  }
  SUBCASE("odd split") {
    const TargetSpec t = block_diagonal_unitary(5, SeedSpec{1, {}});
    REQUIRE(t.block_dims.has_value());
    CHECK(t.block_dims->first == 2);
    CHECK(t.block_dims->second == 3);
  }
  SUBCASE("off-block entries are exactly zero, matrix unitary") {
    for (int d = 2; d <= 8; ++d) {
      const TargetSpec t = block_diagonal_unitary(d, SeedSpec{9, {static_cast<uint64_t>(d)}});
      const auto [d1, d2] = *t.block_dims;
      CHECK(d1 + d2 == d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          const bool in_block = (r < d1 && c < d1) || (r >= d1 && c >= d1);
          if (!in_block) CHECK(t.matrix(r, c) == Complex(0.0, 0.0));
        }
      CHECK(unitarity_defect(t.matrix) <= 1e-12);
    }
  }
  SUBCASE("d < 2 rejected") {
    CHECK_THROWS_AS(block_diagonal_unitary(1, SeedSpec{}), std::invalid_argument);
  }
}

TEST_CASE("planted_target: exact recovery and phase counts") {
  {
    MeshConfig cfg{3, 4, Mode::Unitary};
    auto [target, phases] = planted_target(cfg, SeedSpec{77, {}});
    CHECK(phases.size() == 10);
    CHECK(unitary_infidelity(target.matrix, evaluate_unitary(cfg, phases)) <= 1e-14);
  }
  {
    MeshConfig cfg{4, 3, Mode::State};
    auto [target, phases] = planted_target(cfg, SeedSpec{78, {}});
    CHECK(phases.size() == 9);
    CHECK(state_infidelity(target.state, evaluate_state(cfg, phases)) <= 1e-14);
  }
}
