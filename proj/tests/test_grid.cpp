#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mfnls/errors.hpp"
#include "mfnls/grid.hpp"

using namespace mfnls;

TEST_CASE("points and wavenumbers") {
  Grid1D g(8.0, 16);
  CHECK(g.spacing() == doctest::Approx(1.0));
  CHECK(g.x(0) == -8.0);
  CHECK(g.x(15) == doctest::Approx(7.0));
  CHECK(g.k(1) == doctest::Approx(std::numbers::pi / 8.0));
  CHECK(g.k(8) == doctest::Approx(-std::numbers::pi));  // Nyquist stored negative
  CHECK(g.k(15) == doctest::Approx(-std::numbers::pi / 8.0));
  CHECK_THROWS_AS(Grid1D(8.0, 12), DomainError);
  CHECK_THROWS_AS(Grid1D(-1.0, 16), DomainError);
}

TEST_CASE("plane wave lands in one Fourier bin") {
  Grid1D g(4.0, 32);
  CVec f = plane_wave(g, 3);
  dft_all_inplace(f.data(), 1, g.size(), Direction::forward);
  const double peak = double(g.size()) / std::sqrt(2.0 * g.half_length());
  for (std::size_t m = 0; m < g.size(); ++m) CHECK(std::abs(f[m]) == doctest::Approx(m == 3 ? peak : 0.0).epsilon(1e-12));
}

TEST_CASE("round trip and Parseval") {
  Grid1D g(6.0, 64);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  CVec f(g.size());
  for (auto& v : f) v = {nd(rng), nd(rng)};
  CVec F = f;
  dft_all_inplace(F.data(), 1, g.size(), Direction::forward);
  double spec = 0.0;
  for (auto v : F) spec += std::norm(v);
  CHECK(norm1(g, f) * norm1(g, f) == doctest::Approx(g.spacing() / double(g.size()) * spec).epsilon(1e-13));
  dft_all_inplace(F.data(), 1, g.size(), Direction::inverse);
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(std::abs(F[j] - f[j]) < 1e-13);
}

TEST_CASE("Sobolev weights of the Gaussian") {
  // normalized e^{-x^2/2}: <-f''/2> = 1/4, <x^2/2> = 1/4
  Grid1D g(10.0, 128);
  const CVec f = gaussian_profile(g, 0.0, 1.0);
  CHECK(weighted_norm_squared({1, g, f, 1.0}, {WeightKind::S, {0}}) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(weighted_norm_squared({1, g, f, 0.0}, {WeightKind::S, {0}}) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(weighted_norm_squared({1, g, f, 0.0}, {WeightKind::L, {0}}) == doctest::Approx(1.5).epsilon(1e-12));
  const TensorState p = product_state(g, f, 2, 1.0);
  CHECK(weighted_norm_squared(p, {WeightKind::S, {0, 1}}) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(weighted_norm_squared(p, {WeightKind::S, {1}}) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("symmetrization") {
  Grid1D g(8.0, 16);
  std::mt19937_64 rng(11);
  const TensorState r = random_symmetric_state(g, 3, 0.0, rng);
  CHECK(symmetry_residual(r) < 1e-14);
  CHECK(norm(r) == doctest::Approx(1.0).epsilon(1e-13));
  const TensorState q = permute_axes(r, {2, 0, 1});
  CHECK(max_abs_diff(q, r) < 1e-14);

  const CVec a = gaussian_profile(g, -1.0, 1.0), b = gaussian_profile(g, 1.0, 1.0);
  TensorState ab = tensor_product(g, {a, b}), ba = tensor_product(g, {b, a});
  TensorState anti = ab;
  for (std::size_t i = 0; i < anti.size(); ++i) anti.amp[i] -= ba.amp[i];
  CHECK_THROWS_AS(symmetrize(anti), DegenerateInput);
  const TensorState s = symmetrize(ab);
  CHECK(symmetry_residual(s) < 1e-14);
}
