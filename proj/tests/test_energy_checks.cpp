#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mfnls/energy_checks.hpp"
#include "mfnls/errors.hpp"

using namespace mfnls;

TEST_CASE("block decomposition matches the assembled operator") {
  for (std::size_t n : {16, 32}) {
    Grid1D g(8.0, n);
    for (const auto& v : {PotentialSpec::gaussian_well(1.0, 1.0, 0.5), PotentialSpec::mixed_sign(1.0, 1.0, 0.25, 0.5)}) {
      const double b = sobolev_operator_norm(v, g, 2);
      CHECK(b == doctest::Approx(sobolev_operator_norm_dense(v, g, 2)).epsilon(1e-12));
      CHECK(check_sobolev_operator_bound(v, g, 2).pass);
    }
  }
}

TEST_CASE("pair positivity and the K inequality") {
  Grid1D g(8.0, 32);
  const auto v = PotentialSpec::gaussian_well(1.0, 1.0, 0.5);
  for (double w : {0.0, 1.0}) CHECK(check_pair_positivity(v, 2, w, g).pass);
  CHECK(check_K_inequality(v, 2, g).pass);
  // without the alpha shift -d^2/2 + V has a bound state below zero
  const auto none = PotentialSpec::none();
  const auto k = check_K_inequality(v, 2, g, 1e-6, &none);
  CHECK_FALSE(k.pass);
  CHECK(k.value < -0.1);
}

TEST_CASE("decomposition identity and the k = 1 estimate") {
  Grid1D g(8.0, 16);
  std::mt19937_64 rng(21);
  for (int N : {2, 3}) {
    NBodySystem sys(N, g, PotentialSpec::mixed_sign(1.0, 1.0, 0.25, 0.5), 1.0);
    const TensorState psi = random_symmetric_state(g, N, 1.0, rng);
    CHECK(check_decomposition_identity(sys, psi) < 1e-12);
    CHECK(check_energy_estimate(sys, psi, 1).margin > 0.0);
  }
  NBodySystem one(2, g, PotentialSpec::gaussian_well(1.0, 1.0, 0.5), 0.0);
  CHECK_THROWS_AS(check_energy_estimate(one, random_symmetric_state(g, 2, 0.0, rng), 3), DomainError);
}

TEST_CASE("commuting product of ordered positive matrices") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  auto psd = [&](int n) {
    RMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
    return RMat(a * a.transpose());
  };
  const RMat a1 = psd(4), b1 = psd(5);
  const RMat a2 = a1 + psd(4), b2 = b1 + psd(5);
  CHECK(check_commuting_product(a1, a2, b1, b2).pass);
  CHECK_THROWS_AS(check_commuting_product(a2, a1 - psd(4) - psd(4), b1, b2), DomainError);
}

TEST_CASE("sup and derivative norms") {
  Grid1D g(10.0, 256);
  CVec f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-0.5 * g.x(j) * g.x(j));
  const auto [sup, l1] = sup_and_derivative_l1(g, f);
  CHECK(sup == doctest::Approx(1.0));
  // rectangle sum of |x| e^{-x^2/2} on this grid (numpy); the kink at 0 costs ~h^2/6 against 2
  CHECK(l1 == doctest::Approx(1.9989824367291646).epsilon(1e-12));
  // pi^{-1/4} / sqrt(3/2) for the normalized Gaussian at omega = 1
  CHECK(sobolev_ratio(g, gaussian_profile(g, 0.0, 1.0), 1.0) ==
        doctest::Approx(std::pow(std::numbers::pi, -0.25) / std::sqrt(1.5)).epsilon(1e-10));
}
