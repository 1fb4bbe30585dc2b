#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mfnls/errors.hpp"
#include "mfnls/lens.hpp"

using namespace mfnls;

TEST_CASE("time maps") {
  const LensMap m{1.0};
  CHECK(m.tau_of(0.4) == doctest::Approx(std::tan(0.4)));
  CHECK(m.time_of(m.tau_of(0.7)) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_NOTHROW(m.check_window(1.0));
  CHECK_THROWS_AS(m.check_window(1.5), DomainError);  // cos 1.5 < 0.2
  const LensMap id{0.0};
  CHECK(id.tau_of(3.0) == 3.0);
}

TEST_CASE("interpolation at unit scale is the identity") {
  Grid1D g(8.0, 32);
  const RMat p = interpolation_matrix(g, 1.0);
  CHECK((p - RMat::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("lens round trip and kernel consistency") {
  Grid1D g(8.0, 64);
  const LensMap m{1.0};
  const TensorState u{1, g, gaussian_profile(g, 0.3, 1.0, 0.5), 0.0};
  const double tau = m.tau_of(0.4);
  const TensorState psi = lens_function(m, u, tau).state;
  CHECK(lens_function(m, u, tau).time == doctest::Approx(0.4));
  CHECK(std::abs(norm(psi) - 1.0) < 1e-12);
  CHECK(max_abs_diff(inverse_lens_function(m, psi, 0.4).state, u) < 1e-10);

  // the kernel map acts on |u><u| as |Mu><Mu|
  MarginalDensity K{1, g, CMat(64, 64)};
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j) K.kernel(Eigen::Index(i), Eigen::Index(j)) = u.amp[i] * std::conj(u.amp[j]);
  const MarginalDensity LK = lens_kernel(m, K, tau).kernel;
  double err = 0.0;
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j)
      err = std::max(err, std::abs(LK.kernel(Eigen::Index(i), Eigen::Index(j)) - psi.amp[i] * std::conj(psi.amp[j])));
  CHECK(err < 1e-12);
  CHECK((inverse_lens_kernel(m, LK, 0.4).kernel.kernel - K.kernel).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("free flow phases") {
  Grid1D g(8.0, 32);
  const CVec f = plane_wave(g, 3);
  const double k = 3.0 * std::numbers::pi / 8.0;
  const CVec h = free_flow(g, f, 0.2, KineticConvention::half);
  const CVec w = free_flow(g, f, 0.2, KineticConvention::full);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(h[j] - std::exp(cplx(0.0, -0.1 * k * k)) * f[j]) < 1e-13);
    CHECK(std::abs(w[j] - std::exp(cplx(0.0, -0.2 * k * k)) * f[j]) < 1e-13);
  }
}

TEST_CASE("linear intertwining picks the half convention") {
  Grid1D g(8.0, 64);
  const LensMap m{1.0};
  const CVec phi = gaussian_profile(g, 0.5, 1.0, 1.0);
  CHECK(intertwine_linear_check(m, g, phi, 0.4, KineticConvention::half) < 1e-5);
  CHECK(intertwine_linear_check(m, g, phi, 0.4, KineticConvention::full) > 1e-1);
  CHECK(intertwine_linear_check(LensMap{0.0}, g, phi, 0.4, KineticConvention::half) < 1e-6);
}

TEST_CASE("escaping the box is a resolution error") {
  Grid1D g(4.0, 32);
  const LensMap m{1.0};
  // the inverse map widens by 1/cos(omega t): width 0.8 becomes 2.2 on a box of half-length 4
  const TensorState psi{1, g, gaussian_profile(g, 0.0, 0.8), 1.0};
  CHECK_THROWS_AS(inverse_lens_function(m, psi, 1.2), ResolutionError);
  CHECK_NOTHROW(inverse_lens_function(m, psi, 0.2));
}
