#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mfnls/errors.hpp"
#include "mfnls/marginals.hpp"

using namespace mfnls;

TEST_CASE("marginals of a product state") {
  Grid1D g(8.0, 16);
  const CVec f = gaussian_profile(g, 0.5, 1.0, 0.7);
  const TensorState psi = product_state(g, f, 3);
  for (int k : {1, 2}) {
    const MarginalDensity m = partial_trace(psi, k);
    CHECK(trace(m) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(chaos_distance(psi, k, f) < 1e-13);
    const auto d = diagnose(m);
    CHECK(d.hermiticity < 1e-14);
    CHECK(d.min_eigenvalue > -1e-13);
  }
  const MarginalDensity two = product_projector(g, f, 2);
  const MarginalDensity one = trace_out_last(two);
  CHECK((one.kernel - product_projector(g, f, 1).kernel).cwiseAbs().maxCoeff() < 1e-13);
  const auto top = top_eigenvalues(one, 3);
  CHECK(top[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(top[1]) < 1e-13);
  CHECK_THROWS_AS(chaos_distance(psi, 4, f), DomainError);
}

TEST_CASE("trace norm of a difference of pure states") {
  // || |a><a| - |b><b| ||_1 = 2 sqrt(1 - |<a,b>|^2)
  Grid1D g(8.0, 64);
  const CVec a = gaussian_profile(g, -0.5, 1.0), b = gaussian_profile(g, 0.7, 1.3, 0.4);
  const double ov = std::norm(inner1(g, a, b));
  const MarginalDensity pa = product_projector(g, a, 1), pb = product_projector(g, b, 1);
  CHECK(trace_norm(pa.kernel - pb.kernel, pa.weight()) == doctest::Approx(2.0 * std::sqrt(1.0 - ov)).epsilon(1e-11));
}

TEST_CASE("weighted trace against the closed form") {
  Grid1D g(10.0, 64);
  const CVec f = gaussian_profile(g, 0.0, 1.0);
  CHECK(weighted_trace(product_projector(g, f, 1), WeightKind::S, 1.0) == doctest::Approx(1.5).epsilon(1e-11));
  CHECK(weighted_trace(product_projector(g, f, 2), WeightKind::L) == doctest::Approx(2.25).epsilon(1e-11));
}

TEST_CASE("mollifier defect of a Gaussian pair") {
  // |f|^2 is N(0, 1/2), so x - y is N(0, 1) and
  // Tr (rho_alpha - delta) gamma2 = (2 pi)^{-1/2} (1 - (1 + alpha^2)^{-1/2})
  Grid1D g(10.0, 512);
  const TensorState p2 = product_state(g, gaussian_profile(g, 0.0, 1.0), 2);
  const std::vector<double> alphas{0.5, 0.25};
  const auto r = mollifier_delta_test({{1.0, p2}}, Observable{}, gaussian_density, alphas, 0.5);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double exact = (1.0 - 1.0 / std::sqrt(1.0 + alphas[i] * alphas[i])) / std::sqrt(2.0 * std::numbers::pi);
    CHECK(r.values[i] == doctest::Approx(exact).epsilon(1e-6));
  }
  CHECK_THROWS_AS(mollifier_delta_test({{1.0, p2}}, Observable{}, gaussian_density, {0.01}, 0.5), ResolutionError);
}
