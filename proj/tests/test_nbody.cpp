#include <cmath>
#include <random>

#include "doctest.h"
#include "mfnls/errors.hpp"
#include "mfnls/nbody.hpp"

using namespace mfnls;

TEST_CASE("harmonic ground state is stationary") {
  // no interaction: H = sum of oscillators, e^{-x^2/2} has energy omega/2 per particle
  Grid1D g(8.0, 64);
  NBodySystem sys(2, g, PotentialSpec::none(0.5), 1.0);
  const TensorState psi = product_state(g, gaussian_profile(g, 0.0, 1.0), 2, 1.0);
  const TensorState hpsi = apply_hamiltonian(sys, psi);
  for (std::size_t i = 0; i < psi.size(); ++i) CHECK(std::abs(hpsi.amp[i] - 1.0 * psi.amp[i]) < 1e-12);
  CHECK(energy_expectation(sys, psi) == doctest::Approx(1.0).epsilon(1e-12));

  EvolveOptions o;
  o.stride = 500;
  const auto tr = evolve(sys, psi, 1e-3, 500, o);
  const cplx phase = std::exp(cplx(0.0, -0.5));
  double err = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) err = std::max(err, std::abs(tr.states.back().amp[i] - phase * psi.amp[i]));
  CHECK(err < 1e-6);
}

TEST_CASE("dense and matrix-free Hamiltonians agree") {
  Grid1D g(8.0, 16);
  NBodySystem sys(2, g, PotentialSpec::mixed_sign(1.0, 1.0, 0.25, 0.5), 0.7);
  std::mt19937_64 rng(2);
  const TensorState psi = random_symmetric_state(g, 2, 0.7, rng);
  const RMat h = dense_hamiltonian(sys);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  const TensorState a = apply_hamiltonian(sys, psi);
  const Eigen::Map<const CVecE> v(psi.amp.data(), Eigen::Index(psi.size()));
  const CVecE b = h.cast<cplx>() * v;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.amp[i] - b(Eigen::Index(i))) < 1e-11);
  CHECK_THROWS_AS(dense_hamiltonian(NBodySystem(3, g, sys.spec, 0.7), 1024), DomainError);
}

TEST_CASE("unitary symmetric evolution with interaction") {
  Grid1D g(8.0, 16);
  NBodySystem sys(3, g, PotentialSpec::gaussian_well(1.0, 1.0, 0.5), 1.0);
  std::mt19937_64 rng(9);
  const TensorState psi = random_symmetric_state(g, 3, 1.0, rng);
  EvolveOptions o;
  o.stride = 50;
  const auto tr = evolve(sys, psi, 1e-3, 200, o);
  CHECK(tr.max_step_norm_drift < 1e-12);
  CHECK(symmetry_residual(tr.states.back()) < 1e-12);
  double de = 0.0;
  for (double e : tr.energies) de = std::max(de, std::abs(e - tr.energies.front()));
  CHECK(de < 1e-6);
  CHECK(tr.times.size() == 5);
}

TEST_CASE("smooth cutoff profile") {
  CHECK(cutoff_chi(0.3) == 1.0);
  CHECK(cutoff_chi(1.0) == 1.0);
  CHECK(cutoff_chi(1.5) == doctest::Approx(0.5));
  CHECK(cutoff_chi(2.0) == 0.0);
  double prev = 1.0;
  for (double s = 1.0; s <= 2.0; s += 0.01) {
    CHECK(cutoff_chi(s) <= prev);
    prev = cutoff_chi(s);
  }
}

TEST_CASE("spectral cutoff keeps low energies") {
  Grid1D g(2.0, 16);
  NBodySystem sys(2, g, PotentialSpec::gaussian_well(1.0, 0.25, 0.5), 1.0);
  SpectralCutoff sc(sys);
  std::mt19937_64 rng(4);
  const TensorState psi = random_symmetric_state(g, 2, 1.0, rng, {6.0, 1.0});
  for (double kappa : {0.4, 0.1}) {
    const TensorState pk = sc.apply(psi, kappa);
    CHECK(sc.moment(pk, 1) <= 4.0 / kappa);
    CHECK(sc.moment(pk, 2) <= 16.0 / (kappa * kappa));
    CHECK(symmetry_residual(pk) < 1e-10);
  }
  CHECK_THROWS_AS(sc.apply(psi, -1.0), DomainError);
}
