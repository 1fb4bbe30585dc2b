#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "mfnls/grid.hpp"
#include "mfnls/linalg.hpp"
#include "mfnls/potentials.hpp"

namespace mfnls {

// H_N = sum_j (-1/2 d_j^2 + 1/2 omega^2 x_j^2) + (1/N) sum_{i<j} V_N(x_i - x_j)
// with V_N(x) = N^beta V(N^beta x) and minimum-image separations on the box.
struct NBodySystem {
  int N = 2;
  Grid1D grid{8.0, 32};
  PotentialSpec spec;
  double omega = 0.0;

  NBodySystem(int N, Grid1D grid, PotentialSpec spec, double omega, bool validate = true);

  // V_N at the separation of grid indices differing by d (mod n).
  std::vector<double> pair_table() const;
  // trap + (1/N) pair sum at every grid point of grid^N
  std::vector<double> diagonal_potential() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<TensorState> states;
  std::vector<double> energies;
  double max_step_norm_drift = 0.0;
};

struct EvolveOptions {
  std::size_t stride = 1;  // store every stride-th step
  double norm_tol = 1e-10;  // per step
  double energy_drift_bound = std::numeric_limits<double>::infinity();
  bool record_energy = true;
};

// Strang splitting for i d_t psi = H_N psi.
class Propagator {
 public:
  Propagator(const NBodySystem& sys, double dt);
  void step(TensorState& psi) const;
  double dt() const { return dt_; }

 private:
  int N_;
  std::size_t n_;
  double dt_;
  CVec half_phase_;
  CVec kinetic_phase_;
};

Trajectory evolve(const NBodySystem& sys, const TensorState& psi0, double dt, std::size_t steps,
                  const EvolveOptions& opt = {});

TensorState apply_hamiltonian(const NBodySystem& sys, const TensorState& psi);
double energy_expectation(const NBodySystem& sys, const TensorState& psi);

// Dense real-symmetric matrix of H_N on grid values (dimension n^N <= cap).
RMat dense_hamiltonian(const NBodySystem& sys, std::size_t cap = 4096);

// chi = 1 on [0,1], 0 on [2,inf), C-infinity monotone in between
double cutoff_chi(double s);

// Reusable eigendecomposition for chi(kappa H_N / N).
class SpectralCutoff {
 public:
  explicit SpectralCutoff(const NBodySystem& sys);
  TensorState apply(const TensorState& psi, double kappa) const;
  // <psi, H^k psi> via the spectral coefficients
  double moment(const TensorState& psi, int k) const;
  const RVecE& eigenvalues() const { return eig_.values; }

 private:
  int N_;
  SymEig eig_;
};

TensorState spectral_cutoff(const NBodySystem& sys, const TensorState& psi, double kappa);

// Max-abs residual of the BBGKY hierarchy at level k over interior stored
// times, using central differences. Stored times must be uniformly spaced.
double bbgky_residual(const NBodySystem& sys, const Trajectory& traj, int k);

}  // namespace mfnls
