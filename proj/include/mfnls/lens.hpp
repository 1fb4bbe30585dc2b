#pragma once

#include <utility>

#include "mfnls/grid.hpp"
#include "mfnls/marginals.hpp"

namespace mfnls {

// tau = tan(omega t)/omega, y = x / cos(omega t); omega = 0 is the identity.
struct LensMap {
  double omega = 1.0;
  double min_cos = 0.2;  // window guard |cos omega t| >= min_cos

  double tau_of(double t) const;
  double time_of(double tau) const;
  double cos_of(double t) const;
  void check_window(double t) const;
};

struct LensedState {
  TensorState state;
  double time = 0.0;  // t for the forward map, tau for the inverse
};

// (M u)(t, x) = exp(-i omega tan(omega t) |x|^2 / 2) cos(omega t)^(-N/2) u(tau, x / cos(omega t))
LensedState lens_function(const LensMap& map, const TensorState& u, double tau);
LensedState inverse_lens_function(const LensMap& map, const TensorState& psi, double t);

struct LensedKernel {
  MarginalDensity kernel;
  double time = 0.0;
};

// two-sided phase, factor cos(omega t)^(-k)
LensedKernel lens_kernel(const LensMap& map, const MarginalDensity& K, double tau);
LensedKernel inverse_lens_kernel(const LensMap& map, const MarginalDensity& K, double t);

// Band-limited (trigonometric) interpolation of grid samples at the points
// x_i * scale; points leaving the box evaluate to zero.
RMat interpolation_matrix(const Grid1D& g, double scale);

enum class KineticConvention { half, full };  // -1/2 d^2 or -d^2 on the free side

// exp(-i tau c k^2) exactly in Fourier space, c = 1/2 or 1
CVec free_flow(const Grid1D& g, const CVec& f, double tau, KineticConvention conv);

// || M_1 u(tau) - psi(T_run) || with psi from the linear trapped split-step
// solver and u from the exact free flow.
double intertwine_linear_check(const LensMap& map, const Grid1D& g, const CVec& phi0, double T_run,
                               KineticConvention conv = KineticConvention::half, double dt = 2e-4);

struct EnergyComparison {
  double lhs = 0.0;  // <u, prod (1 - d^2) u>
  double rhs = 0.0;  // <psi, prod (1 - d^2/2 + omega^2 x^2/2) psi>
  double ratio = 0.0;
};
EnergyComparison intertwine_energy_check(const LensMap& map, const TensorState& u, double tau, int k);

}  // namespace mfnls
