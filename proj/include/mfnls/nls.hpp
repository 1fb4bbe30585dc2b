#pragma once

#include <vector>

#include "mfnls/grid.hpp"

namespace mfnls {

enum class NLSSide { trapped, lens };

// trapped: i d_t phi   = (-1/2 d^2 + 1/2 omega^2 x^2) phi - b0 |phi|^2 phi
// lens:    i d_tau phi = -1/2 d^2 phi - g(tau) b0 |phi|^2 phi,  g = (1 + omega^2 tau^2)^(-1/2)
struct NLSProblem {
  double omega = 0.0;
  double b0 = 0.0;
  NLSSide side = NLSSide::trapped;
  Grid1D grid{8.0, 64};
  CVec phi0;
  double t0 = 0.0;          // initial time (tau on the lens side)
  double ceiling = 1e3;     // abort when max |phi|^2 exceeds this
};

struct NLSTrajectory {
  std::vector<double> times;
  std::vector<CVec> states;
  std::vector<double> mass;
  std::vector<double> energy;  // trapped side only
};

NLSTrajectory evolve_nls(const NLSProblem& p, double dt, std::size_t steps, std::size_t stride = 1);

// E = ∫ 1/2 |d phi|^2 + 1/2 omega^2 x^2 |phi|^2 - b0/2 |phi|^4
double nls_energy(const Grid1D& g, const CVec& phi, double omega, double b0);

// Max-abs residual of the equation described by eq over interior samples.
double nls_residual(const NLSProblem& eq, const NLSTrajectory& tr);

// Defect of the lens-side GP hierarchy for u^(k) = |phi><phi|^{⊗k}, k in {1, 2}.
double gp_tensor_check(const NLSProblem& eq, const NLSTrajectory& tr, int k);

// -1/2 phi'' spectrally
CVec half_laplacian(const Grid1D& g, const CVec& phi);

// Normalized soliton of i d_t phi = -1/2 phi'' - b0 |phi|^2 phi centered at c:
// sqrt(b0)/2 sech(b0 (x - c)/2) exp(i b0^2 t / 8).
CVec soliton(const Grid1D& g, double b0, double t, double center = 0.0);

}  // namespace mfnls
