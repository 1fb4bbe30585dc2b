#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mfnls/grid.hpp"
#include "mfnls/linalg.hpp"

namespace mfnls {

// gamma^(k)(x; x') sampled on grid^k x grid^k. The operator acting on grid
// values is kernel * h^k, so Tr gamma = h^k * sum_a kernel(a, a).
struct MarginalDensity {
  int k = 1;
  Grid1D grid{8.0, 64};
  CMat kernel;

  double weight() const;
  CMat op() const { return kernel * weight(); }
};

MarginalDensity partial_trace(const TensorState& psi, int k);
// |phi><phi|^{⊗k}
MarginalDensity product_projector(const Grid1D& g, const CVec& phi, int k);
MarginalDensity trace_out_last(const MarginalDensity& g);

double trace(const MarginalDensity& g);
double trace_norm(const CMat& kernel, double weight);
double trace_norm(const MarginalDensity& g);
double chaos_distance(const TensorState& psi, int k, const CVec& phi);

struct DensityDiagnostics {
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double trace_defect = 0.0;
};
DensityDiagnostics diagnose(const MarginalDensity& g);

// sum_i lambda_i ||W^(k) v_i||^2 over the spectral decomposition
double weighted_trace(const MarginalDensity& g, WeightKind kind, double omega = 0.0);

// Leading eigenvalues (descending) of the operator kernel * h^k.
std::vector<double> top_eigenvalues(const MarginalDensity& g, std::size_t count);

// Bounded one-particle observable: either a dense matrix on grid values or a
// multiplication operator (empty multiplier means identity).
struct Observable {
  std::optional<CMat> dense;
  std::vector<double> multiplier;
};

struct MollifierReport {
  std::vector<double> alphas;
  std::vector<double> values;  // Tr J (rho_alpha - delta) gamma2
  double slope = 0.0;          // log|value| vs log alpha
  double kappa = 0.0;
  bool pass = false;           // slope >= kappa - 0.1
};

// Probability density rho on the line; rho_alpha(x) = rho(x/alpha)/alpha.
using Density = std::function<double(double)>;
double gaussian_density(double x);

// gamma2 = sum_i lambda_i |Psi_i><Psi_i| with normalized two-particle states.
MollifierReport mollifier_delta_test(const std::vector<std::pair<double, TensorState>>& gamma2,
                                     const Observable& J, const Density& rho,
                                     const std::vector<double>& alphas, double kappa);
MollifierReport mollifier_delta_test(const MarginalDensity& gamma2, const Observable& J, const Density& rho,
                                     const std::vector<double>& alphas, double kappa);

}  // namespace mfnls
