#pragma once

#include "mfnls/linalg.hpp"
#include "mfnls/nbody.hpp"
#include "mfnls/potentials.hpp"

namespace mfnls {

struct OperatorCheck {
  double value = 0.0;  // min eigenvalue or largest singular value
  double bound = 0.0;  // threshold the value is compared with
  bool pass = false;
};

// One-particle S^2 = 1 - d^2/2 + omega^2 x^2/2 as a dense matrix.
RMat one_particle_weight_matrix(const Grid1D& g, double omega);

// lambda_min( H_{+12} - (S_1^2 + S_2^2)/2 ),
// H_{+12} = S_1^2 + S_2^2 + (1 - 1/N) V_N(x_1 - x_2) + 2 alpha.
// alpha_scale multiplies alpha (negative controls).
OperatorCheck check_pair_positivity(const PotentialSpec& spec, int N, double omega, const Grid1D& g,
                                    double tol = 1e-6, double alpha_scale = 1.0);

// lambda_min( -d^2/2 + (1 - 1/N) V_N + 2 alpha ); alpha may come from a
// different potential for the negative control.
OperatorCheck check_K_inequality(const PotentialSpec& spec, int N, const Grid1D& g, double tol = 1e-6,
                                 const PotentialSpec* alpha_from = nullptr);

// max |(N^-1 H_N + 1 + alpha) psi - (2N(N-1))^-1 sum_{i!=j} (H_ij + 2 alpha) psi|
double check_decomposition_identity(const NBodySystem& sys, const TensorState& psi);

struct EnergyEstimate {
  double lhs = 0.0;  // <psi, (H_N + N alpha + N)^k psi>
  double rhs = 0.0;  // 2^-k N^k ||S^(k) psi||^2
  double margin = 0.0;
};
EnergyEstimate check_energy_estimate(const NBodySystem& sys, const TensorState& psi, int k);

// || L_1^-1 L_2^-1 V_M(x_1 - x_2) L_1^-1 L_2^-1 ||_op against ||V||_{L^1},
// with V_M the N-scaled potential (N = 1 for V itself).
OperatorCheck check_sobolev_operator_bound(const PotentialSpec& spec, const Grid1D& g, int N = 1,
                                           double tol = 1e-4);
// the operator norm itself, through the total-wavenumber block decomposition
double sobolev_operator_norm(const PotentialSpec& spec, const Grid1D& g, int N = 1);
// same norm from the assembled n^2 x n^2 matrix (n^2 <= 4096)
double sobolev_operator_norm_dense(const PotentialSpec& spec, const Grid1D& g, int N = 1);

// min eig(A2 ⊗ B2 - A1 ⊗ B1) for A2 >= A1 >= 0, B2 >= B1 >= 0 (checked).
OperatorCheck check_commuting_product(const RMat& A1, const RMat& A2, const RMat& B1, const RMat& B2,
                                      double tol = 1e-10);

// ||f||_inf and ||f'||_{L^1} (spectral derivative) of a grid function.
std::pair<double, double> sup_and_derivative_l1(const Grid1D& g, const CVec& f);
// ||f||_inf / ||S f||
double sobolev_ratio(const Grid1D& g, const CVec& f, double omega);

}  // namespace mfnls
