#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mfnls/grid.hpp"

namespace mfnls {

using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using RVecE = Eigen::VectorXd;
using CVecE = Eigen::VectorXcd;

struct SymEig {
  RVecE values;  // ascending
  RMat vectors;  // columns
};

struct HermEig {
  RVecE values;  // ascending
  CMat vectors;
};

// Dense eigenproblems go through LAPACK (dsyevd / dsyevr / zheevd).
RVecE symmetric_eigenvalues(RMat a);
SymEig symmetric_eigensystem(RMat a);
// Eigenvalues with 1-based indices il..iu in ascending order.
RVecE symmetric_eigen_range(RMat a, int il, int iu);
double symmetric_min_eigenvalue(RMat a);
double symmetric_max_abs_eigenvalue(RMat a);

RVecE hermitian_eigenvalues(CMat a);
HermEig hermitian_eigensystem(CMat a);

std::vector<double> singular_values(const CMat& a);

// Real symmetric n x n matrix of F^-1 diag(symbol) F for an even symbol.
RMat symbol_matrix(const Grid1D& g, const std::vector<double>& symbol);

// H += scale * (I ⊗ .. ⊗ M ⊗ .. ⊗ I) with M on the given axis of an N-fold grid.
void add_axis_operator(RMat& h, const RMat& m, int axis, int N, double scale = 1.0);

double hermiticity_residual(const CMat& a);

// Least-squares line y = slope x + intercept with coefficient of determination.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mfnls
