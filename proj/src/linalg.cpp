#include "mfnls/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <numbers>

#include "mfnls/errors.hpp"

namespace mfnls {

namespace {

void check_square(const auto& a) {
  if (a.rows() != a.cols()) throw DomainError("matrix must be square");
}

}  // namespace

RVecE symmetric_eigenvalues(RMat a) {
  check_square(a);
  const lapack_int n = lapack_int(a.rows());
  RVecE w(n);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()) != 0)
    throw NumericalAbort("dsyevd failed");
  return w;
}

SymEig symmetric_eigensystem(RMat a) {
  check_square(a);
  const lapack_int n = lapack_int(a.rows());
  RVecE w(n);
  if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data()) != 0)
    throw NumericalAbort("dsyevd failed");
  return {w, std::move(a)};
}

RVecE symmetric_eigen_range(RMat a, int il, int iu) {
  check_square(a);
  const lapack_int n = lapack_int(a.rows());
  if (il < 1 || iu > n || il > iu) throw DomainError("eigenvalue index range invalid");
  lapack_int m = 0;
  RVecE w(n);
  std::vector<lapack_int> isuppz(2 * std::size_t(n));
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, a.data(), n, 0.0, 0.0, il, iu, 0.0,
                                         &m, w.data(), &dummy, 1, isuppz.data());
  if (info != 0) throw NumericalAbort("dsyevr failed");
  return w.head(m);
}

double symmetric_min_eigenvalue(RMat a) { return symmetric_eigen_range(std::move(a), 1, 1)(0); }

double symmetric_max_abs_eigenvalue(RMat a) {
  // one tridiagonalization serves both ends of the spectrum
  const RVecE w = symmetric_eigenvalues(std::move(a));
  return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

RVecE hermitian_eigenvalues(CMat a) {
  check_square(a);
  const lapack_int n = lapack_int(a.rows());
  RVecE w(n);
  auto* p = reinterpret_cast<lapack_complex_double*>(a.data());
  if (LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, p, n, w.data()) != 0) throw NumericalAbort("zheevd failed");
  return w;
}

HermEig hermitian_eigensystem(CMat a) {
  check_square(a);
  const lapack_int n = lapack_int(a.rows());
  RVecE w(n);
  auto* p = reinterpret_cast<lapack_complex_double*>(a.data());
  if (LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, p, n, w.data()) != 0) throw NumericalAbort("zheevd failed");
  return {w, std::move(a)};
}

std::vector<double> singular_values(const CMat& a) {
  Eigen::BDCSVD<CMat> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

RMat symbol_matrix(const Grid1D& g, const std::vector<double>& symbol) {
  const std::size_t n = g.size();
  // row j, column l depends on (j - l) mod n only
  std::vector<double> c(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m)
      acc += symbol[m] * std::cos(2.0 * std::numbers::pi * double(m) * double(d) / double(n));
    c[d] = acc / double(n);
  }
  RMat out(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) out(j, l) = c[(j + n - l) % n];
  return out;
}

void add_axis_operator(RMat& h, const RMat& m, int axis, int N, double scale) {
  const std::size_t n = std::size_t(m.rows());
  const std::size_t dim = ipow(n, N);
  if (std::size_t(h.rows()) != dim) throw DomainError("operator dimension mismatch");
  const std::size_t stride = ipow(n, N - 1 - axis);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t dr = (r / stride) % n;
    const std::size_t base = r - dr * stride;
    for (std::size_t l = 0; l < n; ++l) h(r, base + l * stride) += scale * m(dr, l);
  }
}

double hermiticity_residual(const CMat& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("line fit needs >= 2 paired samples");
  const double m = double(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace mfnls
