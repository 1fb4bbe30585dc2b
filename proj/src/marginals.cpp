#include "mfnls/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfnls/errors.hpp"
#include "mfnls/potentials.hpp"

namespace mfnls {

using RowCMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double MarginalDensity::weight() const { return std::pow(grid.spacing(), k); }

MarginalDensity partial_trace(const TensorState& psi, int k) {
  if (k < 1 || k > psi.N) throw DomainError("marginal order out of range");
  const std::size_t n = psi.grid.size();
  const std::size_t rows = ipow(n, k);
  const std::size_t rest = ipow(n, psi.N - k);
  Eigen::Map<const RowCMat> m(psi.amp.data(), Eigen::Index(rows), Eigen::Index(rest));
  MarginalDensity g{k, psi.grid, CMat(rows, rows)};
  g.kernel.noalias() = m * m.adjoint();
  g.kernel *= std::pow(psi.grid.spacing(), psi.N - k);
  return g;
}

MarginalDensity product_projector(const Grid1D& g, const CVec& phi, int k) {
  TensorState s = product_state(g, phi, k);
  CVecE v = Eigen::Map<const CVecE>(s.amp.data(), Eigen::Index(s.size()));
  return {k, g, v * v.adjoint()};
}

MarginalDensity trace_out_last(const MarginalDensity& g) {
  if (g.k < 2) throw DomainError("cannot trace out below one particle");
  const std::size_t n = g.grid.size();
  const std::size_t rows = ipow(n, g.k - 1);
  MarginalDensity out{g.k - 1, g.grid, CMat::Zero(rows, rows)};
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < rows; ++b) {
      cplx acc = 0.0;
      for (std::size_t z = 0; z < n; ++z) acc += g.kernel(a * n + z, b * n + z);
      out.kernel(a, b) = acc * g.grid.spacing();
    }
  return out;
}

double trace(const MarginalDensity& g) { return g.kernel.diagonal().sum().real() * g.weight(); }

double trace_norm(const CMat& kernel, double weight) {
  const CMat a = kernel * weight;
  const double scale = std::max(1e-300, a.cwiseAbs().maxCoeff());
  if (hermiticity_residual(a) <= 1e-12 * scale) {
    const CMat h = 0.5 * (a + a.adjoint());
    return hermitian_eigenvalues(h).cwiseAbs().sum();
  }
  double s = 0.0;
  for (double v : singular_values(a)) s += v;
  return s;
}

double trace_norm(const MarginalDensity& g) { return trace_norm(g.kernel, g.weight()); }

double chaos_distance(const TensorState& psi, int k, const CVec& phi) {
  if (k > psi.N) throw DomainError("marginal order exceeds particle count");
  if (std::abs(norm1(psi.grid, phi) - 1.0) > 1e-10) throw DomainError("reference one-particle state must be normalized");
  const MarginalDensity g = partial_trace(psi, k);
  const MarginalDensity p = product_projector(psi.grid, phi, k);
  return trace_norm(g.kernel - p.kernel, g.weight());
}

DensityDiagnostics diagnose(const MarginalDensity& g) {
  DensityDiagnostics d;
  const CMat a = g.op();
  d.hermiticity = hermiticity_residual(g.kernel);
  d.min_eigenvalue = hermitian_eigenvalues(0.5 * (a + a.adjoint()))(0);
  d.trace_defect = std::abs(trace(g) - 1.0);
  return d;
}

double weighted_trace(const MarginalDensity& g, WeightKind kind, double omega) {
  const CMat a = g.op();
  if (hermiticity_residual(a) > 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw NumericalAbort("weighted trace needs a Hermitian kernel");
  SobolevWeight w{kind, {}};
  for (int j = 0; j < g.k; ++j) w.axes.push_back(j);
  // sum_i lambda_i <v_i, W v_i> = Tr(W A): apply W column by column, no eigensolve
  TensorState s = zero_state(g.grid, g.k, omega);
  double acc = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (std::size_t r = 0; r < s.size(); ++r) s.amp[r] = a(Eigen::Index(r), c);
    acc += apply_weight_squared(s, w).amp[std::size_t(c)].real();
  }
  return acc;
}

std::vector<double> top_eigenvalues(const MarginalDensity& g, std::size_t count) {
  const CMat a = g.op();
  const RVecE v = hermitian_eigenvalues(0.5 * (a + a.adjoint()));
  std::vector<double> out;
  for (Eigen::Index i = v.size() - 1; i >= 0 && out.size() < count; --i) out.push_back(v(i));
  return out;
}

double gaussian_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

namespace {

// (J^† ⊗ 1) Psi on an n x n two-particle array (row index = particle 1).
CVec apply_observable_adjoint(const Observable& J, const TensorState& psi) {
  const std::size_t n = psi.grid.size();
  CVec out = psi.amp;
  if (J.dense) {
    Eigen::Map<const RowCMat> m(psi.amp.data(), Eigen::Index(n), Eigen::Index(n));
    Eigen::Map<RowCMat> o(out.data(), Eigen::Index(n), Eigen::Index(n));
    o.noalias() = J.dense->adjoint() * m;
  } else if (!J.multiplier.empty()) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) out[a * n + b] *= J.multiplier[a];
  }
  return out;
}

}  // namespace

MollifierReport mollifier_delta_test(const std::vector<std::pair<double, TensorState>>& gamma2, const Observable& J,
                                     const Density& rho, const std::vector<double>& alphas, double kappa) {
  if (gamma2.empty()) throw DomainError("empty two-particle ensemble");
  const Grid1D& g = gamma2.front().second.grid;
  const std::size_t n = g.size();
  const double h = g.spacing();
  for (double a : alphas)
    if (!(a >= h)) throw ResolutionError("mollifier width below grid resolution");
  for (const auto& [lam, psi] : gamma2)
    if (psi.N != 2 || !(psi.grid == g)) throw DomainError("ensemble members must be two-particle states on one grid");

  MollifierReport rep;
  rep.alphas = alphas;
  rep.kappa = kappa;
  std::vector<double> sep(n);
  for (std::size_t d = 0; d < n; ++d) sep[d] = pair_separation_index(g, d);
  for (double alpha : alphas) {
    std::vector<double> ra(n);
    for (std::size_t d = 0; d < n; ++d) ra[d] = rho(sep[d] / alpha) / alpha;
    cplx total = 0.0;
    for (const auto& [lam, psi] : gamma2) {
      const CVec a = apply_observable_adjoint(J, psi);
      cplx smooth = 0.0, diag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
          smooth += std::conj(a[i * n + j]) * ra[(i + n - j) % n] * psi.amp[i * n + j];
        diag += std::conj(a[i * n + i]) * psi.amp[i * n + i];
      }
      // delta pairs the diagonal with weight 1/h against the h^2 measure
      total += lam * (smooth * h * h - diag * h);
    }
    rep.values.push_back(std::abs(total));
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (rep.values[i] <= 0.0) continue;
    lx.push_back(std::log(alphas[i]));
    ly.push_back(std::log(rep.values[i]));
  }
  if (lx.size() >= 2) rep.slope = fit_line(lx, ly).slope;
  rep.pass = lx.size() >= 2 && rep.slope >= kappa - 0.1;
  return rep;
}

MollifierReport mollifier_delta_test(const MarginalDensity& gamma2, const Observable& J, const Density& rho,
                                     const std::vector<double>& alphas, double kappa) {
  if (gamma2.k != 2) throw DomainError("mollifier test needs a two-particle marginal");
  const CMat a = gamma2.op();
  const HermEig e = hermitian_eigensystem(0.5 * (a + a.adjoint()));
  std::vector<std::pair<double, TensorState>> ens;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (std::abs(e.values(i)) < 1e-14) continue;
    TensorState s = zero_state(gamma2.grid, 2);
    for (std::size_t r = 0; r < s.size(); ++r) s.amp[r] = e.vectors(Eigen::Index(r), i);
    normalize(s);
    ens.emplace_back(e.values(i), std::move(s));
  }
  return mollifier_delta_test(ens, J, rho, alphas, kappa);
}

}  // namespace mfnls
