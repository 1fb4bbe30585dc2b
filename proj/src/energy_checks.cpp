#include "mfnls/energy_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mfnls/errors.hpp"

namespace mfnls {

RMat one_particle_weight_matrix(const Grid1D& g, double omega) {
  RMat s = symbol_matrix(g, weight_symbol(g, WeightKind::S));
  for (std::size_t j = 0; j < g.size(); ++j) s(Eigen::Index(j), Eigen::Index(j)) += 0.5 * omega * omega * g.x(j) * g.x(j);
  return s;
}

OperatorCheck check_pair_positivity(const PotentialSpec& spec, int N, double omega, const Grid1D& g, double tol,
                                    double alpha_scale) {
  if (N < 2) throw DomainError("pair positivity needs N >= 2");
  const std::size_t n = g.size();
  const std::size_t dim = n * n;
  if (dim > 4096) throw DomainError("two-particle dense form exceeds cap");
  const double alpha = constants(spec).alpha * alpha_scale;
  const RMat s2 = one_particle_weight_matrix(g, omega);
  RMat h = RMat::Zero(Eigen::Index(dim), Eigen::Index(dim));
  // H_{+12} - (S_1^2 + S_2^2)/2 = (S_1^2 + S_2^2)/2 + (1 - 1/N) V_N + 2 alpha
  add_axis_operator(h, s2, 0, 2, 0.5);
  add_axis_operator(h, s2, 1, 2, 0.5);
  const double c = 1.0 - 1.0 / double(N);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(Eigen::Index(i * n + j), Eigen::Index(i * n + j)) +=
          c * scaled_potential(spec, N, pair_separation(g, i, j)) + 2.0 * alpha;
  OperatorCheck r;
  r.value = symmetric_min_eigenvalue(std::move(h));
  r.bound = -tol;
  r.pass = r.value >= -tol;
  return r;
}

OperatorCheck check_K_inequality(const PotentialSpec& spec, int N, const Grid1D& g, double tol,
                                 const PotentialSpec* alpha_from) {
  const std::size_t n = g.size();
  std::vector<double> sym(n);
  for (std::size_t m = 0; m < n; ++m) sym[m] = 0.5 * g.k(m) * g.k(m);
  RMat k = symbol_matrix(g, sym);
  const double alpha = constants(alpha_from ? *alpha_from : spec).alpha;
  const double c = 1.0 - 1.0 / double(N);
  for (std::size_t j = 0; j < n; ++j)
    k(Eigen::Index(j), Eigen::Index(j)) += c * scaled_potential(spec, N, g.x(j)) + 2.0 * alpha;
  OperatorCheck r;
  r.value = symmetric_min_eigenvalue(std::move(k));
  r.bound = -tol;
  r.pass = r.value >= -tol;
  return r;
}

double check_decomposition_identity(const NBodySystem& sys, const TensorState& psi) {
  const int N = sys.N;
  if (N < 2) throw DomainError("decomposition identity needs N >= 2");
  const double alpha = constants(sys.spec).alpha;
  const std::size_t n = sys.grid.size();

  TensorState lhs = apply_hamiltonian(sys, psi);
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs.amp[i] = lhs.amp[i] / double(N) + (1.0 + alpha) * psi.amp[i];

  // S_j^2 psi for every axis, reused across pairs
  TensorState p = psi;
  p.omega = sys.omega;
  std::vector<TensorState> s2;
  for (int j = 0; j < N; ++j) s2.push_back(apply_weight_squared(p, {WeightKind::S, {j}}));
  const auto pt = sys.pair_table();
  const double c = double(N - 1) / double(N);

  TensorState rhs = zero_state(sys.grid, N, sys.omega);
  std::vector<std::size_t> d(N, 0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const std::size_t si = ipow(n, N - 1 - i), sj = ipow(n, N - 1 - j);
      for (std::size_t idx = 0; idx < psi.size(); ++idx) {
        const std::size_t di = (idx / si) % n, dj = (idx / sj) % n;
        const double v = c * pt[(di + n - dj) % n];
        rhs.amp[idx] += s2[i].amp[idx] + s2[j].amp[idx] + (v + 2.0 * alpha) * psi.amp[idx];
      }
    }
  const double norm_c = 1.0 / (2.0 * N * (N - 1));
  for (auto& v : rhs.amp) v *= norm_c;
  return max_abs_diff(lhs, rhs);
}

EnergyEstimate check_energy_estimate(const NBodySystem& sys, const TensorState& psi, int k) {
  if (k != 1 && k != 2) throw DomainError("energy estimate implemented for k in {1, 2}");
  if (k > sys.N) throw DomainError("k exceeds particle count");
  const double alpha = constants(sys.spec).alpha;
  const double N = double(sys.N);
  auto shifted = [&](const TensorState& s) {
    TensorState out = apply_hamiltonian(sys, s);
    for (std::size_t i = 0; i < out.size(); ++i) out.amp[i] += (N * alpha + N) * s.amp[i];
    return out;
  };
  TensorState p = psi;
  p.omega = sys.omega;
  EnergyEstimate e;
  const TensorState a = shifted(p);
  if (k == 1) {
    e.lhs = inner(p, a).real();
    e.rhs = 0.5 * N * weighted_norm_squared(p, {WeightKind::S, {0}});
  } else {
    e.lhs = inner(a, a).real();
    e.rhs = 0.25 * N * N * weighted_norm_squared(p, {WeightKind::S, {0, 1}});
  }
  e.margin = e.lhs - e.rhs;
  return e;
}

double sobolev_operator_norm_dense(const PotentialSpec& spec, const Grid1D& g, int N) {
  const std::size_t n = g.size();
  const std::size_t dim = n * n;
  if (dim > 4096) throw DomainError("two-particle dense form exceeds cap");
  std::vector<double> sym(n);
  for (std::size_t m = 0; m < n; ++m) sym[m] = 1.0 / std::sqrt(1.0 + g.k(m) * g.k(m));
  const RMat linv = symbol_matrix(g, sym);
  // X = D (Linv ⊗ Linv), then A = (Linv ⊗ Linv) X column by column
  RMat a{Eigen::Index(dim), Eigen::Index(dim)};
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = scaled_potential(spec, N, pair_separation(g, i, j));
  using RowR = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowR y(n, n), t(n, n);
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t c1 = col / n, c2 = col % n;
    // column col of (Linv ⊗ Linv) is linv(:,c1) ⊗ linv(:,c2); scale by D
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y(i, j) = v[i * n + j] * linv(i, c1) * linv(j, c2);
    t.noalias() = linv * y * linv.transpose();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(Eigen::Index(i * n + j), Eigen::Index(col)) = t(i, j);
  }
  return symmetric_max_abs_eigenvalue(0.5 * (a + a.transpose()));
}

double sobolev_operator_norm(const PotentialSpec& spec, const Grid1D& g, int N) {
  // V_N(x_1 - x_2) depends on the index offset only, so in Fourier variables the
  // operator preserves the total wavenumber: one n x n block per total K,
  // B_K(a, b) = l(a) l(K - a) v(a - b) l(b) l(K - b), v the DFT of the offset table / n.
  const std::size_t n = g.size();
  std::vector<double> l(n), vt(n, 0.0), vd(n);
  for (std::size_t m = 0; m < n; ++m) l[m] = 1.0 / std::sqrt(1.0 + g.k(m) * g.k(m));
  for (std::size_t d = 0; d < n; ++d) vd[d] = scaled_potential(spec, N, pair_separation_index(g, d));
  for (std::size_t m = 0; m < n; ++m) {
    double acc = 0.0;
    for (std::size_t d = 0; d < n; ++d) acc += vd[d] * std::cos(2.0 * std::numbers::pi * double((m * d) % n) / double(n));
    vt[m] = acc / double(n);
  }
  double best = 0.0;
  RMat b{Eigen::Index(n), Eigen::Index(n)};
  for (std::size_t K = 0; K < n; ++K) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        b(Eigen::Index(i), Eigen::Index(j)) =
            l[i] * l[(K + n - i) % n] * vt[(i + n - j) % n] * l[j] * l[(K + n - j) % n];
    best = std::max(best, symmetric_max_abs_eigenvalue(b));
  }
  return best;
}

OperatorCheck check_sobolev_operator_bound(const PotentialSpec& spec, const Grid1D& g, int N, double tol) {
  OperatorCheck r;
  r.value = sobolev_operator_norm(spec, g, N);
  r.bound = constants(spec).l1 + tol;
  r.pass = r.value <= r.bound;
  return r;
}

namespace {

RMat kron(const RMat& a, const RMat& b) {
  RMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void require_psd(const RMat& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError(std::string(what) + " is not symmetric");
  if (symmetric_min_eigenvalue(m) < -1e-12 * scale) throw DomainError(std::string(what) + " is not positive semidefinite");
}

}  // namespace

OperatorCheck check_commuting_product(const RMat& A1, const RMat& A2, const RMat& B1, const RMat& B2, double tol) {
  require_psd(A1, "A1");
  require_psd(A2 - A1, "A2 - A1");
  require_psd(B1, "B1");
  require_psd(B2 - B1, "B2 - B1");
  OperatorCheck r;
  r.value = symmetric_min_eigenvalue(kron(A2, B2) - kron(A1, B1));
  r.bound = -tol;
  r.pass = r.value >= -tol;
  return r;
}

std::pair<double, double> sup_and_derivative_l1(const Grid1D& g, const CVec& f) {
  std::vector<double> sym(g.size());
  CVec df = f;
  dft_axis_inplace(df.data(), 1, g.size(), 0, Direction::forward);
  for (std::size_t m = 0; m < g.size(); ++m) {
    // the unpaired Nyquist mode has no odd partner; drop it for the derivative
    const bool nyq = m == g.size() / 2;
    df[m] *= nyq ? cplx(0.0) : cplx(0.0, g.k(m));
  }
  dft_axis_inplace(df.data(), 1, g.size(), 0, Direction::inverse);
  double sup = 0.0, l1 = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    sup = std::max(sup, std::abs(f[j]));
    l1 += std::abs(df[j]) * g.spacing();
  }
  return {sup, l1};
}

double sobolev_ratio(const Grid1D& g, const CVec& f, double omega) {
  TensorState s{1, g, f, omega};
  double sup = 0.0;
  for (const auto& v : f) sup = std::max(sup, std::abs(v));
  return sup / std::sqrt(weighted_norm_squared(s, {WeightKind::S, {0}}));
}

}  // namespace mfnls
