#include "mfnls/nls.hpp"

#include <algorithm>
#include <cmath>

#include "mfnls/errors.hpp"
#include "mfnls/linalg.hpp"
#include "mfnls/potentials.hpp"

namespace mfnls {

namespace {

const cplx I(0.0, 1.0);

// ∫_{a}^{b} g(tau) dtau for g = (1 + omega^2 tau^2)^(-1/2)
double damping_integral(double omega, double a, double b) {
  if (omega == 0.0) return b - a;
  return (std::asinh(omega * b) - std::asinh(omega * a)) / omega;
}

double max_density(const CVec& f) {
  double m = 0.0;
  for (const auto& v : f) m = std::max(m, std::norm(v));
  return m;
}

}  // namespace

CVec half_laplacian(const Grid1D& g, const CVec& phi) {
  std::vector<double> sym(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) sym[m] = 0.5 * g.k(m) * g.k(m);
  return apply_symbol(g, phi, sym);
}

double nls_energy(const Grid1D& g, const CVec& phi, double omega, double b0) {
  const CVec t = half_laplacian(g, phi);
  double e = inner1(g, phi, t).real();
  double pot = 0.0, quart = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = std::norm(phi[j]);
    pot += 0.5 * omega * omega * g.x(j) * g.x(j) * d;
    quart += d * d;
  }
  return e + g.spacing() * (pot - 0.5 * b0 * quart);
}

NLSTrajectory evolve_nls(const NLSProblem& p, double dt, std::size_t steps, std::size_t stride) {
  const Grid1D& g = p.grid;
  const std::size_t n = g.size();
  if (p.phi0.size() != n) throw DomainError("initial field does not match grid");
  if (std::abs(norm1(g, p.phi0) - 1.0) > 1e-12) throw DomainError("initial field must be normalized");
  if (!(dt > 0.0) || stride == 0) throw DomainError("time step and stride must be positive");

  CVec kin(n);
  for (std::size_t m = 0; m < n; ++m) kin[m] = std::exp(-I * dt * 0.5 * g.k(m) * g.k(m));
  std::vector<double> trap(n, 0.0);
  if (p.side == NLSSide::trapped)
    for (std::size_t j = 0; j < n; ++j) trap[j] = 0.5 * p.omega * p.omega * g.x(j) * g.x(j);

  // exact flow of the diagonal part over [t, t + dt/2]
  auto nonlinear = [&](CVec& f, double t) {
    const double w = p.side == NLSSide::lens ? damping_integral(p.omega, t, t + 0.5 * dt) : 0.5 * dt;
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = p.side == NLSSide::lens ? p.b0 * std::norm(f[j]) * w
                                                   : (p.b0 * std::norm(f[j]) - trap[j]) * w;
      f[j] *= std::exp(I * phase);
    }
  };

  NLSTrajectory tr;
  CVec f = p.phi0;
  auto store = [&](double t) {
    tr.times.push_back(t);
    tr.states.push_back(f);
    tr.mass.push_back(norm1(g, f));
    if (p.side == NLSSide::trapped) tr.energy.push_back(nls_energy(g, f, p.omega, p.b0));
  };
  store(p.t0);
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t = p.t0 + double(s - 1) * dt;
    nonlinear(f, t);
    dft_axis_inplace(f.data(), 1, n, 0, Direction::forward);
    for (std::size_t m = 0; m < n; ++m) f[m] *= kin[m];
    dft_axis_inplace(f.data(), 1, n, 0, Direction::inverse);
    nonlinear(f, t + 0.5 * dt);
    if (max_density(f) > p.ceiling) throw NumericalAbort("collapse threshold: max |phi|^2 exceeded the ceiling");
    if (s % stride == 0 || s == steps) store(p.t0 + double(s) * dt);
  }
  return tr;
}

namespace {

void check_samples(const NLSTrajectory& tr) {
  if (tr.states.size() < 3) throw DomainError("residual needs at least three stored times");
  const double d = tr.times[1] - tr.times[0];
  for (std::size_t i = 1; i + 1 < tr.times.size(); ++i)
    if (std::abs(tr.times[i + 1] - tr.times[i] - d) > 1e-12 * std::max(1.0, d))
      throw DomainError("residual needs uniformly spaced samples");
}

// coefficient of the cubic term at time t: the equation reads ... - c(t) |phi|^2 phi
double cubic_coefficient(const NLSProblem& eq, double t) {
  return eq.side == NLSSide::lens ? lens_damping(eq.omega, t) * eq.b0 : eq.b0;
}

}  // namespace

double nls_residual(const NLSProblem& eq, const NLSTrajectory& tr) {
  check_samples(tr);
  const Grid1D& g = eq.grid;
  const double d = tr.times[1] - tr.times[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < tr.states.size(); ++i) {
    const CVec& f = tr.states[i];
    const CVec lap = half_laplacian(g, f);
    const double c = cubic_coefficient(eq, tr.times[i]);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const cplx dtf = (tr.states[i + 1][j] - tr.states[i - 1][j]) / (2.0 * d);
      double trap = eq.side == NLSSide::trapped ? 0.5 * eq.omega * eq.omega * g.x(j) * g.x(j) : 0.0;
      const cplx rhs = lap[j] + trap * f[j] - c * std::norm(f[j]) * f[j];
      worst = std::max(worst, std::abs(I * dtf - rhs));
    }
  }
  return worst;
}

namespace {

// Kernel |phi><phi|^{⊗k} on grid^k x grid^k.
CMat tensor_projector(const CVec& f, int k) {
  const std::size_t n = f.size();
  const std::size_t rows = ipow(n, k);
  CVecE v(rows);
  for (std::size_t a = 0; a < rows; ++a) {
    cplx p = 1.0;
    for (int j = 0; j < k; ++j) p *= f[(a / ipow(n, k - 1 - j)) % n];
    v(Eigen::Index(a)) = p;
  }
  return v * v.adjoint();
}

// sum_j [-1/2 d_j^2, K] on a k-particle kernel
CMat kinetic_commutator(const CMat& K, const Grid1D& g, int k) {
  const std::size_t n = g.size();
  std::vector<double> sym(n);
  for (std::size_t m = 0; m < n; ++m) sym[m] = 0.5 * g.k(m) * g.k(m);
  auto left = [&](CMat A) {
    CMat out = CMat::Zero(A.rows(), A.cols());
    for (int j = 0; j < k; ++j) {
      CMat t = A;
      for (Eigen::Index c = 0; c < t.cols(); ++c) apply_symbol_axis(t.data() + c * t.rows(), k, n, j, sym);
      out += t;
    }
    return out;
  };
  return left(K) - left(K.adjoint()).adjoint();
}

}  // namespace

double gp_tensor_check(const NLSProblem& eq, const NLSTrajectory& tr, int k) {
  if (k != 1 && k != 2) throw DomainError("GP tensor check supports k in {1, 2}");
  check_samples(tr);
  const Grid1D& g = eq.grid;
  const std::size_t n = g.size();
  const double d = tr.times[1] - tr.times[0];
  const std::size_t rows = ipow(n, k);
  auto digit = [&](std::size_t idx, int j) { return (idx / ipow(n, k - 1 - j)) % n; };

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < tr.states.size(); ++i) {
    const CVec& f = tr.states[i];
    const CMat du = (tensor_projector(tr.states[i + 1], k) - tensor_projector(tr.states[i - 1], k)) / (2.0 * d);
    const CMat u = tensor_projector(f, k);
    CMat rhs = kinetic_commutator(u, g, k);
    // B_{j,k+1} u^(k+1): contract z against the discrete delta (1/h on the
    // diagonal) with the quadrature weight h; u^(k+1)(x,z; x',z) = u(x;x') |phi(z)|^2
    const double c = cubic_coefficient(eq, tr.times[i]);
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < rows; ++b) {
        // only z = x_j and z = x'_j survive the delta, and h * (1/h) = 1
        double acc = 0.0;
        for (int j = 0; j < k; ++j) acc += std::norm(f[digit(a, j)]) - std::norm(f[digit(b, j)]);
        rhs(Eigen::Index(a), Eigen::Index(b)) -= c * acc * u(Eigen::Index(a), Eigen::Index(b));
      }
    const CMat res = I * du - rhs;
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

CVec soliton(const Grid1D& g, double b0, double t, double center) {
  CVec f(g.size());
  const double amp = 0.5 * std::sqrt(b0);
  for (std::size_t j = 0; j < g.size(); ++j)
    f[j] = amp / std::cosh(0.5 * b0 * (g.x(j) - center)) * std::exp(I * (b0 * b0 * t / 8.0));
  return f;
}

}  // namespace mfnls
