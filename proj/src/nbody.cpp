#include "mfnls/nbody.hpp"

#include <algorithm>
#include <cmath>

#include "mfnls/errors.hpp"
#include "mfnls/marginals.hpp"

namespace mfnls {

NBodySystem::NBodySystem(int N_, Grid1D grid_, PotentialSpec spec_, double omega_, bool validate)
    : N(N_), grid(std::move(grid_)), spec(spec_), omega(omega_) {
  if (N < 1) throw DomainError("particle count must be >= 1");
  if (omega < 0.0) throw DomainError("trap frequency must be >= 0");
  if (validate) validate_on_grid(spec, N, grid);
}

std::vector<double> NBodySystem::pair_table() const {
  std::vector<double> t(grid.size());
  for (std::size_t d = 0; d < grid.size(); ++d) t[d] = scaled_potential(spec, N, pair_separation_index(grid, d));
  return t;
}

std::vector<double> NBodySystem::diagonal_potential() const {
  const std::size_t n = grid.size();
  const std::size_t dim = ipow(n, N);
  const auto pt = pair_table();
  std::vector<double> trap(n);
  for (std::size_t j = 0; j < n; ++j) trap[j] = 0.5 * omega * omega * grid.x(j) * grid.x(j);
  std::vector<double> out(dim);
  std::vector<std::size_t> d(N, 0);
  const double inv_n = 1.0 / double(N);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double v = 0.0;
    for (int a = 0; a < N; ++a) {
      v += trap[d[a]];
      for (int b = a + 1; b < N; ++b) v += inv_n * pt[(d[a] + n - d[b]) % n];
    }
    out[idx] = v;
    for (int a = N - 1; a >= 0; --a) {
      if (++d[a] < n) break;
      d[a] = 0;
    }
  }
  return out;
}

namespace {

// sum_j k_j^2 / 2 in the layout of an N-dimensional FFT
std::vector<double> kinetic_symbol(const Grid1D& g, int N) {
  const std::size_t n = g.size();
  const std::size_t dim = ipow(n, N);
  std::vector<double> out(dim);
  std::vector<std::size_t> d(N, 0);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double s = 0.0;
    for (int a = 0; a < N; ++a) s += 0.5 * g.k(d[a]) * g.k(d[a]);
    out[idx] = s;
    for (int a = N - 1; a >= 0; --a) {
      if (++d[a] < n) break;
      d[a] = 0;
    }
  }
  return out;
}

}  // namespace

Propagator::Propagator(const NBodySystem& sys, double dt) : N_(sys.N), n_(sys.grid.size()), dt_(dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const auto v = sys.diagonal_potential();
  const auto t = kinetic_symbol(sys.grid, sys.N);
  half_phase_.resize(v.size());
  kinetic_phase_.resize(t.size());
  for (std::size_t i = 0; i < v.size(); ++i) half_phase_[i] = std::exp(cplx(0.0, -0.5 * dt * v[i]));
  for (std::size_t i = 0; i < t.size(); ++i) kinetic_phase_[i] = std::exp(cplx(0.0, -dt * t[i]));
}

void Propagator::step(TensorState& psi) const {
  auto& a = psi.amp;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= half_phase_[i];
  dft_all_inplace(a.data(), N_, n_, Direction::forward);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= kinetic_phase_[i];
  dft_all_inplace(a.data(), N_, n_, Direction::inverse);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= half_phase_[i];
}

Trajectory evolve(const NBodySystem& sys, const TensorState& psi0, double dt, std::size_t steps,
                  const EvolveOptions& opt) {
  if (psi0.N != sys.N || !(psi0.grid == sys.grid)) throw DomainError("initial state does not match the system");
  if (std::abs(norm(psi0) - 1.0) > 1e-9) throw DomainError("initial state must be normalized");
  if (opt.stride == 0) throw DomainError("stride must be >= 1");
  const Propagator prop(sys, dt);
  Trajectory tr;
  TensorState psi = psi0;
  psi.omega = sys.omega;
  auto store = [&](std::size_t s) {
    tr.times.push_back(double(s) * dt);
    tr.states.push_back(psi);
    if (opt.record_energy) tr.energies.push_back(energy_expectation(sys, psi));
  };
  store(0);
  double prev = norm(psi);
  for (std::size_t s = 1; s <= steps; ++s) {
    prop.step(psi);
    const double nr = norm(psi);
    const double drift = std::abs(nr - prev);
    tr.max_step_norm_drift = std::max(tr.max_step_norm_drift, drift);
    if (!(drift <= opt.norm_tol)) throw NumericalAbort("norm drift per step exceeded tolerance");
    prev = nr;
    if (s % opt.stride == 0 || s == steps) {
      store(s);
      if (opt.record_energy) {
        const double e0 = tr.energies.front();
        const double rel = std::abs(tr.energies.back() - e0) / std::max(std::abs(e0), 1e-300);
        if (rel > opt.energy_drift_bound) throw NumericalAbort("energy drift exceeded configured bound");
      }
    }
  }
  return tr;
}

TensorState apply_hamiltonian(const NBodySystem& sys, const TensorState& psi) {
  TensorState out = psi;
  const auto t = kinetic_symbol(sys.grid, sys.N);
  dft_all_inplace(out.amp.data(), sys.N, sys.grid.size(), Direction::forward);
  for (std::size_t i = 0; i < out.size(); ++i) out.amp[i] *= t[i];
  dft_all_inplace(out.amp.data(), sys.N, sys.grid.size(), Direction::inverse);
  const auto v = sys.diagonal_potential();
  for (std::size_t i = 0; i < out.size(); ++i) out.amp[i] += v[i] * psi.amp[i];
  return out;
}

double energy_expectation(const NBodySystem& sys, const TensorState& psi) {
  return inner(psi, apply_hamiltonian(sys, psi)).real();
}

RMat dense_hamiltonian(const NBodySystem& sys, std::size_t cap) {
  const std::size_t n = sys.grid.size();
  const std::size_t dim = ipow(n, sys.N);
  if (dim > cap) throw DomainError("dense Hamiltonian dimension exceeds cap");
  std::vector<double> sym(n);
  for (std::size_t m = 0; m < n; ++m) sym[m] = 0.5 * sys.grid.k(m) * sys.grid.k(m);
  const RMat kin = symbol_matrix(sys.grid, sym);
  RMat h = RMat::Zero(Eigen::Index(dim), Eigen::Index(dim));
  for (int a = 0; a < sys.N; ++a) add_axis_operator(h, kin, a, sys.N);
  const auto v = sys.diagonal_potential();
  for (std::size_t i = 0; i < dim; ++i) h(Eigen::Index(i), Eigen::Index(i)) += v[i];
  return h;
}

double cutoff_chi(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = f(2.0 - s), b = f(s - 1.0);
  return a / (a + b);
}

SpectralCutoff::SpectralCutoff(const NBodySystem& sys) : N_(sys.N), eig_(symmetric_eigensystem(dense_hamiltonian(sys))) {}

TensorState SpectralCutoff::apply(const TensorState& psi, double kappa) const {
  if (!(kappa > 0.0)) throw DomainError("cutoff parameter must be positive");
  const Eigen::Map<const CVecE> v(psi.amp.data(), Eigen::Index(psi.size()));
  CVecE c = eig_.vectors.transpose().cast<cplx>() * v;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= cutoff_chi(kappa * eig_.values(i) / double(N_));
  if (c.norm() <= 1e-14 * v.norm()) throw DegenerateInput("spectral cutoff annihilates the state");
  TensorState out = psi;
  const CVecE back = eig_.vectors.cast<cplx>() * c;
  for (Eigen::Index i = 0; i < back.size(); ++i) out.amp[std::size_t(i)] = back(i);
  normalize(out);
  return out;
}

double SpectralCutoff::moment(const TensorState& psi, int k) const {
  const Eigen::Map<const CVecE> v(psi.amp.data(), Eigen::Index(psi.size()));
  const CVecE c = eig_.vectors.transpose().cast<cplx>() * v;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) acc += std::norm(c(i)) * std::pow(eig_.values(i), k);
  return acc * psi.weight();
}

TensorState spectral_cutoff(const NBodySystem& sys, const TensorState& psi, double kappa) {
  return SpectralCutoff(sys).apply(psi, kappa);
}

namespace {

using RowCMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Apply the one-particle operator on axis j of the row index of a k-particle
// kernel: kinetic -d^2/2 spectrally plus the trap diagonally.
CMat left_one_body(const CMat& K, const Grid1D& g, int k, double omega) {
  const std::size_t n = g.size();
  std::vector<double> sym(n);
  for (std::size_t m = 0; m < n; ++m) sym[m] = 0.5 * g.k(m) * g.k(m);
  CMat out = CMat::Zero(K.rows(), K.cols());
  for (int j = 0; j < k; ++j) {
    CMat t = K;
    const std::size_t stride = ipow(n, k - 1 - j);
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      cplx* col = t.data() + c * t.rows();
      apply_symbol_axis(col, k, n, j, sym);
    }
    for (Eigen::Index r = 0; r < K.rows(); ++r) {
      const double x = g.x((std::size_t(r) / stride) % n);
      t.row(r) += 0.5 * omega * omega * x * x * K.row(r);
    }
    out += t;
  }
  return out;
}

}  // namespace

double bbgky_residual(const NBodySystem& sys, const Trajectory& traj, int k) {
  if (k < 1 || k + 1 > sys.N) throw DomainError("BBGKY level needs 1 <= k and k + 1 <= N");
  if (traj.states.size() < 3) throw DomainError("BBGKY residual needs at least three stored times");
  const double dtau = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i + 1 < traj.times.size(); ++i)
    if (std::abs((traj.times[i + 1] - traj.times[i]) - dtau) > 1e-12 * std::max(1.0, dtau))
      throw DomainError("BBGKY residual needs uniformly spaced samples");

  const Grid1D& g = sys.grid;
  const std::size_t n = g.size();
  const double h = g.spacing();
  const std::size_t rows = ipow(n, k);
  const std::size_t rest = ipow(n, sys.N - k - 1);
  const auto pt = sys.pair_table();
  const double invN = 1.0 / double(sys.N);
  const double coupling = double(sys.N - k) / double(sys.N);

  // digit of axis j in a k-particle index
  auto digit = [&](std::size_t idx, int j) { return (idx / ipow(n, k - 1 - j)) % n; };

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
    const CMat dk = (partial_trace(traj.states[i + 1], k).kernel - partial_trace(traj.states[i - 1], k).kernel) /
                    (2.0 * dtau);
    const TensorState& psi = traj.states[i];
    const CMat K = partial_trace(psi, k).kernel;

    CMat rhs = left_one_body(K, g, k, sys.omega);
    rhs -= left_one_body(K.adjoint(), g, k, sys.omega).adjoint();
    // interactions among the first k particles
    if (k >= 2) {
      for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < rows; ++b) {
          double w = 0.0;
          for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q)
              w += pt[(digit(a, p) + n - digit(a, q)) % n] - pt[(digit(b, p) + n - digit(b, q)) % n];
          rhs(a, b) += invN * w * K(a, b);
        }
    }
    // (N-k)/N sum_j Tr_{k+1}[V_N(x_j - x_{k+1}), gamma^(k+1)]
    const double wrest = std::pow(h, sys.N - k - 1);
    RowCMat slice(rows, rest);
    for (std::size_t z = 0; z < n; ++z) {
      for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t r = 0; r < rest; ++r) slice(a, r) = psi.amp[(a * n + z) * rest + r];
      const CMat G = (slice * slice.adjoint()) * wrest;
      for (std::size_t a = 0; a < rows; ++a)
        for (std::size_t b = 0; b < rows; ++b) {
          double w = 0.0;
          for (int j = 0; j < k; ++j) w += pt[(digit(a, j) + n - z) % n] - pt[(digit(b, j) + n - z) % n];
          rhs(a, b) += coupling * h * w * G(a, b);
        }
    }
    const CMat res = cplx(0.0, 1.0) * dk - rhs;
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace mfnls
