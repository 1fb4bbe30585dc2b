#include "mfnls/lens.hpp"

#include <cmath>
#include <numbers>

#include "mfnls/errors.hpp"
#include "mfnls/nls.hpp"

namespace mfnls {

namespace {
const cplx I(0.0, 1.0);
}

double LensMap::tau_of(double t) const { return omega == 0.0 ? t : std::tan(omega * t) / omega; }

double LensMap::time_of(double tau) const { return omega == 0.0 ? tau : std::atan(omega * tau) / omega; }

double LensMap::cos_of(double t) const { return std::cos(omega * t); }

void LensMap::check_window(double t) const {
  if (omega == 0.0) return;
  if (!(std::abs(omega * t) < 0.5 * std::numbers::pi) || std::abs(cos_of(t)) < min_cos)
    throw DomainError("time outside the lens window");
}

RMat interpolation_matrix(const Grid1D& g, double scale) {
  const std::size_t n = g.size();
  const double L = g.half_length();
  RMat p = RMat::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double y = g.x(i) * scale;
    if (y < -L || y >= L) continue;
    for (std::size_t l = 0; l < n; ++l) {
      const double d = y - g.x(l);
      // modes |m| < n/2 plus the Nyquist mode as a cosine keep real data real
      double acc = 1.0;
      for (std::size_t m = 1; m < n / 2; ++m) acc += 2.0 * std::cos(std::numbers::pi * double(m) * d / L);
      acc += std::cos(std::numbers::pi * double(n / 2) * d / L);
      p(Eigen::Index(i), Eigen::Index(l)) = acc / double(n);
    }
  }
  return p;
}

namespace {

void apply_matrix_axis(CVec& data, int N, std::size_t n, int axis, const RMat& P) {
  const std::size_t stride = ipow(n, N - 1 - axis);
  const std::size_t outer = ipow(n, axis);
  CVecE col{Eigen::Index(n)}, res{Eigen::Index(n)};
  for (std::size_t b = 0; b < outer; ++b)
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = b * n * stride + s;
      for (std::size_t l = 0; l < n; ++l) col(Eigen::Index(l)) = data[base + l * stride];
      res.noalias() = P.cast<cplx>() * col;
      for (std::size_t l = 0; l < n; ++l) data[base + l * stride] = res(Eigen::Index(l));
    }
}

// sum_j x_j^2 at every point of grid^N
std::vector<double> radius_squared(const Grid1D& g, int N) {
  const std::size_t n = g.size();
  std::vector<double> out(ipow(n, N));
  std::vector<std::size_t> d(N, 0);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    double r = 0.0;
    for (int a = 0; a < N; ++a) r += g.x(d[a]) * g.x(d[a]);
    out[idx] = r;
    for (int a = N - 1; a >= 0; --a) {
      if (++d[a] < n) break;
      d[a] = 0;
    }
  }
  return out;
}

double outer_mass(const TensorState& s, double radius) {
  const std::size_t n = s.grid.size();
  double acc = 0.0;
  std::vector<std::size_t> d(s.N, 0);
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    bool out = false;
    for (int a = 0; a < s.N; ++a) out = out || std::abs(s.grid.x(d[a])) > radius;
    if (out) acc += std::norm(s.amp[idx]);
    for (int a = s.N - 1; a >= 0; --a) {
      if (++d[a] < n) break;
      d[a] = 0;
    }
  }
  return acc * s.weight();
}

// out(x) = factor * exp(i sign omega tan |x|^2/2) in(x * scale)
TensorState rescale(const TensorState& in, double scale, double factor, double chirp) {
  TensorState out = in;
  const RMat P = interpolation_matrix(in.grid, scale);
  for (int a = 0; a < in.N; ++a) apply_matrix_axis(out.amp, in.N, in.grid.size(), a, P);
  const auto r2 = radius_squared(in.grid, in.N);
  for (std::size_t i = 0; i < out.size(); ++i) out.amp[i] *= factor * std::exp(I * (chirp * 0.5 * r2[i]));
  if (outer_mass(out, 0.9 * in.grid.half_length()) > 1e-6)
    throw ResolutionError("rescaled state escapes the box");
  return out;
}

}  // namespace

LensedState lens_function(const LensMap& map, const TensorState& u, double tau) {
  const double t = map.time_of(tau);
  if (map.omega == 0.0) return {u, t};
  map.check_window(t);
  const double c = map.cos_of(t);
  const double s = std::tan(map.omega * t);
  TensorState psi = rescale(u, 1.0 / c, std::pow(c, -0.5 * u.N), -map.omega * s);
  psi.omega = map.omega;
  return {psi, t};
}

LensedState inverse_lens_function(const LensMap& map, const TensorState& psi, double t) {
  const double tau = map.tau_of(t);
  if (map.omega == 0.0) return {psi, tau};
  map.check_window(t);
  const double c = map.cos_of(t);
  const double s = std::tan(map.omega * t);
  // u(y) = c^{N/2} exp(i omega s (c y)^2 / 2) psi(c y)
  TensorState u = rescale(psi, c, std::pow(c, 0.5 * psi.N), map.omega * s * c * c);
  u.omega = 0.0;
  return {u, tau};
}

namespace {

CMat rescale_kernel(const MarginalDensity& K, double scale, double factor, double chirp) {
  const int k = K.k;
  const std::size_t n = K.grid.size();
  const std::size_t rows = ipow(n, k);
  const RMat P = interpolation_matrix(K.grid, scale);
  auto rows_apply = [&](const CMat& A) {
    CMat out = A;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      CVec col(out.data() + c * out.rows(), out.data() + (c + 1) * out.rows());
      for (int a = 0; a < k; ++a) apply_matrix_axis(col, k, n, a, P);
      std::copy(col.begin(), col.end(), out.data() + c * out.rows());
    }
    return out;
  };
  const CMat a = rows_apply(K.kernel);
  CMat b = rows_apply(a.transpose()).transpose();
  const auto r2 = radius_squared(K.grid, k);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      b(Eigen::Index(i), Eigen::Index(j)) *= factor * std::exp(I * (chirp * 0.5 * (r2[i] - r2[j])));
  return b;
}

}  // namespace

LensedKernel lens_kernel(const LensMap& map, const MarginalDensity& K, double tau) {
  const double t = map.time_of(tau);
  if (map.omega == 0.0) return {K, t};
  map.check_window(t);
  const double c = map.cos_of(t);
  const double s = std::tan(map.omega * t);
  MarginalDensity out{K.k, K.grid, rescale_kernel(K, 1.0 / c, std::pow(c, -K.k), -map.omega * s)};
  return {out, t};
}

LensedKernel inverse_lens_kernel(const LensMap& map, const MarginalDensity& K, double t) {
  const double tau = map.tau_of(t);
  if (map.omega == 0.0) return {K, tau};
  map.check_window(t);
  const double c = map.cos_of(t);
  const double s = std::tan(map.omega * t);
  MarginalDensity out{K.k, K.grid, rescale_kernel(K, c, std::pow(c, K.k), map.omega * s * c * c)};
  return {out, tau};
}

CVec free_flow(const Grid1D& g, const CVec& f, double tau, KineticConvention conv) {
  const double c = conv == KineticConvention::half ? 0.5 : 1.0;
  CVec out = f;
  dft_axis_inplace(out.data(), 1, g.size(), 0, Direction::forward);
  for (std::size_t m = 0; m < g.size(); ++m) out[m] *= std::exp(-I * (tau * c * g.k(m) * g.k(m)));
  dft_axis_inplace(out.data(), 1, g.size(), 0, Direction::inverse);
  return out;
}

double intertwine_linear_check(const LensMap& map, const Grid1D& g, const CVec& phi0, double T_run,
                               KineticConvention conv, double dt) {
  if (T_run == 0.0) return 0.0;
  map.check_window(T_run);
  NLSProblem p;
  p.omega = map.omega;
  p.b0 = 0.0;
  p.side = NLSSide::trapped;
  p.grid = g;
  p.phi0 = phi0;
  const std::size_t steps = std::max<std::size_t>(1, std::size_t(std::ceil(std::abs(T_run) / dt)));
  const NLSTrajectory tr = evolve_nls(p, std::abs(T_run) / double(steps), steps, steps);
  const CVec& psi = tr.states.back();

  const double tau = map.tau_of(T_run);
  TensorState u{1, g, free_flow(g, phi0, tau, conv), 0.0};
  const TensorState m = lens_function(map, u, tau).state;
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) acc += std::norm(m.amp[j] - psi[j]);
  return std::sqrt(acc * g.spacing());
}

EnergyComparison intertwine_energy_check(const LensMap& map, const TensorState& u, double tau, int k) {
  if (k < 1 || k > u.N) throw DomainError("energy comparison order out of range");
  const LensedState ls = lens_function(map, u, tau);
  SobolevWeight wl{WeightKind::L, {}}, ws{WeightKind::S, {}};
  for (int j = 0; j < k; ++j) {
    wl.axes.push_back(j);
    ws.axes.push_back(j);
  }
  TensorState uu = u;
  uu.omega = 0.0;
  TensorState psi = ls.state;
  psi.omega = map.omega;
  EnergyComparison e;
  e.lhs = weighted_norm_squared(uu, wl);
  e.rhs = weighted_norm_squared(psi, ws);
  e.ratio = e.lhs / e.rhs;
  return e;
}

}  // namespace mfnls
