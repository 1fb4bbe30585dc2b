#include "mfnls/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

#include "mfnls/errors.hpp"

namespace mfnls {

Grid1D::Grid1D(double half_length, std::size_t n) : L_(half_length), n_(n), h_(2.0 * half_length / double(n)) {
  if (!(half_length > 0.0)) throw DomainError("grid half-length must be positive");
  if (n < 2 || (n & (n - 1)) != 0) throw DomainError("grid size must be a power of two >= 2");
  x_.resize(n);
  k_.resize(n);
  for (std::size_t j = 0; j < n; ++j) x_[j] = -L_ + double(j) * h_;
  const long half = long(n / 2);
  for (std::size_t m = 0; m < n; ++m) {
    long mm = long(m) < half ? long(m) : long(m) - long(n);
    k_[m] = std::numbers::pi * double(mm) / L_;
  }
}

double TensorState::weight() const { return std::pow(grid.spacing(), N); }

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

TensorState zero_state(const Grid1D& g, int N, double omega) {
  if (N < 1) throw DomainError("particle count must be >= 1");
  TensorState s{N, g, CVec(ipow(g.size(), N), cplx(0.0)), omega};
  return s;
}

TensorState tensor_product(const Grid1D& g, const std::vector<CVec>& factors, double omega) {
  const int N = int(factors.size());
  TensorState s = zero_state(g, N, omega);
  const std::size_t n = g.size();
  for (const auto& f : factors)
    if (f.size() != n) throw DomainError("factor length does not match grid");
  std::vector<std::size_t> d(N, 0);
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    cplx v = 1.0;
    for (int a = 0; a < N; ++a) v *= factors[a][d[a]];
    s.amp[idx] = v;
    for (int a = N - 1; a >= 0; --a) {
      if (++d[a] < n) break;
      d[a] = 0;
    }
  }
  return s;
}

TensorState product_state(const Grid1D& g, const CVec& phi, int N, double omega) {
  return tensor_product(g, std::vector<CVec>(N, phi), omega);
}

cplx inner(const TensorState& a, const TensorState& b) {
  if (a.size() != b.size()) throw DomainError("state shape mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.amp[i]) * b.amp[i];
  return acc * a.weight();
}

double norm(const TensorState& s) {
  double acc = 0.0;
  for (const auto& v : s.amp) acc += std::norm(v);
  return std::sqrt(acc * s.weight());
}

void normalize(TensorState& s) {
  const double nr = norm(s);
  if (nr == 0.0) throw DegenerateInput("cannot normalize a zero state");
  for (auto& v : s.amp) v /= nr;
}

double max_abs_diff(const TensorState& a, const TensorState& b) {
  if (a.size() != b.size()) throw DomainError("state shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.amp[i] - b.amp[i]));
  return m;
}

double norm1(const Grid1D& g, const CVec& f) {
  double acc = 0.0;
  for (const auto& v : f) acc += std::norm(v);
  return std::sqrt(acc * g.spacing());
}

cplx inner1(const Grid1D& g, const CVec& a, const CVec& b) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc * g.spacing();
}

void normalize1(const Grid1D& g, CVec& f) {
  const double nr = norm1(g, f);
  if (nr == 0.0) throw DegenerateInput("cannot normalize a zero function");
  for (auto& v : f) v /= nr;
}

// ---- FFTW plans ---------------------------------------------------------

namespace {

std::mutex plan_mutex;

// Plans are created once per shape and reused for the process lifetime;
// execution through fftw_execute_dft is thread safe, planning is not.
fftw_plan axis_plan(std::size_t n, std::size_t stride, int sign) {
  static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> cache;
  std::lock_guard lock(plan_mutex);
  auto key = std::make_tuple(n, stride, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto* buf = fftw_alloc_complex(n * stride);
  int nn = int(n);
  fftw_plan p = fftw_plan_many_dft(1, &nn, int(stride), buf, nullptr, int(stride), 1, buf, nullptr,
                                   int(stride), 1, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  cache[key] = p;
  return p;
}

fftw_plan full_plan(int N, std::size_t n, int sign) {
  static std::map<std::tuple<int, std::size_t, int>, fftw_plan> cache;
  std::lock_guard lock(plan_mutex);
  auto key = std::make_tuple(N, n, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::vector<int> dims(N, int(n));
  auto* buf = fftw_alloc_complex(ipow(n, N));
  fftw_plan p = fftw_plan_dft(N, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  cache[key] = p;
  return p;
}

}  // namespace

void dft_axis_inplace(cplx* data, int N, std::size_t n, int axis, Direction dir) {
  if (axis < 0 || axis >= N) throw DomainError("axis out of range");
  const std::size_t stride = ipow(n, N - 1 - axis);
  const std::size_t outer = ipow(n, axis);
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan p = axis_plan(n, stride, sign);
  for (std::size_t b = 0; b < outer; ++b) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data + b * n * stride);
    fftw_execute_dft(p, ptr, ptr);
  }
  if (dir == Direction::inverse) {
    const double s = 1.0 / double(n);
    const std::size_t total = outer * n * stride;
    for (std::size_t i = 0; i < total; ++i) data[i] *= s;
  }
}

void dft_all_inplace(cplx* data, int N, std::size_t n, Direction dir) {
  const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  auto* ptr = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(full_plan(N, n, sign), ptr, ptr);
  if (dir == Direction::inverse) {
    const std::size_t total = ipow(n, N);
    const double s = 1.0 / double(total);
    for (std::size_t i = 0; i < total; ++i) data[i] *= s;
  }
}

TensorState dft_axis(const TensorState& s, int axis, Direction dir) {
  TensorState out = s;
  dft_axis_inplace(out.amp.data(), s.N, s.grid.size(), axis, dir);
  return out;
}

void apply_symbol_axis(cplx* data, int N, std::size_t n, int axis, const std::vector<double>& symbol) {
  dft_axis_inplace(data, N, n, axis, Direction::forward);
  const std::size_t stride = ipow(n, N - 1 - axis);
  const std::size_t total = ipow(n, N);
  for (std::size_t i = 0; i < total; ++i) data[i] *= symbol[(i / stride) % n];
  dft_axis_inplace(data, N, n, axis, Direction::inverse);
}

CVec apply_symbol(const Grid1D& g, const CVec& f, const std::vector<double>& symbol) {
  CVec out = f;
  apply_symbol_axis(out.data(), 1, g.size(), 0, symbol);
  return out;
}

std::vector<double> weight_symbol(const Grid1D& g, WeightKind kind) {
  std::vector<double> sym(g.size());
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double k2 = g.k(m) * g.k(m);
    sym[m] = kind == WeightKind::S ? 1.0 + 0.5 * k2 : 1.0 + k2;
  }
  return sym;
}

TensorState apply_weight_squared(const TensorState& s, const SobolevWeight& w) {
  TensorState out = s;
  const std::size_t n = s.grid.size();
  const auto sym = weight_symbol(s.grid, w.kind);
  for (int axis : w.axes) {
    if (axis < 0 || axis >= s.N) throw DomainError("weight axis out of range");
    // (1 - d^2/2) or (1 - d^2) spectrally, then the trap term in position space
    TensorState in = out;
    apply_symbol_axis(out.amp.data(), s.N, n, axis, sym);
    if (w.kind == WeightKind::S && s.omega != 0.0) {
      const std::size_t stride = ipow(n, s.N - 1 - axis);
      const double c = 0.5 * s.omega * s.omega;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = s.grid.x((i / stride) % n);
        out.amp[i] += c * x * x * in.amp[i];
      }
    }
  }
  return out;
}

double weighted_norm_squared(const TensorState& s, const SobolevWeight& w) {
  std::vector<int> ax = w.axes;
  std::sort(ax.begin(), ax.end());
  if (std::adjacent_find(ax.begin(), ax.end()) != ax.end()) throw DomainError("weight axes must be distinct");
  return inner(s, apply_weight_squared(s, w)).real();
}

TensorState permute_axes(const TensorState& s, const std::vector<int>& perm) {
  const int N = s.N;
  const std::size_t n = s.grid.size();
  std::vector<std::size_t> stride(N);
  for (int a = 0; a < N; ++a) stride[a] = ipow(n, N - 1 - a);
  TensorState out = s;
  std::vector<std::size_t> d(N, 0);
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    std::size_t src = 0;
    for (int a = 0; a < N; ++a) src += d[perm[a]] * stride[a];
    out.amp[idx] = s.amp[src];
    for (int a = N - 1; a >= 0; --a) {
      if (++d[a] < n) break;
      d[a] = 0;
    }
  }
  return out;
}

TensorState symmetrize(const TensorState& s) {
  std::vector<int> perm(s.N);
  std::iota(perm.begin(), perm.end(), 0);
  TensorState acc = zero_state(s.grid, s.N, s.omega);
  std::size_t count = 0;
  do {
    TensorState p = permute_axes(s, perm);
    for (std::size_t i = 0; i < acc.size(); ++i) acc.amp[i] += p.amp[i];
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& v : acc.amp) v /= double(count);
  const double nr = norm(acc);
  const double ref = norm(s);
  if (ref == 0.0 || nr <= 1e-12 * ref) throw DegenerateInput("state has no symmetric component");
  for (auto& v : acc.amp) v /= nr;
  return acc;
}

double symmetry_residual(const TensorState& s) {
  double worst = 0.0;
  std::vector<int> perm(s.N);
  for (int a = 0; a < s.N; ++a)
    for (int b = a + 1; b < s.N; ++b) {
      std::iota(perm.begin(), perm.end(), 0);
      std::swap(perm[a], perm[b]);
      worst = std::max(worst, max_abs_diff(s, permute_axes(s, perm)));
    }
  return worst;
}

TensorState random_symmetric_state(const Grid1D& g, int N, double omega, std::mt19937_64& rng, RandomShape shape) {
  TensorState s = zero_state(g, N, omega);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (auto& v : s.amp) v = cplx(nd(rng), nd(rng));
  const std::size_t n = g.size();
  std::vector<double> spec(n), env(n);
  for (std::size_t m = 0; m < n; ++m) spec[m] = std::exp(-0.5 * g.k(m) * g.k(m) / (shape.k_cut * shape.k_cut));
  for (std::size_t j = 0; j < n; ++j) env[j] = std::exp(-0.5 * g.x(j) * g.x(j) / (shape.width * shape.width));
  for (int a = 0; a < N; ++a) apply_symbol_axis(s.amp.data(), N, n, a, spec);
  std::vector<std::size_t> d(N, 0);
  for (std::size_t idx = 0; idx < s.size(); ++idx) {
    double e = 1.0;
    for (int a = 0; a < N; ++a) e *= env[d[a]];
    s.amp[idx] *= e;
    for (int a = N - 1; a >= 0; --a) {
      if (++d[a] < n) break;
      d[a] = 0;
    }
  }
  return symmetrize(s);
}

CVec gaussian_profile(const Grid1D& g, double center, double width, double momentum) {
  CVec f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = (g.x(j) - center) / width;
    f[j] = std::exp(-0.5 * y * y) * std::exp(cplx(0.0, momentum * g.x(j)));
  }
  normalize1(g, f);
  return f;
}

CVec plane_wave(const Grid1D& g, int m) {
  CVec f(g.size());
  const double k = std::numbers::pi * m / g.half_length();
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(cplx(0.0, k * g.x(j)));
  normalize1(g, f);
  return f;
}

}  // namespace mfnls
