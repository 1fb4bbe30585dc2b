#include "mfnls/collapse.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "mfnls/errors.hpp"
#include "mfnls/linalg.hpp"

namespace mfnls {

namespace {

const cplx I(0.0, 1.0);

// ∫_a^b f with rule r on 2^level equal pieces
template <class F>
double panel(const F& f, double a, double b, const GaussRule& r, int level) {
  const int parts = 1 << level;
  const double w = (b - a) / parts;
  double acc = 0.0;
  for (int p = 0; p < parts; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (std::size_t q = 0; q < r.x.size(); ++q) acc += 0.5 * w * r.w[q] * f(mid + 0.5 * w * r.x[q]);
  }
  return acc;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > 1e-13 * std::max(std::abs(x), std::abs(out.back()))) out.push_back(x);
  v.swap(out);
}

void add_graded(std::vector<double>& pts, double p, double d0, double reach) {
  for (double d = d0; d <= reach; d *= 2.0) {
    pts.push_back(p - d);
    pts.push_back(p + d);
  }
  pts.push_back(p - reach);
  pts.push_back(p + reach);
}

struct LineGrid {
  std::vector<double> singular;  // excluded holes (p - d0, p + d0), graded outward to sing_reach
  double d0 = 1e-14;
  double sing_reach = 1.0;
  std::vector<double> features;  // graded from feature_d0 to feature_reach, both sides
  double feature_d0 = 1e-6;
  double feature_reach = 2.0;
  double step = 1.0;     // uniform spacing on [-U1, U1], U1 = max |point| + margin
  double margin = 4.0;
  double ratio = 1.3;    // geometric growth beyond U1
  double U = 1e6;        // integration range [-U, U]
};

// Breakpoints of the composite rule, clipped to [-U, U].
std::vector<double> breakpoints(const LineGrid& lg) {
  std::vector<double> pts;
  double extent = 1.0;
  for (double p : lg.singular) {
    add_graded(pts, p, lg.d0, lg.sing_reach);
    extent = std::max(extent, std::abs(p) + lg.sing_reach);
  }
  for (double p : lg.features) {
    add_graded(pts, p, lg.feature_d0, lg.feature_reach);
    extent = std::max(extent, std::abs(p) + lg.feature_reach);
  }
  const double U1 = std::min(lg.U, std::ceil(extent + lg.margin));
  const long m = long(std::ceil(U1 / lg.step));
  for (long j = -m; j <= m; ++j) pts.push_back(double(j) * lg.step);
  for (double x = U1; x < lg.U; x *= lg.ratio) {
    pts.push_back(x);
    pts.push_back(-x);
  }
  pts.push_back(lg.U);
  pts.push_back(-lg.U);
  std::vector<double> kept;
  for (double x : pts) {
    if (std::abs(x) > lg.U) continue;
    bool hole = false;
    for (double p : lg.singular) hole = hole || std::abs(x - p) < lg.d0 * (1.0 - 1e-6);
    if (!hole) kept.push_back(x);
  }
  sort_unique(kept);
  return kept;
}

// Composite integral over consecutive breakpoints, skipping the holes; acc(mid, value) per panel.
template <class F, class Acc>
std::size_t line_integral(const F& f, const LineGrid& lg, int order, int level, Acc&& acc) {
  const auto pts = breakpoints(lg);
  const GaussRule& r = gauss_rule(order);
  std::size_t nodes = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    const double mid = 0.5 * (a + b);
    bool hole = false;
    for (double p : lg.singular) hole = hole || (a < p && p < b);  // p itself is never a breakpoint
    if (hole) continue;
    acc(mid, panel(f, a, b, r, level));
    nodes += r.x.size() << level;
  }
  return nodes;
}

// Base s-panels between consecutive zeros of theta_hat, with |theta_hat| cached at the nodes.
struct InnerPanels {
  std::vector<double> edges;
  std::vector<int> order;
  std::vector<std::size_t> first;  // node offsets, size panels + 1
  std::vector<double> s, a;        // node and weight * |theta_hat(node)|
};

const InnerPanels& inner_panels(int level) {
  static std::mutex mu;
  static std::map<int, InnerPanels> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;
  const Bump& b = Bump::standard();
  // beyond this point |theta_hat| < 1e-9 theta_hat(0); the neglected mass is below 1e-8 of the total
  const double S = b.truncation(1e-9);
  InnerPanels ip;
  std::vector<double> pos;
  for (double z : b.zeros())
    if (z < S) pos.push_back(z);
  for (auto r = pos.rbegin(); r != pos.rend(); ++r) ip.edges.push_back(-*r);
  ip.edges.insert(ip.edges.begin(), -S);
  for (double z : pos) ip.edges.push_back(z);
  ip.edges.push_back(S);
  ip.first.push_back(0);
  for (std::size_t i = 0; i + 1 < ip.edges.size(); ++i) {
    const double lo = ip.edges[i], hi = ip.edges[i + 1];
    const int ord = std::max(std::abs(lo), std::abs(hi)) <= 60.0 ? 8 : 6;
    ip.order.push_back(ord);
    const GaussRule& r = gauss_rule(ord);
    const int parts = 1 << level;
    const double w = (hi - lo) / parts;
    for (int p = 0; p < parts; ++p) {
      const double mid = lo + (p + 0.5) * w;
      for (std::size_t q = 0; q < r.x.size(); ++q) {
        const double s = mid + 0.5 * w * r.x[q];
        ip.s.push_back(s);
        ip.a.push_back(0.5 * w * r.w[q] * b.abs_hat(s));
      }
    }
    ip.first.push_back(ip.s.size());
  }
  return cache.emplace(level, std::move(ip)).first->second;
}

double bracket_ratio(double xi1, double u, double eps) {
  return std::pow((1.0 + xi1 * xi1) / (1.0 + (xi1 - u) * (xi1 - u)), eps);
}

}  // namespace

double kernel_H(const CollapseProbe& p, double eta, double xi1, double u) {
  if (u == 0.0 || !std::isfinite(u)) throw DomainError("kernel_H needs a finite u != 0");
  if (p.epsilon < 0.0) throw DomainError("epsilon must be nonnegative");
  const InnerPanels& ip = inner_panels(p.level);
  const Bump& bump = Bump::standard();
  const double au = std::abs(u);
  // in s = u w the brackets are centred at c1 = u sigma and c2 = u (sigma + 2u), width |u|
  const double c1 = eta - 2.0 * xi1 * u;
  const double c2 = c1 + 2.0 * u * u;
  const double eps = p.epsilon;
  auto weight = [&](double s) {
    if (eps == 0.0) return 1.0;
    const double q1 = (s - c1) / u, q2 = (s - c2) / u;
    return std::pow((1.0 + q1 * q1) * (1.0 + q2 * q2), -eps);
  };
  double acc = 0.0;
  std::vector<double> cuts;
  for (std::size_t i = 0; i + 1 < ip.edges.size(); ++i) {
    const double lo = ip.edges[i], hi = ip.edges[i + 1], W = hi - lo;
    cuts.clear();
    if (eps > 0.0 && au < 4.0 * W) {
      for (double c : {c1, c2}) {
        if (c < lo - 4.0 * W || c > hi + 4.0 * W) continue;
        if (c > lo && c < hi) cuts.push_back(c);
        for (double d = au; d < W + std::abs(c - 0.5 * (lo + hi)); d *= 2.0) {
          if (c - d > lo && c - d < hi) cuts.push_back(c - d);
          if (c + d > lo && c + d < hi) cuts.push_back(c + d);
        }
      }
    }
    if (cuts.empty()) {
      for (std::size_t q = ip.first[i]; q < ip.first[i + 1]; ++q) acc += ip.a[q] * weight(ip.s[q]);
      continue;
    }
    cuts.push_back(lo);
    cuts.push_back(hi);
    sort_unique(cuts);
    const GaussRule& r = gauss_rule(ip.order[i]);
    auto f = [&](double s) { return bump.abs_hat(s) * weight(s); };
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) acc += panel(f, cuts[j], cuts[j + 1], r, p.level);
  }
  return acc / au;
}

double kernel_H_envelope(double epsilon, double eta, double xi1, double u) {
  if (u == 0.0) throw DomainError("envelope needs u != 0");
  const double sigma = eta / u - 2.0 * xi1;
  const double t = sigma + 2.0 * u;
  return 1.0 / (std::abs(u) * std::pow((1.0 + sigma * sigma) * (1.0 + t * t), epsilon));
}

IntegralI integral_I(const CollapseProbe& p, double eta, double xi1) {
  if (!(p.epsilon > 0.0)) throw DomainError("integral_I needs epsilon > 0");
  const double eps = p.epsilon;
  auto F = [&](double u) { return bracket_ratio(xi1, u, eps) * kernel_H(p, eta, xi1, u); };
  LineGrid lg;
  lg.singular = {0.0};
  lg.d0 = p.u_min;
  lg.sing_reach = 1.0;
  lg.features = {1.0, -1.0, xi1};
  // c1 = 0 and c2 = 0 in the u variable
  if (xi1 != 0.0) lg.features.push_back(eta / (2.0 * xi1));
  const double disc = xi1 * xi1 - 2.0 * eta;
  if (disc >= 0.0) {
    lg.features.push_back(0.5 * (xi1 + std::sqrt(disc)));
    lg.features.push_back(0.5 * (xi1 - std::sqrt(disc)));
  }
  lg.U = p.u_max;
  IntegralI out;
  out.nodes = line_integral(F, lg, 8, p.level, [&](double mid, double v) {
    (std::abs(mid) < 1.0 ? out.I1 : out.I2) += v;
  });
  // F ~ |u|^{4eps-1} at 0 and ~ |u|^{-1-4eps} at infinity
  const double small = (F(p.u_min) + F(-p.u_min)) * p.u_min / (4.0 * eps);
  const double large = (F(p.u_max) + F(-p.u_max)) * p.u_max / (4.0 * eps);
  out.I1 += small;
  out.I2 += large;
  out.tail = small + large;
  out.total = out.I1 + out.I2;
  out.converged = std::isfinite(out.total) && out.tail <= p.tail_tol * out.total;
  return out;
}

IScan scan_I(const CollapseProbe& p, double range, double step, int threads) {
  if (!(step > 0.0) || !(range >= 0.0)) throw DomainError("scan needs a positive step");
  IScan sc;
  const long m = long(std::llround(range / step));
  for (long i = -m; i <= m; ++i) {
    sc.etas.push_back(double(i) * step);
    sc.xis.push_back(double(i) * step);
  }
  const std::size_t ne = sc.etas.size(), nx = sc.xis.size();
  sc.values.assign(ne, std::vector<double>(nx, 0.0));
  std::vector<char> ok(ne * nx, 1);
  // xi1 >= 0 half, mirrored afterwards
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t j = std::size_t(m); j < nx; ++j) cells.emplace_back(i, j);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const auto [i, j] = cells[c];
      const IntegralI r = integral_I(p, sc.etas[i], sc.xis[j]);
      sc.values[i][j] = r.total;
      ok[i * nx + j] = r.converged;
    }
  };
  const int nt = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t j = 0; j < std::size_t(m); ++j) {
      sc.values[i][j] = sc.values[i][nx - 1 - j];
      ok[i * nx + j] = ok[i * nx + nx - 1 - j];
    }
  sc.sup = -1.0;
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t j = 0; j < nx; ++j) {
      sc.all_converged = sc.all_converged && ok[i * nx + j];
      if (sc.values[i][j] > sc.sup) {
        sc.sup = sc.values[i][j];
        sc.eta_at_sup = sc.etas[i];
        sc.xi_at_sup = sc.xis[j];
      }
    }
  return sc;
}

namespace {

void check_lemma_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 0.125)) throw DomainError("lemma F needs 0 < epsilon < 1/8");
}

// the hole around a singular point p is 1e-10 max(1, |p|): large enough that u - p keeps full relative
// precision at the innermost nodes, small enough that the leading-order hole correction is exact to 1e-10
constexpr double kFHole = 1e-10;
constexpr double kFRange = 1e12;

}  // namespace

double lemma_F(double epsilon, double e, int level) {
  check_lemma_epsilon(epsilon);
  const double eps = epsilon;
  auto g = [&](double u) { return std::pow(std::abs(u - e), -8.0 * eps) * std::pow(1.0 + u * u, -(0.5 - 2.0 * eps)); };
  LineGrid lg;
  lg.singular = {e};
  lg.d0 = kFHole * std::max(1.0, std::abs(e));
  lg.sing_reach = 2.0 * std::max(1.0, std::abs(e));
  lg.features = {0.0};
  lg.feature_d0 = 0.25;
  lg.step = 0.25;
  lg.ratio = 1.5;
  lg.U = kFRange;
  double acc = 0.0;
  line_integral(g, lg, 16, level, [&](double, double v) { acc += v; });
  // hole around e: |u - e|^{-8eps} times the smooth factor at e
  acc += 2.0 * std::pow(lg.d0, 1.0 - 8.0 * eps) / (1.0 - 8.0 * eps) * std::pow(1.0 + e * e, -(0.5 - 2.0 * eps));
  acc += (g(kFRange) + g(-kFRange)) * kFRange / (4.0 * eps);
  return acc;
}

double lemma_F_bound(double epsilon, double e, int level) {
  check_lemma_epsilon(epsilon);
  if (std::abs(e) < 1.0) throw DomainError("the scaling majorant applies for |e| >= 1");
  const double eps = epsilon;
  auto g = [&](double x) { return std::pow(std::abs(x - 1.0), -8.0 * eps) * std::pow(std::abs(x), -(1.0 - 4.0 * eps)); };
  LineGrid lg;
  lg.singular = {0.0, 1.0};
  lg.d0 = kFHole;
  lg.sing_reach = 0.5;
  lg.step = 0.25;
  lg.ratio = 1.5;
  lg.U = kFRange;
  double J = 0.0;
  line_integral(g, lg, 16, level, [&](double, double v) { J += v; });
  J += 2.0 * std::pow(kFHole, 4.0 * eps) / (4.0 * eps);
  J += 2.0 * std::pow(kFHole, 1.0 - 8.0 * eps) / (1.0 - 8.0 * eps);
  J += (g(kFRange) + g(-kFRange)) * kFRange / (4.0 * eps);
  return std::pow(std::abs(e), -4.0 * eps) * J;
}

double dual_weight(double epsilon, double eta, double xi1, double u) {
  if (u == 0.0) throw DomainError("dual weight needs u != 0");
  const double q = (eta + (xi1 - u) * (xi1 - u)) / u;
  const double a = u - q, b = u + q;
  return bracket_ratio(xi1, u, epsilon) * std::pow((1.0 + a * a) * (1.0 + b * b), -epsilon);
}

OptimalityResult optimality_scan(const CollapseProbe& p, OptimalityMode mode, const std::vector<double>& deltas,
                                 double eta, double xi1) {
  if (deltas.size() < 3) throw DomainError("optimality scan needs at least three cutoffs");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] < 1.0)) throw DomainError("cutoffs must lie in (0, 1)");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw DomainError("cutoffs must be decreasing");
  }
  if (deltas.back() < 1e3 * p.u_min) throw DomainError("smallest cutoff below quadrature resolution");
  if (mode != OptimalityMode::epsilon_zero && !(p.epsilon > 0.0))
    throw DomainError("this mode relaxes one condition only; epsilon must be positive");

  OptimalityResult out;
  out.deltas = deltas;
  CollapseProbe q = p;
  if (mode == OptimalityMode::epsilon_zero) q.epsilon = 0.0;
  const double eps = q.epsilon;
  for (double delta : deltas) {
    LineGrid lg;
    lg.singular = {0.0};
    lg.d0 = delta;
    double acc = 0.0;
    if (mode == OptimalityMode::T_infinite) {
      auto f = [&](double u) { return dual_weight(eps, eta, xi1, u) / std::abs(u); };
      lg.sing_reach = 1.0;
      lg.features = {xi1};
      lg.U = q.u_max;
      line_integral(f, lg, 8, q.level, [&](double, double v) { acc += v; });
      acc += (f(q.u_max) + f(-q.u_max)) * q.u_max / (4.0 * eps);
    } else {
      auto f = [&](double u) { return bracket_ratio(xi1, u, eps) * kernel_H(q, eta, xi1, u); };
      lg.sing_reach = 1.0;
      lg.U = 1.0;
      line_integral(f, lg, 8, q.level, [&](double, double v) { acc += v; });
    }
    out.values.push_back(acc);
  }
  std::vector<double> x;
  for (double d : deltas) x.push_back(std::log(1.0 / d));
  const LineFit fit = fit_line(x, out.values);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.r2 = fit.r2;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    out.local_slopes.push_back((out.values[i + 1] - out.values[i]) / (x[i + 1] - x[i]));
  return out;
}

namespace {

struct SpectralData {
  const Grid1D& g;
  std::vector<double> ksq, wt;
  double scale;  // h / n: Parseval factor for the unnormalized transform

  SpectralData(const Grid1D& grid, double power) : g(grid), ksq(grid.size()), wt(grid.size()) {
    scale = g.spacing() / double(g.size());
    for (std::size_t m = 0; m < g.size(); ++m) {
      ksq[m] = g.k(m) * g.k(m);
      wt[m] = std::pow(1.0 + ksq[m], power);
    }
  }
  CVec forward(CVec v) const {
    dft_axis_inplace(v.data(), 1, g.size(), 0, Direction::forward);
    return v;
  }
  CVec inverse(CVec v) const {
    dft_axis_inplace(v.data(), 1, g.size(), 0, Direction::inverse);
    return v;
  }
  // <R a, R c> from spectra
  cplx pair(const CVec& A, const CVec& C) const {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < A.size(); ++m) acc += wt[m] * std::conj(A[m]) * C[m];
    return acc * scale;
  }
  double norm2(const CVec& A) const { return pair(A, A).real(); }
};

std::array<CVec, 4> factor_spectra(const SpectralData& sd, const RankOneKernel& k) {
  const std::size_t n = sd.g.size();
  for (const CVec* v : {&k.F1, &k.F2, &k.G1, &k.G2})
    if (v->size() != n) throw DomainError("kernel factor does not match grid");
  return {sd.forward(k.F1), sd.forward(k.F2), sd.forward(k.G1), sd.forward(k.G2)};
}

double rhs_norm(const SpectralData& sd, const std::array<CVec, 4>& hats) {
  double r = 1.0;
  for (const auto& h : hats) r *= std::sqrt(sd.norm2(h));
  if (!(r > 0.0) || !std::isfinite(r)) throw DegenerateInput("ensemble kernel is not normalizable");
  return r;
}

// ||R (a ⊗ b - c ⊗ d)||^2 for B_{1,2} of |f1 ⊗ f2><g1 ⊗ g2|, given the flowed spectra
double collision_norm2(const SpectralData& sd, const std::array<CVec, 4>& hats) {
  const std::size_t n = sd.g.size();
  const CVec f1 = sd.inverse(hats[0]), f2 = sd.inverse(hats[1]), g1 = sd.inverse(hats[2]), g2 = sd.inverse(hats[3]);
  CVec a(n), d(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = f1[j] * f2[j] * std::conj(g2[j]);
    d[j] = f2[j] * std::conj(g1[j]) * std::conj(g2[j]);
  }
  const CVec A = sd.forward(a), D = sd.forward(d);
  const CVec& C = hats[0];
  CVec B(n);  // spectrum of conj(g1)
  for (std::size_t m = 0; m < n; ++m) B[m] = std::conj(hats[2][(n - m) % n]);
  const double v = sd.norm2(A) * sd.norm2(B) + sd.norm2(C) * sd.norm2(D) - 2.0 * (sd.pair(A, C) * sd.pair(B, D)).real();
  return std::max(0.0, v);
}

RatioStats summarize(std::vector<double> r) {
  RatioStats s;
  s.ratios = std::move(r);
  if (s.ratios.empty()) return s;
  s.max = *std::max_element(s.ratios.begin(), s.ratios.end());
  s.min = *std::min_element(s.ratios.begin(), s.ratios.end());
  double acc = 0.0;
  for (double v : s.ratios) acc += v;
  s.mean = acc / double(s.ratios.size());
  return s;
}

}  // namespace

double direct_operator_ratio(const Grid1D& g, const RankOneKernel& k, double epsilon, double T, int level) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("time localization needs 0 < T < inf");
  const SpectralData sd(g, epsilon);
  const auto hats = factor_spectra(sd, k);
  const double rhs = rhs_norm(sd, hats);

  // tau in [-T, T] with window theta(tau/T)^2; panels graded towards tau = 0
  std::vector<double> edges{0.0};
  const int ng = 40;
  for (int j = 0; j < ng; ++j) edges.push_back(T * 1e-7 * std::pow(1e6, double(j) / double(ng - 1)));
  for (int j = 3; j <= 20; ++j) edges.push_back(T * 0.05 * j);
  sort_unique(edges);
  const GaussRule& r = gauss_rule(8);
  std::array<CVec, 4> flowed = hats;
  CVec phase(g.size());
  auto at = [&](double tau) {
    for (std::size_t m = 0; m < g.size(); ++m) phase[m] = std::exp(-I * (tau * sd.ksq[m]));
    for (int f = 0; f < 4; ++f)
      for (std::size_t m = 0; m < g.size(); ++m) flowed[f][m] = hats[f][m] * phase[m];
    const double th = Bump::theta(tau / T);
    return th * th * collision_norm2(sd, flowed);
  };
  double lhs2 = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    lhs2 += panel([&](double tau) { return at(tau) + at(-tau); }, edges[i], edges[i + 1], r, level);
  return std::sqrt(lhs2) / rhs;
}

RatioStats direct_operator_test(const CollapseProbe& p, const Grid1D& g, const std::vector<RankOneKernel>& ensemble) {
  std::vector<double> r;
  for (const auto& k : ensemble) r.push_back(direct_operator_ratio(g, k, p.epsilon, p.T, p.level));
  return summarize(std::move(r));
}

double trace_bound_ratio(const Grid1D& g, const RankOneKernel& k, double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  const SpectralData sd(g, alpha);
  const auto hats = factor_spectra(sd, k);
  return std::sqrt(collision_norm2(sd, hats)) / rhs_norm(sd, hats);
}

RatioStats trace_bound_check(double alpha, const Grid1D& g, const std::vector<RankOneKernel>& ensemble) {
  std::vector<double> r;
  for (const auto& k : ensemble) r.push_back(trace_bound_ratio(g, k, alpha));
  return summarize(std::move(r));
}

std::vector<RankOneKernel> modulation_family(const Grid1D& g, const CVec& f, const std::vector<double>& lambdas) {
  CVec base = f;
  normalize1(g, base);
  std::vector<RankOneKernel> out;
  for (double lam : lambdas) {
    CVec m(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) m[j] = std::exp(I * (lam * g.x(j))) * base[j];
    normalize1(g, m);
    out.push_back({m, base, base, base});
  }
  return out;
}

std::vector<RankOneKernel> concentration_family(const Grid1D& g, const std::function<double(double)>& f,
                                                const std::vector<double>& lambdas) {
  CVec base(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) base[j] = f(g.x(j));
  normalize1(g, base);
  std::vector<RankOneKernel> out;
  for (double lam : lambdas) {
    if (!(lam > 0.0)) throw DomainError("concentration scale must be positive");
    CVec c(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) c[j] = f(lam * g.x(j));
    normalize1(g, c);
    out.push_back({base, c, base, c});
  }
  return out;
}

}  // namespace mfnls
