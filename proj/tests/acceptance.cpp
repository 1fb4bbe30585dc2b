// Acceptance gate: `acceptance <criterion>` prints one PASS/FAIL line and
// exits non-zero on FAIL. Runtime budgets are part of each criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "mfnls/collapse.hpp"
#include "mfnls/energy_checks.hpp"
#include "mfnls/lens.hpp"
#include "mfnls/marginals.hpp"
#include "mfnls/nbody.hpp"
#include "mfnls/nls.hpp"

using namespace mfnls;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

using Clock = std::chrono::steady_clock;

PotentialSpec gauss(double beta) { return PotentialSpec::gaussian_well(1.0, 1.0, beta); }
PotentialSpec mixed(double beta) { return PotentialSpec::mixed_sign(1.0, 1.0, 0.25, beta); }

void c1(Outcome& o) {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (const auto& v : {gauss(0.5), mixed(0.5)})
    for (int N : {2, 3, 4}) {
      Grid1D g(8.0, N == 4 ? 16 : 32);
      NBodySystem sys(N, g, v, 0.5);
      worst = std::max(worst, check_decomposition_identity(sys, random_symmetric_state(g, N, 0.5, rng)));
    }
  o.pass = worst <= 1e-10;
  o.detail << "max defect " << worst << " (<= 1e-10)";
}

void c2(Outcome& o) {
  Grid1D g(8.0, 64);
  for (double w : {0.0, 1.0}) {
    const auto r = check_pair_positivity(gauss(0.5), 2, w, g);
    o.pass = o.pass && r.value >= -1e-6;
    o.detail << "lambda_min(omega=" << w << ") " << r.value << "; ";
  }
  o.detail << "(>= -1e-6)";
}

void c3(Outcome& o) {
  std::mt19937_64 rng(103);
  for (int N : {2, 3}) {
    Grid1D g(8.0, N == 2 ? 32 : 16);
    NBodySystem sys(N, g, gauss(0.5), 1.0);
    double k1 = INFINITY, k2 = INFINITY;
    for (int d = 0; d < 100; ++d) {
      const TensorState psi = random_symmetric_state(g, N, 1.0, rng);
      k1 = std::min(k1, check_energy_estimate(sys, psi, 1).margin);
      k2 = std::min(k2, check_energy_estimate(sys, psi, 2).margin);
    }
    o.pass = o.pass && k1 >= -1e-8;
    o.detail << "N=" << N << " min k=1 margin " << k1 << " (>= -1e-8), k=2 margin " << k2 << " (reported); ";
  }
}

void c4(Outcome& o) {
  Grid1D g(8.0, 64);
  for (const auto& v : {gauss(0.5), mixed(0.5)}) {
    const auto r = check_sobolev_operator_bound(v, g);
    o.pass = o.pass && r.pass;
    o.detail << v.id() << " sigma_max " << r.value << " <= " << r.bound << "; ";
  }
}

void c5(Outcome& o) {
  Grid1D g(8.0, 64);
  const CVec phi = gaussian_profile(g, 0.5, 1.0, 1.0);
  const TensorState u{1, g, phi, 0.0};
  const LensMap m{1.0};
  const double id = max_abs_diff(lens_function(LensMap{0.0}, u, 0.4).state, u);
  const double unit = std::abs(norm(lens_function(m, u, m.tau_of(0.4)).state) - 1.0);
  std::mt19937_64 rng(105);
  const MarginalDensity K = partial_trace(random_symmetric_state(g, 2, 0.0, rng), 1);
  const double tn = std::abs(trace_norm(lens_kernel(m, K, m.tau_of(0.4)).kernel) - trace_norm(K));
  const double good = intertwine_linear_check(m, g, phi, 0.4, KineticConvention::half);
  const double bad = intertwine_linear_check(m, g, phi, 0.4, KineticConvention::full);
  o.pass = id <= 1e-14 && unit <= 1e-7 && tn <= 1e-7 && good <= 1e-5 && bad >= 1e-1;
  o.detail << "identity " << id << " (<= 1e-14), unitarity " << unit << ", trace norm " << tn << " (<= 1e-7), "
           << "intertwining " << good << " (<= 1e-5), wrong convention " << bad << " (>= 0.1)";
}

void c6(Outcome& o) {
  Grid1D g(8.0, 32);
  NBodySystem sys(3, g, gauss(0.5), 1.0);
  std::mt19937_64 rng(106);
  EvolveOptions opt;
  opt.stride = 100;
  const auto tr = evolve(sys, random_symmetric_state(g, 3, 1.0, rng), 1e-3, 1000, opt);
  double de = 0.0;
  for (double e : tr.energies) de = std::max(de, std::abs(e - tr.energies.front()));
  const double sym = symmetry_residual(tr.states.back());
  o.pass = tr.max_step_norm_drift <= 1e-10 && sym <= 1e-9 && de <= 1e-6;
  o.detail << "norm drift/step " << tr.max_step_norm_drift << " (<= 1e-10), symmetry " << sym
           << " (<= 1e-9), energy drift " << de << " (<= 1e-6)";
}

void c7(Outcome& o) {
  Grid1D g(8.0, 16);
  NBodySystem sys(3, g, gauss(0.5), 1.0);
  std::mt19937_64 rng(107);
  const TensorState psi = random_symmetric_state(g, 3, 1.0, rng);
  double prev = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    EvolveOptions opt;
    opt.record_energy = false;
    const double r = bbgky_residual(sys, evolve(sys, psi, dt, std::size_t(std::llround(0.1 / dt)), opt), 1);
    if (prev > 0.0) {
      const double ratio = prev / r;
      o.pass = o.pass && ratio >= 3.5 && ratio <= 4.5;
      o.detail << "ratio " << ratio << " ";
    }
    prev = r;
  }
  o.detail << "(in [3.5, 4.5])";
}

void c8(Outcome& o) {
  Grid1D g(8.0, 32);
  const auto v = gauss(0.3);
  const CVec phi = gaussian_profile(g, 0.0, 1.0);
  NLSProblem p;
  p.grid = g;
  p.phi0 = phi;
  p.b0 = -constants(v).integral;
  const auto nl = evolve_nls(p, 0.01, 50, 50);
  double prev = INFINITY, t0 = 0.0;
  for (int N : {2, 3, 4}) {
    NBodySystem sys(N, g, v, 0.0);
    EvolveOptions opt;
    opt.stride = 50;
    opt.record_energy = false;
    const auto tr = evolve(sys, product_state(g, phi, N), 0.01, 50, opt);
    t0 = std::max(t0, chaos_distance(tr.states.front(), 1, phi));
    const double d = chaos_distance(tr.states.back(), 1, nl.states.back());
    o.pass = o.pass && d < prev;
    prev = d;
    o.detail << "N=" << N << " " << d << "; ";
  }
  o.pass = o.pass && t0 <= 1e-12;
  o.detail << "strictly decreasing, t=0 max " << t0 << " (<= 1e-12)";
}

void c9(Outcome& o) {
  CollapseProbe p;
  const IScan s0 = scan_I(p, 50.0, 5.0);
  p.level = 1;
  const IScan s1 = scan_I(p, 50.0, 5.0);
  p.level = 0;
  double rel = 0.0;
  for (std::size_t i = 0; i < s0.etas.size(); ++i)
    for (std::size_t j = 0; j < s0.xis.size(); ++j)
      rel = std::max(rel, std::abs(s1.values[i][j] / s0.values[i][j] - 1.0));
  const bool scan_ok = std::isfinite(s0.sup) && s0.all_converged && s1.all_converged && rel <= 1e-3;

  Grid1D g(160.0, 8192);
  CVec f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-0.5 * g.x(j) * g.x(j));
  const RatioStats mod = direct_operator_test(p, g, modulation_family(g, f, {4.0, 16.0, 64.0}));
  const bool mod_ok = mod.max / mod.min <= 2.0;

  // concentration family: the ratio must grow as eps decreases, at every lambda
  const auto con = concentration_family(g, [](double x) { return std::exp(-0.5 * x * x); }, {2.0, 4.0, 8.0});
  bool grows = true;
  for (const auto& k : con) {
    double prev = 0.0;
    for (double eps : {0.25, 0.1, 0.05}) {
      const double r = direct_operator_ratio(g, k, eps, 1.0);
      grows = grows && r > prev;
      prev = r;
    }
  }
  o.pass = scan_ok && mod_ok && grows;
  o.detail << "sup I " << s0.sup << " at (" << s0.eta_at_sup << ", " << s0.xi_at_sup << "), doubling change " << rel
           << " (<= 1e-3), modulation max/min " << mod.max / mod.min << " (<= 2), concentration grows as eps -> 0: "
           << (grows ? "yes" : "no");
}

void c10(Outcome& o) {
  const std::vector<double> d{1e-2, 1e-3, 1e-4, 1e-5};
  CollapseProbe p;
  p.epsilon = 0.0;
  const auto z = optimality_scan(p, OptimalityMode::epsilon_zero, d);
  p.epsilon = 0.25;
  const auto t = optimality_scan(p, OptimalityMode::T_infinite, d);
  const auto c = optimality_scan(p, OptimalityMode::control, d);
  bool dec = true;
  for (std::size_t i = 1; i < c.local_slopes.size(); ++i) dec = dec && c.local_slopes[i] < c.local_slopes[i - 1];
  const double floor = 0.01 * std::min(z.slope, t.slope);
  o.pass = z.slope > 0.0 && z.r2 >= 0.99 && t.slope > 0.0 && t.r2 >= 0.99 && dec && c.local_slopes.back() <= floor;
  o.detail << "eps=0 slope " << z.slope << " R2 " << z.r2 << ", T=inf slope " << t.slope << " R2 " << t.r2
           << ", control local slopes";
  for (double s : c.local_slopes) o.detail << " " << s;
  o.detail << " (decreasing, last <= " << floor << ")";
}

void c11(Outcome& o) {
  const double eps = 0.1;
  double lo = INFINITY, hi = 0.0;
  bool finite = true, majorant = true;
  for (double e : {0.0, 1.0, -1.0, 10.0, -10.0, 1e3, -1e3}) {
    const double F = lemma_F(eps, e);
    finite = finite && std::isfinite(F);
    if (std::abs(e) >= 1.0) majorant = majorant && F <= lemma_F_bound(eps, e) * (1.0 + 1e-9);
    lo = std::min(lo, F);
    hi = std::max(hi, F);
  }
  o.pass = finite && hi / lo <= 5.0;
  o.detail << "F finite: " << (finite ? "yes" : "no") << ", max/min " << hi / lo << " (<= 5), sup/F(0) "
           << hi / lemma_F(eps, 0.0) << ", |e|^(-4 eps) majorant holds: " << (majorant ? "yes" : "no");
}

void c12(Outcome& o) {
  Grid1D g(2.0, 16);
  NBodySystem sys(2, g, PotentialSpec::gaussian_well(1.0, 0.25, 0.5), 1.0);
  SpectralCutoff sc(sys);
  std::mt19937_64 rng(112);
  const TensorState psi = random_symmetric_state(g, 2, 1.0, rng, {6.0, 1.0});
  std::vector<double> lx, ly;
  bool bounds = true;
  for (double kappa : {0.4, 0.2, 0.1, 0.05, 0.025}) {
    const TensorState pk = sc.apply(psi, kappa);
    // 2^k N^k / kappa^k with N = 2
    bounds = bounds && sc.moment(pk, 1) <= 4.0 / kappa && sc.moment(pk, 2) <= 16.0 / (kappa * kappa);
    TensorState d = pk;
    for (std::size_t i = 0; i < d.size(); ++i) d.amp[i] -= psi.amp[i];
    lx.push_back(std::log(kappa));
    ly.push_back(std::log(norm(d)));
  }
  const double slope = fit_line(lx, ly).slope;
  o.pass = bounds && slope >= 0.4;
  o.detail << "energy bounds hold: " << (bounds ? "yes" : "no") << ", distance slope " << slope << " (>= 0.4)";
}

void c13(Outcome& o) {
  Grid1D g(8.0, 1024);
  const TensorState p2 = product_state(g, gaussian_profile(g, 0.0, 1.0), 2);
  std::vector<double> alphas;
  for (double a = 8.0 * g.spacing(); a <= 64.0 * g.spacing() * 1.0001; a *= std::sqrt(2.0)) alphas.push_back(a);
  const auto r = mollifier_delta_test({{1.0, p2}}, Observable{}, gaussian_density, alphas, 0.5);
  o.pass = r.slope >= 0.4;
  o.detail << "alpha exponent " << r.slope << " (>= 0.4)";
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::function<void(Outcome&)>, double>> criteria{
      {1, {c1, 10.0}},  {2, {c2, 30.0}},   {3, {c3, 120.0}}, {4, {c4, 30.0}},  {5, {c5, 60.0}},
      {6, {c6, 120.0}}, {7, {c7, 180.0}},  {8, {c8, 900.0}}, {9, {c9, 300.0}}, {10, {c10, 120.0}},
      {11, {c11, 60.0}}, {12, {c12, 60.0}}, {13, {c13, 60.0}},
  };
  if (argc != 2 || !criteria.count(std::atoi(argv[1]))) {
    std::fprintf(stderr, "usage: acceptance <1..13>\n");
    return 2;
  }
  const int id = std::atoi(argv[1]);
  const auto& [run, budget] = criteria.at(id);
  Outcome o;
  const auto t0 = Clock::now();
  try {
    run(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = o.pass && secs < budget;
  std::string detail = o.detail.str();
  while (detail.size() >= 2 && detail.compare(detail.size() - 2, 2, "; ") == 0) detail.resize(detail.size() - 2);
  std::printf("%s criterion %d: %s; runtime %.1f s (< %.0f s)\n", ok ? "PASS" : "FAIL", id, detail.c_str(),
              secs, budget);
  return ok ? 0 : 1;
}
