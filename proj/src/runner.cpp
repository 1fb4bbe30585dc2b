#include "mfnls/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mfnls/collapse.hpp"
#include "mfnls/energy_checks.hpp"
#include "mfnls/errors.hpp"
#include "mfnls/lens.hpp"
#include "mfnls/linalg.hpp"
#include "mfnls/marginals.hpp"
#include "mfnls/nbody.hpp"
#include "mfnls/nls.hpp"

namespace mfnls {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kKinds{
    {ExperimentKind::convergence, "convergence"},       {ExperimentKind::energy_suite, "energy_suite"},
    {ExperimentKind::collapse_suite, "collapse_suite"}, {ExperimentKind::lens_suite, "lens_suite"},
    {ExperimentKind::bbgky_residual, "bbgky_residual"}, {ExperimentKind::nls_validate, "nls_validate"},
};

constexpr std::size_t kMaxStateSize = std::size_t(1) << 22;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Reads one JSON object, remembering which keys were consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json* take(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  double number(const std::string& key, double def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
    return v->get<double>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
      throw ConfigError(field(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_array() || v->empty()) throw ConfigError(field(key) + ": expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) throw ConfigError(field(key) + "[" + std::to_string(i) + "]: expected a number");
      out.push_back((*v)[i].get<double>());
    }
    return out;
  }

  std::vector<int> ints(const std::string& key, std::vector<int> def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_array() || v->empty()) throw ConfigError(field(key) + ": expected a non-empty array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number_integer()) throw ConfigError(field(key) + "[" + std::to_string(i) + "]: expected an integer");
      out.push_back((*v)[i].get<int>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path + ": " + what);
}

std::size_t step_count(double T, double dt, const std::string& path) {
  const double r = T / dt;
  const auto steps = std::size_t(std::llround(r));
  require(steps >= 1 && std::abs(r - double(steps)) <= 1e-9 * r, path, "T must be an integer multiple of dt");
  return steps;
}

void validate(const ExperimentConfig& c) {
  require(c.threads >= 1, "config.threads", "must be >= 1");
  require(c.L > 0.0, "config.grid.L", "must be positive");
  require(c.n >= 4 && (c.n & (c.n - 1)) == 0, "config.grid.n", "must be a power of two >= 4");
  require(c.potential.a > 0.0 && c.potential.s > 0.0, "config.potential", "a and s must be positive");
  require(c.potential.shape != PotentialShape::mixed_sign || c.potential.r <= 0.5, "config.potential.r",
          "must be <= 1/2");
  require(c.potential.beta >= 0.0 && c.potential.beta < 1.0, "config.beta", "must lie in [0, 1)");
  require(c.omega >= 0.0, "config.omega", "must be >= 0");
  require(c.dt > 0.0, "config.dt", "must be positive");
  require(c.T > 0.0, "config.T", "must be positive");

  const bool particles = c.kind == ExperimentKind::convergence || c.kind == ExperimentKind::energy_suite ||
                         c.kind == ExperimentKind::bbgky_residual;
  if (particles) {
    for (std::size_t i = 0; i < c.Ns.size(); ++i) {
      const std::string p = "config.N[" + std::to_string(i) + "]";
      require(c.Ns[i] >= 2 && c.Ns[i] <= 6, p, "must lie in [2, 6]");
      require(ipow(c.n, c.Ns[i]) <= kMaxStateSize, p, "n^N exceeds the desk-scale envelope (2^22 values)");
      try {
        validate_on_grid(c.potential, c.Ns[i], Grid1D(c.L, c.n));
      } catch (const std::exception& e) {
        throw ConfigError("config.potential: " + std::string(e.what()) + " at N = " + std::to_string(c.Ns[i]));
      }
    }
  }
  if (c.kind == ExperimentKind::convergence) {
    const std::size_t steps = step_count(c.T, c.dt, "config.T");
    require(c.outputs >= 1 && steps % c.outputs == 0, "config.outputs", "must divide the number of steps");
    require(std::is_sorted(c.Ns.begin(), c.Ns.end()) &&
                std::adjacent_find(c.Ns.begin(), c.Ns.end()) == c.Ns.end(),
            "config.N", "must be strictly increasing");
  }
  if (c.kind == ExperimentKind::energy_suite) {
    require(c.pair_n >= 4 && (c.pair_n & (c.pair_n - 1)) == 0 && c.pair_n <= 64, "config.pair_n",
            "must be a power of two in [4, 64]");
    require(c.draws >= 1, "config.draws", "must be >= 1");
    require(c.kappas.size() >= 3, "config.kappa", "needs at least three values");
    for (std::size_t i = 0; i < c.kappas.size(); ++i)
      require(c.kappas[i] > 0.0 && (i == 0 || c.kappas[i] < c.kappas[i - 1]),
              "config.kappa[" + std::to_string(i) + "]", "must be positive and decreasing");
  }
  if (c.kind == ExperimentKind::collapse_suite) {
    for (std::size_t i = 0; i < c.epsilons.size(); ++i)
      require(c.epsilons[i] >= 0.0 && c.epsilons[i] < 0.5, "config.epsilon[" + std::to_string(i) + "]",
              "must lie in [0, 1/2)");
    require(c.scan_range > 0.0 && c.scan_step > 0.0, "config.scan", "range and step must be positive");
    const double cells = 2.0 * c.scan_range / c.scan_step;
    require(std::abs(cells - std::round(cells)) < 1e-9 * cells, "config.scan.step", "must divide 2 * range");
    require(c.deltas.size() >= 3, "config.deltas", "needs at least three values");
    for (std::size_t i = 0; i < c.deltas.size(); ++i)
      require(c.deltas[i] > 1e-11 && c.deltas[i] < 1.0 && (i == 0 || c.deltas[i] < c.deltas[i - 1]),
              "config.deltas[" + std::to_string(i) + "]", "must lie in (1e-11, 1) and decrease");
  }
  if (c.kind == ExperimentKind::lens_suite) {
    require(c.omega > 0.0, "config.omega", "the lens suite needs omega > 0");
    require(std::abs(c.omega * c.T) < 0.5 * std::numbers::pi, "config.T", "omega T must stay below pi/2");
    step_count(c.T, c.dt, "config.T");
  }
  if (c.kind == ExperimentKind::bbgky_residual) {
    require(c.dts.size() >= 2, "config.dts", "needs at least two step sizes");
    for (std::size_t i = 0; i < c.dts.size(); ++i) {
      const std::string p = "config.dts[" + std::to_string(i) + "]";
      require(c.dts[i] > 0.0 && (i == 0 || c.dts[i] < c.dts[i - 1]), p, "must be positive and decreasing");
      require(step_count(c.T, c.dts[i], p) >= 2, p, "needs at least two steps");
    }
  }
  if (c.kind == ExperimentKind::nls_validate) step_count(c.T, c.dt, "config.T");
}

PotentialSpec read_potential(Reader& r, const PotentialSpec& def, double beta) {
  const json* v = r.take("potential");
  PotentialSpec out = def;
  out.beta = beta;
  if (!v) return out;
  Reader p(*v, r.field("potential"));
  const std::string shape = p.string("shape", def.shape == PotentialShape::mixed_sign ? "mixed_sign" : "gaussian_well");
  if (shape == "gaussian_well")
    out = PotentialSpec::gaussian_well(p.number("a", def.a), p.number("s", def.s), beta);
  else if (shape == "mixed_sign")
    out = PotentialSpec::mixed_sign(p.number("a", def.a), p.number("s", def.s), p.number("r", 0.25), beta);
  else
    throw ConfigError(p.field("shape") + ": expected gaussian_well or mixed_sign");
  p.finish();
  return out;
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& f) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto work = [&] {
    for (std::size_t i; (i = next++) < count;) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t extra = std::min<std::size_t>(count, std::size_t(threads)) - (count ? 1 : 0);
    for (std::size_t t = 0; t < extra; ++t) pool.emplace_back(work);
    work();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// independent stream per cell, reproducible for any thread count
std::mt19937_64 cell_rng(std::uint64_t seed, std::uint64_t cell) {
  std::seed_seq s{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(cell), std::uint32_t(cell >> 32)};
  return std::mt19937_64(s);
}

CheckResult upper(std::string name, double value, double bound, std::string note = {}) {
  return {std::move(name), true, std::isfinite(value) && value <= bound, value, bound, std::move(note)};
}

CheckResult lower(std::string name, double value, double bound, std::string note = {}) {
  return {std::move(name), true, std::isfinite(value) && value >= bound, value, bound, std::move(note)};
}

CheckResult info(std::string name, double value, std::string note = {}) {
  return {std::move(name), false, true, value, 0.0, std::move(note)};
}

// ---- energy suite ----

void energy_suite(const ExperimentConfig& c, Report& rep) {
  const Grid1D g(c.L, c.n);
  const Grid1D pair(c.L, c.pair_n);
  struct Cell {
    double defect = 0.0, k1 = 0.0, k2 = 0.0;
  };
  std::vector<Cell> cells(c.Ns.size());
  parallel_for(c.Ns.size(), c.threads, [&](std::size_t i) {
    const int N = c.Ns[i];
    NBodySystem sys(N, g, c.potential, c.omega);
    auto rng = cell_rng(c.seed, i);
    auto psi = random_symmetric_state(g, N, c.omega, rng);
    cells[i].defect = check_decomposition_identity(sys, psi);
    double k1 = INFINITY, k2 = INFINITY;
    for (std::size_t d = 0; d < c.draws; ++d) {
      psi = random_symmetric_state(g, N, c.omega, rng);
      k1 = std::min(k1, check_energy_estimate(sys, psi, 1).margin);
      k2 = std::min(k2, check_energy_estimate(sys, psi, 2).margin);
    }
    cells[i].k1 = k1;
    cells[i].k2 = k2;
  });
  Table est{"energy_estimate", {"N", "decomposition_defect", "min_margin_k1", "min_margin_k2"}, {}};
  for (std::size_t i = 0; i < c.Ns.size(); ++i) {
    const std::string tag = "[N=" + std::to_string(c.Ns[i]) + "]";
    rep.checks.push_back(upper("decomposition_identity" + tag, cells[i].defect, 1e-10));
    rep.checks.push_back(lower("energy_estimate_k1" + tag, cells[i].k1, -1e-8, "min margin over draws"));
    rep.checks.push_back(info("energy_estimate_k2" + tag, cells[i].k2, "min margin over draws, threshold N unknown"));
    est.rows.push_back({double(c.Ns[i]), cells[i].defect, cells[i].k1, cells[i].k2});
  }
  rep.tables.push_back(std::move(est));

  std::vector<double> omegas{0.0};
  if (c.omega != 0.0) omegas.push_back(c.omega);
  for (int N : c.Ns) {
    for (double w : omegas) {
      const auto r = check_pair_positivity(c.potential, N, w, pair);
      rep.checks.push_back(lower("pair_positivity[N=" + std::to_string(N) + ",omega=" + fmt(w) + "]", r.value, r.bound,
                                 "lambda_min on the two-particle grid"));
    }
    const auto k = check_K_inequality(c.potential, N, pair);
    rep.checks.push_back(lower("K_inequality[N=" + std::to_string(N) + "]", k.value, k.bound));
  }

  std::vector<PotentialSpec> specs{c.potential};
  for (const auto& s : {PotentialSpec::gaussian_well(1.0, 1.0, c.potential.beta),
                        PotentialSpec::mixed_sign(1.0, 1.0, 0.25, c.potential.beta)})
    if (s.id() != c.potential.id()) specs.push_back(s);
  const Grid1D sob(c.L, 64);
  for (const auto& s : specs) {
    const auto r = check_sobolev_operator_bound(s, sob);
    rep.checks.push_back(upper("sobolev_operator_bound[" + s.id() + "]", r.value, r.bound, "sigma_max against ||V||_1"));
  }

  // Spectral cutoff on a small dense two-particle problem.
  const Grid1D cg(2.0, 16);
  NBodySystem sys(2, cg, PotentialSpec::gaussian_well(1.0, 0.25, c.potential.beta), 1.0);
  SpectralCutoff sc(sys);
  auto rng = cell_rng(c.seed, c.Ns.size());
  const TensorState psi = random_symmetric_state(cg, 2, 1.0, rng, {6.0, 1.0});
  Table cut{"spectral_cutoff", {"kappa", "moment1", "bound1", "moment2", "bound2", "distance"}, {}};
  std::vector<double> lx, ly;
  double worst = -INFINITY;
  for (double kappa : c.kappas) {
    const TensorState pk = sc.apply(psi, kappa);
    TensorState d = pk;
    for (std::size_t i = 0; i < d.size(); ++i) d.amp[i] -= psi.amp[i];
    const double m1 = sc.moment(pk, 1), m2 = sc.moment(pk, 2);
    const double b1 = 2.0 * 2.0 / kappa, b2 = std::pow(2.0 * 2.0 / kappa, 2);
    worst = std::max({worst, m1 / b1, m2 / b2});
    const double dist = norm(d);
    cut.rows.push_back({kappa, m1, b1, m2, b2, dist});
    lx.push_back(std::log(kappa));
    ly.push_back(std::log(dist));
  }
  rep.checks.push_back(upper("cutoff_energy_bound", worst, 1.0, "max of <H^k>/(2N/kappa)^k over kappa, k = 1, 2"));
  rep.checks.push_back(lower("cutoff_distance_slope", fit_line(lx, ly).slope, 0.4, "log-log slope, target 1/2"));
  rep.tables.push_back(std::move(cut));
}

// ---- collapse suite ----

void collapse_suite(const ExperimentConfig& c, Report& rep) {
  const bool modes = std::find(c.epsilons.begin(), c.epsilons.end(), 0.0) != c.epsilons.end();
  double eps_inf = 0.25;
  for (double e : c.epsilons)
    if (e > 0.0) {
      eps_inf = e;
      break;
    }
  double mode_min = INFINITY;
  if (modes) {
    Table t{"optimality_modes", {"delta", "epsilon_zero", "T_infinite"}, {}};
    CollapseProbe p;
    p.epsilon = 0.0;
    const auto z = optimality_scan(p, OptimalityMode::epsilon_zero, c.deltas);
    p.epsilon = eps_inf;
    const auto inf = optimality_scan(p, OptimalityMode::T_infinite, c.deltas);
    for (std::size_t i = 0; i < c.deltas.size(); ++i) t.rows.push_back({c.deltas[i], z.values[i], inf.values[i]});
    for (auto [name, r] : {std::pair{"optimality[epsilon=0]", &z}, std::pair{"optimality[T=inf]", &inf}}) {
      const bool ok = r->slope > 0.0 && r->r2 >= 0.99;
      rep.checks.push_back({name, true, ok, r->slope, 0.0,
                            (ok ? "optimality confirmed, " : "no divergence, ") + std::string("R^2 = ") + fmt(r->r2)});
    }
    mode_min = std::min(z.slope, inf.slope);
    rep.tables.push_back(std::move(t));
  }

  for (double eps : c.epsilons) {
    if (eps == 0.0) continue;
    const std::string tag = "[epsilon=" + fmt(eps) + "]";
    CollapseProbe p;
    p.epsilon = eps;
    const IScan s0 = scan_I(p, c.scan_range, c.scan_step, c.threads);
    p.level = 1;
    const IScan s1 = scan_I(p, c.scan_range, c.scan_step, c.threads);
    p.level = 0;
    Table t{"I_scan_eps" + fmt(eps), {"eta", "xi1", "I_level0", "I_level1"}, {}};
    double rel = 0.0;
    for (std::size_t i = 0; i < s0.etas.size(); ++i)
      for (std::size_t j = 0; j < s0.xis.size(); ++j) {
        rel = std::max(rel, std::abs(s1.values[i][j] - s0.values[i][j]) / std::abs(s0.values[i][j]));
        t.rows.push_back({s0.etas[i], s0.xis[j], s0.values[i][j], s1.values[i][j]});
      }
    rep.tables.push_back(std::move(t));
    rep.checks.push_back({"I_sup_finite" + tag, true, std::isfinite(s0.sup) && s0.all_converged && s1.all_converged,
                          s0.sup, 0.0,
                          "at (eta, xi1) = (" + fmt(s0.eta_at_sup) + ", " + fmt(s0.xi_at_sup) + ")"});
    rep.checks.push_back(upper("I_node_doubling" + tag, rel, 1e-3, "max relative change over the scan"));

    const Grid1D g(160.0, 8192);
    CVec f(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-0.5 * g.x(j) * g.x(j));
    const auto fam = modulation_family(g, f, {4.0, 16.0, 64.0});
    const RatioStats st = direct_operator_test(p, g, fam);
    rep.checks.push_back(upper("direct_ratio_variation" + tag, st.max / st.min, 2.0,
                               "max/min over the modulation family, lambda = 4, 16, 64"));

    const auto ctl = optimality_scan(p, OptimalityMode::control, c.deltas);
    bool dec = true;
    for (std::size_t i = 1; i < ctl.local_slopes.size(); ++i) dec = dec && ctl.local_slopes[i] < ctl.local_slopes[i - 1];
    const double last = ctl.local_slopes.back();
    const bool flat = !modes || last <= 0.01 * mode_min;
    rep.checks.push_back({"control_slope" + tag, true, dec && flat, last, modes ? 0.01 * mode_min : 0.0,
                          "last local slope; local slopes must decrease"});

    if (eps < 0.125) {
      const std::vector<double> es{0.0, 1.0, -1.0, 10.0, -10.0, 1e3, -1e3};
      Table ft{"lemma_F_eps" + fmt(eps), {"e", "F", "bound"}, {}};
      double lo = INFINITY, hi = 0.0;
      bool majorant = true;
      for (double e : es) {
        const double F = lemma_F(eps, e);
        const double b = std::abs(e) >= 1.0 ? lemma_F_bound(eps, e) : NAN;
        if (std::abs(e) >= 1.0) majorant = majorant && F <= b * (1.0 + 1e-9);
        lo = std::min(lo, F);
        hi = std::max(hi, F);
        ft.rows.push_back({e, F, b});
      }
      rep.checks.push_back({"lemma_F_majorant" + tag, true, majorant && std::isfinite(hi), hi, 0.0,
                            "F(e) <= |e|^(-4 eps) J for |e| >= 1"});
      rep.checks.push_back(info("lemma_F_spread" + tag, hi / lo, "max/min of F over the sample points"));
      rep.tables.push_back(std::move(ft));
    }
  }
}

// ---- lens suite ----

void lens_suite(const ExperimentConfig& c, Report& rep) {
  const Grid1D g(c.L, c.n);
  const CVec phi = gaussian_profile(g, 0.5, 1.0, 1.0);
  const LensMap id{0.0};
  const LensMap m{c.omega};
  const TensorState u{1, g, phi, 0.0};
  rep.checks.push_back(upper("identity_at_omega_0", max_abs_diff(lens_function(id, u, c.T).state, u), 1e-14));

  const double tau = m.tau_of(c.T);
  const TensorState mu = lens_function(m, u, tau).state;
  rep.checks.push_back(upper("unitarity", std::abs(norm(mu) - norm(u)), 1e-7));
  TensorState back = inverse_lens_function(m, mu, c.T).state;
  rep.checks.push_back(info("round_trip", max_abs_diff(back, u), "inverse lens after lens"));

  auto rng = cell_rng(c.seed, 0);
  const TensorState psi = random_symmetric_state(g, 2, 0.0, rng);
  const MarginalDensity K = partial_trace(psi, 1);
  const MarginalDensity LK = lens_kernel(m, K, tau).kernel;
  rep.checks.push_back(upper("trace_norm_preserved", std::abs(trace_norm(LK) - trace_norm(K)), 1e-7));

  const double good = intertwine_linear_check(m, g, phi, c.T, KineticConvention::half, c.dt);
  const double bad = intertwine_linear_check(m, g, phi, c.T, KineticConvention::full, c.dt);
  rep.checks.push_back(upper("intertwining_half", good, 1e-5, "adopted convention, -1/2 d^2 on the free side"));
  rep.checks.push_back(lower("intertwining_full_control", bad, 1e-1, "wrong convention must fail"));

  Table t{"lens_energy", {"k", "lhs", "rhs", "ratio"}, {}};
  for (int k : {1, 2}) {
    const auto e = intertwine_energy_check(m, psi, tau, k);
    t.rows.push_back({double(k), e.lhs, e.rhs, e.ratio});
  }
  rep.tables.push_back(std::move(t));
}

// ---- bbgky ----

void bbgky_suite(const ExperimentConfig& c, Report& rep) {
  const Grid1D g(c.L, c.n);
  std::vector<std::vector<double>> res(c.Ns.size(), std::vector<double>(c.dts.size()));
  parallel_for(c.Ns.size() * c.dts.size(), c.threads, [&](std::size_t cell) {
    const std::size_t i = cell / c.dts.size(), j = cell % c.dts.size();
    NBodySystem sys(c.Ns[i], g, c.potential, c.omega);
    auto rng = cell_rng(c.seed, i);
    const TensorState psi = random_symmetric_state(g, c.Ns[i], c.omega, rng);
    EvolveOptions o;
    o.record_energy = false;
    const auto tr = evolve(sys, psi, c.dts[j], step_count(c.T, c.dts[j], "config.T"), o);
    res[i][j] = bbgky_residual(sys, tr, 1);
  });
  Table t{"bbgky_residual", {"N", "dt", "residual"}, {}};
  for (std::size_t i = 0; i < c.Ns.size(); ++i)
    for (std::size_t j = 0; j < c.dts.size(); ++j) {
      t.rows.push_back({double(c.Ns[i]), c.dts[j], res[i][j]});
      if (j == 0) continue;
      const double ratio = res[i][j - 1] / res[i][j];
      const double expect = std::pow(c.dts[j - 1] / c.dts[j], 2);
      const std::string name = "order_two_decay[N=" + std::to_string(c.Ns[i]) + ",dt=" + fmt(c.dts[j]) + "]";
      rep.checks.push_back({name, true, ratio >= 0.875 * expect && ratio <= 1.125 * expect, ratio, expect,
                            "residual ratio under dt refinement"});
    }
  rep.tables.push_back(std::move(t));
}

// ---- NLS validation ----

void nls_suite(const ExperimentConfig& c, Report& rep) {
  const Grid1D g(c.L, c.n);
  const double b0 = -constants(c.potential).integral;
  const std::size_t steps = step_count(c.T, c.dt, "config.T");

  if (b0 > 0.0) {
    NLSProblem p;
    p.grid = g;
    p.b0 = b0;
    p.omega = 0.0;
    p.phi0 = soliton(g, b0, 0.0);
    const auto tr = evolve_nls(p, c.dt, steps, steps);
    const CVec ref = soliton(g, b0, c.T);
    CVec d = tr.states.back();
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= ref[j];
    rep.checks.push_back(upper("soliton_error", norm1(g, d), 1e-4, "L2 distance to the exact soliton at T"));
  } else {
    rep.checks.push_back(info("soliton_error", 0.0, "skipped: the potential has no focusing mean field"));
  }

  NLSProblem p;
  p.grid = g;
  p.b0 = b0;
  p.omega = c.omega;
  p.phi0 = gaussian_profile(g, 0.0, 1.0);
  const auto tr = evolve_nls(p, c.dt, steps, 1);
  double dm = 0.0, de = 0.0;
  for (std::size_t i = 0; i < tr.mass.size(); ++i) {
    dm = std::max(dm, std::abs(tr.mass[i] - tr.mass.front()));
    de = std::max(de, std::abs(tr.energy[i] - tr.energy.front()));
  }
  rep.checks.push_back(upper("mass_drift", dm, 1e-10));
  rep.checks.push_back(upper("energy_drift", de, 1e-4));
  rep.checks.push_back(info("equation_residual", nls_residual(p, tr), "central differences, O(dt^2)"));

  // the hierarchy defect works on n^k x n^k kernels, so it runs on a small grid
  NLSProblem q;
  q.grid = Grid1D(8.0, 32);
  q.b0 = b0;
  q.side = NLSSide::lens;
  q.omega = c.omega > 0.0 ? c.omega : 1.0;
  q.phi0 = gaussian_profile(q.grid, 0.0, 1.0);
  const auto lt = evolve_nls(q, 1e-3, 40, 1);
  Table t{"gp_tensor", {"k", "defect"}, {}};
  for (int k : {1, 2}) {
    const double v = gp_tensor_check(q, lt, k);
    t.rows.push_back({double(k), v});
    rep.checks.push_back(info("gp_tensor_defect[k=" + std::to_string(k) + "]", v, "lens-side hierarchy"));
  }
  rep.tables.push_back(std::move(t));
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKinds)
    if (kind == k) return name;
  return "unknown";
}

ExperimentKind kind_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKinds)
    if (name == s) return kind;
  throw ConfigError("config.kind: unknown experiment kind '" + s + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.potential = PotentialSpec::gaussian_well(1.0, 1.0, 0.3);
  switch (kind) {
    case ExperimentKind::convergence:
      break;
    case ExperimentKind::energy_suite:
      c.n = 16;
      c.omega = 1.0;
      c.potential.beta = 0.5;
      break;
    case ExperimentKind::collapse_suite:
      break;
    case ExperimentKind::lens_suite:
      c.n = 64;
      c.omega = 1.0;
      c.T = 0.4;
      c.dt = 2e-4;
      break;
    case ExperimentKind::bbgky_residual:
      c.n = 16;
      c.omega = 1.0;
      c.potential.beta = 0.5;
      c.Ns = {3};
      c.T = 0.1;
      break;
    case ExperimentKind::nls_validate:
      c.L = 16.0;
      c.n = 256;
      c.omega = 1.0;
      c.T = 1.0;
      c.dt = 1e-3;
      break;
  }
  return c;
}

ExperimentConfig parse_config(const json& j, std::optional<ExperimentKind> expected) {
  Reader r(j, "config");
  std::optional<ExperimentKind> kind = expected;
  if (r.has("kind")) {
    const ExperimentKind k = kind_from_string(r.string("kind", ""));
    if (expected && *expected != k)
      throw ConfigError("config.kind: '" + to_string(k) + "' does not match the subcommand '" + to_string(*expected) + "'");
    kind = k;
  } else {
    r.take("kind");
  }
  if (!kind) throw ConfigError("config.kind: missing");
  ExperimentConfig c = default_config(*kind);
  c.seed = r.unsigned_int("seed", c.seed);
  c.threads = int(r.unsigned_int("threads", std::uint64_t(c.threads)));
  if (const json* gj = r.take("grid")) {
    Reader gr(*gj, "config.grid");
    c.L = gr.number("L", c.L);
    c.n = std::size_t(gr.unsigned_int("n", c.n));
    gr.finish();
  }
  const double beta = r.number("beta", c.potential.beta);
  c.potential = read_potential(r, c.potential, beta);
  c.omega = r.number("omega", c.omega);
  c.Ns = r.ints("N", c.Ns);
  c.dt = r.number("dt", c.dt);
  c.T = r.number("T", c.T);
  c.outputs = std::size_t(r.unsigned_int("outputs", c.outputs));
  c.epsilons = r.numbers("epsilon", c.epsilons);
  c.kappas = r.numbers("kappa", c.kappas);
  c.pair_n = std::size_t(r.unsigned_int("pair_n", c.pair_n));
  c.draws = std::size_t(r.unsigned_int("draws", c.draws));
  if (const json* sj = r.take("scan")) {
    Reader sr(*sj, "config.scan");
    c.scan_range = sr.number("range", c.scan_range);
    c.scan_step = sr.number("step", c.scan_step);
    sr.finish();
  }
  c.deltas = r.numbers("deltas", c.deltas);
  c.dts = r.numbers("dts", c.dts);
  r.finish();
  validate(c);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json p{{"shape", c.potential.shape == PotentialShape::mixed_sign ? "mixed_sign" : "gaussian_well"},
         {"a", c.potential.a},
         {"s", c.potential.s}};
  if (c.potential.shape == PotentialShape::mixed_sign) p["r"] = c.potential.r;
  return json{{"kind", to_string(c.kind)},
              {"seed", c.seed},
              {"grid", {{"L", c.L}, {"n", c.n}}},
              {"potential", p},
              {"beta", c.potential.beta},
              {"omega", c.omega},
              {"N", c.Ns},
              {"dt", c.dt},
              {"T", c.T},
              {"outputs", c.outputs},
              {"epsilon", c.epsilons},
              {"kappa", c.kappas},
              {"pair_n", c.pair_n},
              {"draws", c.draws},
              {"scan", {{"range", c.scan_range}, {"step", c.scan_step}}},
              {"deltas", c.deltas},
              {"dts", c.dts}};
}

json config_schema() {
  const json num{{"type", "number"}};
  const json uint{{"type", "integer"}, {"minimum", 0}};
  const json nums{{"type", "array"}, {"items", num}, {"minItems", 1}};
  std::vector<std::string> kinds;
  for (const auto& k : kKinds) kinds.push_back(k.second);
  return json{
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"title", "mfnls experiment configuration"},
      {"type", "object"},
      {"additionalProperties", false},
      {"properties",
       {{"kind", {{"enum", kinds}}},
        {"seed", uint},
        {"threads", {{"type", "integer"}, {"minimum", 1}}},
        {"grid",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties", {{"L", num}, {"n", {{"type", "integer"}, {"minimum", 4}}}}}}},
        {"potential",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties", {{"shape", {{"enum", {"gaussian_well", "mixed_sign"}}}}, {"a", num}, {"s", num}, {"r", num}}}}},
        {"beta", {{"type", "number"}, {"minimum", 0}, {"exclusiveMaximum", 1}}},
        {"omega", {{"type", "number"}, {"minimum", 0}}},
        {"N", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 2}, {"maximum", 6}}}, {"minItems", 1}}},
        {"dt", num},
        {"T", num},
        {"outputs", uint},
        {"epsilon", nums},
        {"kappa", nums},
        {"pair_n", uint},
        {"draws", uint},
        {"scan", {{"type", "object"}, {"additionalProperties", false}, {"properties", {{"range", num}, {"step", num}}}}},
        {"deltas", nums},
        {"dts", nums}}}};
}

json module_versions() {
  return json{{"grid_spectral", "1.0"}, {"potentials", "1.0"},     {"nbody", "1.0"},
              {"marginals", "1.0"},     {"nls", "1.0"},            {"lens", "1.0"},
              {"energy_checks", "1.1"}, {"collapse_checks", "1.0"}, {"cli", "1.0"}};
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.assertable || c.pass; });
}

Report run_convergence(const ExperimentConfig& c) {
  if (c.kind != ExperimentKind::convergence) throw DomainError("run_convergence needs a convergence config");
  Report rep;
  rep.kind = c.kind;
  const Grid1D g(c.L, c.n);
  const std::size_t steps = step_count(c.T, c.dt, "config.T");
  const std::size_t stride = steps / c.outputs;
  const CVec phi = gaussian_profile(g, 0.0, 1.0);
  const double b0 = -constants(c.potential).integral;

  NLSProblem p;
  p.grid = g;
  p.phi0 = phi;
  p.b0 = b0;
  p.omega = c.omega;
  const auto nl = evolve_nls(p, c.dt, steps, stride);
  if (nl.states.size() != c.outputs + 1) throw NumericalAbort("NLS trajectory has an unexpected length");

  // dist[i][k-1][t]
  std::vector<std::array<std::vector<double>, 2>> dist(c.Ns.size());
  parallel_for(c.Ns.size(), c.threads, [&](std::size_t i) {
    NBodySystem sys(c.Ns[i], g, c.potential, c.omega);
    EvolveOptions o;
    o.stride = stride;
    o.record_energy = false;
    const auto tr = evolve(sys, product_state(g, phi, c.Ns[i]), c.dt, steps, o);
    if (tr.states.size() != c.outputs + 1) throw NumericalAbort("N-body trajectory has an unexpected length");
    for (int k : {1, 2})
      for (std::size_t t = 0; t < tr.states.size(); ++t)
        dist[i][k - 1].push_back(chaos_distance(tr.states[t], k, nl.states[t]));
  });

  double t0 = 0.0;
  for (int k : {1, 2}) {
    Table t{"chaos_k" + std::to_string(k), {"t"}, {}};
    for (int N : c.Ns) t.header.push_back("N=" + std::to_string(N));
    for (std::size_t s = 0; s <= c.outputs; ++s) {
      std::vector<double> row{nl.times[s]};
      for (std::size_t i = 0; i < c.Ns.size(); ++i) row.push_back(dist[i][k - 1][s]);
      t.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < c.Ns.size(); ++i) t0 = std::max(t0, dist[i][k - 1].front());
    rep.tables.push_back(std::move(t));
  }
  rep.checks.push_back(upper("factorized_at_t0", t0, 1e-12, "max over N and k = 1, 2"));

  for (int k : {1, 2}) {
    double rise = -INFINITY, lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < c.Ns.size(); ++i) {
      const double d = dist[i][k - 1].back();
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      if (i) rise = std::max(rise, d - dist[i - 1][k - 1].back());
    }
    const std::string tag = "[k=" + std::to_string(k) + ",t=" + fmt(c.T) + "]";
    if (b0 > 0.0 && c.Ns.size() >= 2 && k == 1)
      rep.checks.push_back({"decreasing_in_N" + tag, true, rise < 0.0, rise, 0.0,
                            "largest increase between consecutive N"});
    else if (b0 > 0.0)
      rep.checks.push_back(info("decreasing_in_N" + tag, rise, "largest increase between consecutive N"));
    else
      rep.checks.push_back(info("control_spread" + tag, hi - lo, "b0 = 0: spread of distances across N"));
  }
  return rep;
}

Report run_suite(const ExperimentConfig& c) {
  Report rep;
  rep.kind = c.kind;
  switch (c.kind) {
    case ExperimentKind::convergence:
      return run_convergence(c);
    case ExperimentKind::energy_suite:
      energy_suite(c, rep);
      break;
    case ExperimentKind::collapse_suite:
      collapse_suite(c, rep);
      break;
    case ExperimentKind::lens_suite:
      lens_suite(c, rep);
      break;
    case ExperimentKind::bbgky_residual:
      bbgky_suite(c, rep);
      break;
    case ExperimentKind::nls_validate:
      nls_suite(c, rep);
      break;
  }
  return rep;
}

Report run_experiment(const ExperimentConfig& c) {
  validate(c);
  return c.kind == ExperimentKind::convergence ? run_convergence(c) : run_suite(c);
}

void write_report(const std::filesystem::path& dir, const ExperimentConfig& c, const Report& r) {
  std::filesystem::create_directories(dir);
  const json cfg = config_to_json(c);
  const std::string hash = hex64(config_hash(cfg));
  const ConventionFlags flags;
  const std::vector<std::string> preamble{"kind=" + to_string(c.kind), "config_hash=" + hash,
                                          "conventions=" + flags.to_json().dump(),
                                          "modules=" + module_versions().dump()};
  json checks = json::array();
  for (const auto& ch : r.checks)
    checks.push_back({{"name", ch.name},
                      {"assertable", ch.assertable},
                      {"pass", ch.pass},
                      {"value", ch.value},
                      {"bound", ch.bound},
                      {"note", ch.note}});
  json tables = json::array();
  for (const auto& t : r.tables) {
    const std::string file = t.name + ".csv";
    write_csv(dir / file, t.header, t.rows, preamble);
    tables.push_back(file);
  }
  write_json(dir / "summary.json", json{{"kind", to_string(c.kind)},
                                         {"config", cfg},
                                         {"config_hash", hash},
                                         {"conventions", flags.to_json()},
                                         {"modules", module_versions()},
                                         {"checks", checks},
                                         {"tables", tables},
                                         {"pass", r.pass()}});
}

}  // namespace mfnls
