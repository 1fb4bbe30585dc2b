#pragma once

#include <functional>
#include <vector>

#include "mfnls/bump.hpp"
#include "mfnls/grid.hpp"

namespace mfnls {

struct CollapseProbe {
  double epsilon = 0.25;
  double T = 1.0;       // time localization of the direct operator test
  int level = 0;        // node-doubling level: every composite panel is split 2^level times
  double u_min = 1e-14;  // inner cutoff of the outer u-integral (analytic correction below)
  double u_max = 1e6;    // outer truncation (analytic tail beyond)
  double tail_tol = 1e-3;  // relative size of the analytic tails above which a result is flagged
};

// H(eta, xi1, u) = ∫ |theta_hat(u w)| <w - eta/u + 2 xi1>^{-2eps} <w - 2u - eta/u + 2 xi1>^{-2eps} dw
double kernel_H(const CollapseProbe& p, double eta, double xi1, double u);
// 1 / (|u| <sigma>^{2eps} <sigma + 2u>^{2eps}), sigma = eta/u - 2 xi1
double kernel_H_envelope(double epsilon, double eta, double xi1, double u);

struct IntegralI {
  double I1 = 0.0;  // |u| < 1
  double I2 = 0.0;  // |u| > 1
  double total = 0.0;
  double tail = 0.0;  // analytic corrections at u_min and u_max
  std::size_t nodes = 0;
  bool converged = false;  // tail below tail_tol relative
};
// I = ∫ <xi1>^{2eps} <xi1 - u>^{-2eps} H(eta, xi1, u) du
IntegralI integral_I(const CollapseProbe& p, double eta, double xi1);

struct IScan {
  std::vector<double> etas, xis;
  std::vector<std::vector<double>> values;  // values[i][j] at (etas[i], xis[j])
  double sup = 0.0;
  double eta_at_sup = 0.0, xi_at_sup = 0.0;
  bool all_converged = true;
};
// (eta, xi1) grid over [-range, range]^2; the xi1 < 0 half is filled by the
// reflection symmetry I(eta, xi1) = I(eta, -xi1).
IScan scan_I(const CollapseProbe& p, double range, double step, int threads = 1);

// F(e) = ∫ du / (|u - e|^{8eps} <u>^{1-4eps}), 0 < eps < 1/8
double lemma_F(double epsilon, double e, int level = 0);
// |e|^{-4eps} ∫ dx / (|x - 1|^{8eps} |x|^{1-4eps}), the scaling majorant for |e| >= 1
double lemma_F_bound(double epsilon, double e, int level = 0);

enum class OptimalityMode {
  epsilon_zero,  // T < inf, eps = 0: ∫_{delta<|u|<1} H du with eps = 0
  T_infinite,    // eps > 0, T = inf: the dual u-integral at (eta, xi1)
  control,       // eps > 0, T < inf: ∫_{delta<|u|<1} <xi1>^{2eps}<xi1-u>^{-2eps} H du
};

struct OptimalityResult {
  std::vector<double> deltas, values;
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  std::vector<double> local_slopes;  // between consecutive deltas
};
// value(delta) for each cutoff and the linear fit against ln(1/delta)
OptimalityResult optimality_scan(const CollapseProbe& p, OptimalityMode mode, const std::vector<double>& deltas,
                                 double eta = 0.0, double xi1 = 0.0);
// integrand of the T = inf dual integral, times |u|
double dual_weight(double epsilon, double eta, double xi1, double u);

// |F1 ⊗ F2><G1 ⊗ G2| on the grid
struct RankOneKernel {
  CVec F1, F2, G1, G2;
};

struct RatioStats {
  std::vector<double> ratios;
  double max = 0.0, min = 0.0, mean = 0.0;
};

// ||theta(tau/T) R^(1) B_{1,2} U^(2)(tau) phi||_{L^2_tau L^2} / ||R^(2) phi||,
// R = (1 - d^2)^{eps/2} per variable, U(tau) = e^{i tau d^2} ⊗ e^{-i tau d^2'}.
double direct_operator_ratio(const Grid1D& g, const RankOneKernel& k, double epsilon, double T, int level = 0);
RatioStats direct_operator_test(const CollapseProbe& p, const Grid1D& g, const std::vector<RankOneKernel>& ensemble);

// ||R_alpha^(1) B_{1,2} phi|| / ||R_alpha^(2) phi|| at a single time
double trace_bound_ratio(const Grid1D& g, const RankOneKernel& k, double alpha);
RatioStats trace_bound_check(double alpha, const Grid1D& g, const std::vector<RankOneKernel>& ensemble);

// F1 = e^{i lambda y} f, F2 = G1 = G2 = f
std::vector<RankOneKernel> modulation_family(const Grid1D& g, const CVec& f, const std::vector<double>& lambdas);
// F2 = G2 = lambda^{1/2} f(lambda y), F1 = G1 = f; f given as a profile
std::vector<RankOneKernel> concentration_family(const Grid1D& g, const std::function<double(double)>& f,
                                                const std::vector<double>& lambdas);

}  // namespace mfnls
