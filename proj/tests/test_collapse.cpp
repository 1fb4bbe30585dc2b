#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "mfnls/collapse.hpp"
#include "mfnls/errors.hpp"

using namespace mfnls;

// Frozen oracles. theta_hat values: 30-digit quadrature of the bump;
// ||theta_hat||_1: lobe-by-lobe sum with the lobe integrals in closed form,
// ∫_a^b theta_hat = 2 ∫ theta(t) (sin bt - sin at) / t dt, up to xi = 800.
// F and J: log-substituted 30-digit quadrature, cross-checked by an
// algebraic-weight adaptive rule.
namespace {
const double kHat0 = 1.20690032243787617533;
const double kHat3 = 0.537956217979884632327;
const double kFirstZero = 4.99654397651765456940;
const double kHatL1 = 7.719684803384864;

struct FCase {
  double eps, e, F;
};
const FCase kF[] = {
    {0.1, 0.0, 14.5993714927648299},    {0.1, 1.0, 13.0468880228555232},    {0.1, -1.0, 13.0468880228555232},
    {0.1, 10.0, 6.56965895103444303},   {0.1, -10.0, 6.56965895103444303},  {0.1, 1000.0, 1.11583065440184408},
    {0.1, 30.0, 4.364831481630},        {0.1, 100.0, 2.750649384402},       {0.1, 300.0, 1.792380925903},
    {0.12, 0.0, 53.8066323275459749},   {0.12, 1.0, 45.8471747517828955},   {0.12, 10.0, 18.299890428943472},
    {0.12, 1000.0, 2.03872163495290575},
};
}  // namespace

TEST_CASE("bump transform") {
  const Bump& b = Bump::standard();
  CHECK(Bump::theta(0.0) == doctest::Approx(1.0));
  CHECK(Bump::theta(1.0) == 0.0);
  CHECK(b.hat(0.0) == doctest::Approx(kHat0).epsilon(1e-10));
  CHECK(b.hat(3.0) == doctest::Approx(kHat3).epsilon(1e-9));
  CHECK(b.hat(-3.0) == doctest::Approx(b.hat(3.0)));
  CHECK(b.zeros().front() == doctest::Approx(kFirstZero).epsilon(1e-8));
  CHECK(b.hat_l1() == doctest::Approx(kHatL1).epsilon(1e-9));
  CHECK(b.hat(b.cutoff() + 1.0) == 0.0);
  CHECK(b.truncation(1e-9) < b.cutoff());
}

TEST_CASE("Gauss-Legendre rules") {
  for (int order : {6, 8, 10, 16, 20}) {
    const GaussRule& r = gauss_rule(order);
    double w = 0.0, m = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      w += r.w[i];
      m += r.w[i] * std::pow(r.x[i], 2 * order - 2);
    }
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m == doctest::Approx(2.0 / double(2 * order - 1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_rule(7), DomainError);
}

TEST_CASE("lemma F against frozen quadratures") {
  for (const auto& c : kF) {
    CAPTURE(c.eps);
    CAPTURE(c.e);
    CHECK(lemma_F(c.eps, c.e) == doctest::Approx(c.F).epsilon(1e-8));
  }
  // F(0) = ∫ |u|^{-8 eps} <u>^{-(1 - 4 eps)} du = B(1/2 - 4 eps, 2 eps)
  CHECK(lemma_F(0.1, 0.0) == doctest::Approx(boost::math::beta(0.1, 0.2)).epsilon(1e-9));
  CHECK(lemma_F_bound(0.1, 1.0) == doctest::Approx(17.9023400290515641).epsilon(1e-8));
  CHECK(lemma_F_bound(0.1, 1000.0) == doctest::Approx(1.12956129247118405).epsilon(1e-8));
  CHECK(lemma_F_bound(0.12, 1000.0) == doctest::Approx(2.04211524205950826).epsilon(1e-8));
  CHECK(lemma_F(0.1, 10.0, 1) == doctest::Approx(lemma_F(0.1, 10.0, 0)).epsilon(1e-9));
  CHECK_THROWS_AS(lemma_F(0.2, 0.0), DomainError);
  CHECK_THROWS_AS(lemma_F_bound(0.1, 0.5), DomainError);
}

TEST_CASE("H at eps = 0 is ||theta_hat||_1 / |u|") {
  CollapseProbe p;
  p.epsilon = 0.0;
  for (double u : {1e-6, 0.01, 1.0, 37.0, -2.5})
    for (auto [eta, xi] : {std::pair{0.0, 0.0}, std::pair{20.0, -3.0}, std::pair{-50.0, 50.0}})
      CHECK(kernel_H(p, eta, xi, u) * std::abs(u) == doctest::Approx(kHatL1).epsilon(1e-8));
}

TEST_CASE("H stays below a constant times its envelope") {
  CollapseProbe p;
  for (double u : {1e-4, 0.3, 2.0, 50.0})
    for (auto [eta, xi] : {std::pair{0.0, 0.0}, std::pair{10.0, 3.0}, std::pair{-30.0, 7.0}}) {
      const double r = kernel_H(p, eta, xi, u) / kernel_H_envelope(p.epsilon, eta, xi, u);
      CHECK(r > 0.0);
      CHECK(r < 20.0);
    }
}

TEST_CASE("integral I") {
  CollapseProbe p;
  const IntegralI a = integral_I(p, 0.0, 0.0);
  CHECK(a.converged);
  CHECK(a.total == doctest::Approx(a.I1 + a.I2));
  auto q = p;
  q.level = 1;
  CHECK(integral_I(q, 0.0, 0.0).total == doctest::Approx(a.total).epsilon(1e-8));
  // the xi1 -> -xi1 reflection is exact
  CHECK(integral_I(p, 20.0, -5.0).total == doctest::Approx(integral_I(p, 20.0, 5.0).total).epsilon(1e-8));
  q = p;
  q.epsilon = 0.0;
  CHECK_THROWS_AS(integral_I(q, 0.0, 0.0), DomainError);
}

TEST_CASE("optimality modes") {
  CollapseProbe p;
  const std::vector<double> d{1e-2, 1e-3, 1e-4};
  p.epsilon = 0.0;
  // ∫_{delta<|u|<1} ||theta_hat||_1 / |u| du = 2 ||theta_hat||_1 ln(1/delta)
  const auto z = optimality_scan(p, OptimalityMode::epsilon_zero, d);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(z.values[i] == doctest::Approx(2.0 * kHatL1 * std::log(1.0 / d[i])).epsilon(1e-8));
  p.epsilon = 0.25;
  const auto t = optimality_scan(p, OptimalityMode::T_infinite, d);
  CHECK(t.slope == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(t.r2 > 0.999);
  const auto c = optimality_scan(p, OptimalityMode::control, d);
  CHECK(c.local_slopes.back() < c.local_slopes.front());
  CHECK(c.local_slopes.back() < 0.05);
  CHECK_THROWS_AS(optimality_scan(p, OptimalityMode::control, {1e-2, 1e-3}), DomainError);
}

TEST_CASE("direct operator and trace lemma ratios") {
  Grid1D g(160.0, 8192);
  CVec f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-0.5 * g.x(j) * g.x(j));
  const auto fam = modulation_family(g, f, {4.0, 64.0});
  // regression values of this discretization
  CHECK(direct_operator_ratio(g, fam[0], 0.25, 1.0) == doctest::Approx(0.28328).epsilon(1e-4));
  CHECK(direct_operator_ratio(g, fam[1], 0.25, 1.0) == doctest::Approx(0.34734).epsilon(1e-4));
  const auto con = concentration_family(g, [](double x) { return std::exp(-0.5 * x * x); }, {2.0, 8.0});
  // trace-lemma ratio grows under concentration at alpha = 0.4 and stays bounded at 0.75
  CHECK(trace_bound_ratio(g, con[1], 0.4) > trace_bound_ratio(g, con[0], 0.4));
  CHECK(trace_bound_ratio(g, con[1], 0.75) < 1.0);
}
