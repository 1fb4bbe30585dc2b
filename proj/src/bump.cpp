#include "mfnls/bump.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mfnls/errors.hpp"

namespace mfnls {

namespace {

template <int P>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, P>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  GaussRule r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w[i]);
    } else {
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
    }
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  static const GaussRule r6 = make_rule<6>(), r8 = make_rule<8>(), r10 = make_rule<10>(), r16 = make_rule<16>(),
                         r20 = make_rule<20>();
  switch (order) {
    case 6: return r6;
    case 8: return r8;
    case 10: return r10;
    case 16: return r16;
    case 20: return r20;
  }
  throw DomainError("unsupported Gauss-Legendre order");
}

struct Bump::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> s;
};

double Bump::theta(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

Bump::Bump() {
  // samples at spacing dt over a period P give theta_hat at xi_m = 2 pi m / P;
  // the trapezoid rule is spectrally accurate for a compactly supported C^inf bump
  const std::size_t M = std::size_t(1) << 19;
  const double dt = 1.0 / 1024.0;
  const double P = double(M) * dt;
  auto* buf = fftw_alloc_complex(M);
  for (std::size_t j = 0; j < M; ++j) {
    const long jj = j < M / 2 ? long(j) : long(j) - long(M);
    buf[j][0] = theta(double(jj) * dt) * dt;
    buf[j][1] = 0.0;
  }
  fftw_plan p = fftw_plan_dft_1d(int(M), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(p);
  step_ = 2.0 * std::numbers::pi / P;
  const double xi_table = 1500.0;
  const std::size_t count = std::size_t(xi_table / step_) + 1;
  std::vector<double> vals(count);
  for (std::size_t m = 0; m < count; ++m) vals[m] = buf[m][0];
  fftw_destroy_plan(p);
  fftw_free(buf);

  // truncate where |theta_hat| stays below 1e-14 theta_hat(0) for the rest of the table
  const double floor = 1e-14 * vals[0];
  std::size_t last = 0;
  for (std::size_t m = 0; m < count; ++m)
    if (std::abs(vals[m]) > floor) last = m;
  cutoff_ = double(last) * step_;

  spline_ = std::make_unique<Spline>(Spline{{vals.begin(), vals.end(), 0.0, step_}});
  table_ = std::move(vals);
  const auto& vals_ref = table_;

  // zeros from sign changes, refined by bisection on the spline
  for (std::size_t m = 0; m + 1 <= last; ++m) {
    if ((vals_ref[m] > 0) == (vals_ref[m + 1] > 0)) continue;
    double a = double(m) * step_, b = double(m + 1) * step_;
    double fa = vals_ref[m];
    for (int it = 0; it < 60; ++it) {
      const double c = 0.5 * (a + b);
      const double fc = spline_->s(c);
      if ((fc > 0) == (fa > 0)) {
        a = c;
        fa = fc;
      } else {
        b = c;
      }
    }
    zeros_.push_back(0.5 * (a + b));
  }

  // ∫|theta_hat| between consecutive zeros with a 20-point rule
  const auto& g = gauss_rule(20);
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), zeros_.begin(), zeros_.end());
  edges.push_back(cutoff_);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    for (std::size_t q = 0; q < g.x.size(); ++q)
      acc += 0.5 * (hi - lo) * g.w[q] * std::abs(spline_->s(0.5 * (lo + hi) + 0.5 * (hi - lo) * g.x[q]));
  }
  l1_ = 2.0 * acc;
}

Bump::~Bump() = default;

const Bump& Bump::standard() {
  static const Bump b;
  return b;
}

double Bump::truncation(double rel) const {
  const double floor = rel * table_[0];
  std::size_t last = 0;
  for (std::size_t m = 0; m < table_.size(); ++m)
    if (std::abs(table_[m]) > floor) last = m;
  return double(last) * step_;
}

double Bump::hat(double xi) const {
  const double a = std::abs(xi);
  if (a > cutoff_) return 0.0;
  return spline_->s(a);
}

}  // namespace mfnls
