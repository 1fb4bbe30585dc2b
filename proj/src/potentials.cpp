#include "mfnls/potentials.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "mfnls/errors.hpp"

namespace mfnls {

PotentialSpec PotentialSpec::gaussian_well(double a, double s, double beta) {
  if (!(a > 0.0) || !(s > 0.0)) throw ConfigError("gaussian_well needs a > 0 and s > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
  return {PotentialShape::gaussian_well, a, s, 0.0, beta};
}

PotentialSpec PotentialSpec::mixed_sign(double a, double s, double r, double beta) {
  if (!(a > 0.0) || !(s > 0.0)) throw ConfigError("mixed_sign needs a > 0 and s > 0");
  if (r > 0.5) throw ConfigError("mixed_sign needs r <= 1/2 so that the integral is nonpositive");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
  return {PotentialShape::mixed_sign, a, s, r, beta};
}

PotentialSpec PotentialSpec::none(double beta) { return {PotentialShape::zero, 0.0, 1.0, 0.0, beta}; }

double PotentialSpec::operator()(double x) const {
  const double q = x / s;
  switch (shape) {
    case PotentialShape::zero: return 0.0;
    case PotentialShape::gaussian_well: return -a * std::exp(-q * q);
    case PotentialShape::mixed_sign: return a * (r - q * q) * std::exp(-q * q);
  }
  return 0.0;
}

double PotentialSpec::derivative(double x) const {
  const double q = x / s;
  const double e = std::exp(-q * q);
  switch (shape) {
    case PotentialShape::zero: return 0.0;
    case PotentialShape::gaussian_well: return 2.0 * a * q * e / s;
    case PotentialShape::mixed_sign: return a * e * (-2.0 * q - 2.0 * q * (r - q * q)) / s;
  }
  return 0.0;
}

std::string PotentialSpec::id() const {
  std::ostringstream os;
  switch (shape) {
    case PotentialShape::zero: os << "zero"; break;
    case PotentialShape::gaussian_well: os << "gaussian_well(a=" << a << ",s=" << s << ")"; break;
    case PotentialShape::mixed_sign: os << "mixed_sign(a=" << a << ",s=" << s << ",r=" << r << ")"; break;
  }
  os << ",beta=" << beta;
  return os.str();
}

double scaled_potential(const PotentialSpec& spec, int N, double x) {
  if (N < 1) throw DomainError("N must be >= 1");
  const double c = std::pow(double(N), spec.beta);
  return c * spec(c * x);
}

double lens_damping(double omega, double tau) { return 1.0 / std::sqrt(1.0 + omega * omega * tau * tau); }

double lens_damped_potential(const PotentialSpec& spec, int N, double omega, double tau, double y) {
  const double c = std::pow(double(N), spec.beta) * lens_damping(omega, tau);
  return c * spec(c * y);
}

namespace {

double composite(const PotentialSpec& spec, double scale, bool absolute, int panels_per_width) {
  using boost::math::quadrature::gauss;
  const double w = spec.s / scale;
  const double X = 40.0 * w;
  std::vector<double> brk{-X, X};
  if (spec.shape == PotentialShape::mixed_sign && spec.r > 0.0) {
    brk.push_back(-w * std::sqrt(spec.r));
    brk.push_back(w * std::sqrt(spec.r));
  }
  brk.push_back(0.0);
  std::sort(brk.begin(), brk.end());
  auto f = [&](double x) {
    const double v = scale * spec(scale * x);
    return absolute ? std::abs(v) : v;
  };
  double acc = 0.0;
  for (std::size_t b = 0; b + 1 < brk.size(); ++b) {
    const double lo = brk[b], hi = brk[b + 1];
    const int np = std::max(1, int(std::ceil((hi - lo) / w * panels_per_width)));
    const double dh = (hi - lo) / np;
    for (int p = 0; p < np; ++p) acc += gauss<double, 20>::integrate(f, lo + p * dh, lo + (p + 1) * dh);
  }
  return acc;
}

}  // namespace

double integrate_profile(const PotentialSpec& spec, double scale, bool absolute) {
  if (spec.shape == PotentialShape::zero) return 0.0;
  const double v1 = composite(spec, scale, absolute, 2);
  const double v2 = composite(spec, scale, absolute, 4);
  if (std::abs(v1 - v2) > 1e-10 * std::max(1.0, std::abs(v2)))
    throw ConfigError("potential quadrature did not converge");
  return v2;
}

InteractionConstants constants(const PotentialSpec& spec) {
  InteractionConstants c;
  c.integral = integrate_profile(spec, 1.0, false);
  c.l1 = integrate_profile(spec, 1.0, true);
  c.b0 = std::abs(c.integral);
  c.alpha = c.l1 * c.l1;
  return c;
}

double pair_separation(const Grid1D& g, std::size_t i, std::size_t j) {
  const double L = g.half_length();
  double d = g.x(i) - g.x(j);
  if (d >= L) d -= 2.0 * L;
  if (d < -L) d += 2.0 * L;
  return d;
}

double pair_separation_index(const Grid1D& g, std::size_t d) {
  const double L = g.half_length();
  double v = double(d % g.size()) * g.spacing();
  if (v >= L) v -= 2.0 * L;
  return v;
}

void validate_on_grid(const PotentialSpec& spec, int N, const Grid1D& g) {
  const double L = g.half_length();
  const double c = std::pow(double(N), spec.beta);
  if (std::abs(c * spec(c * L)) > 1e-12 || std::abs(c * c * spec.derivative(c * L)) > 1e-12)
    throw ConfigError("scaled potential is not negligible at the box edge: " + spec.id());
  for (std::size_t j = 0; j < g.size(); ++j)
    if (spec(g.x(j)) != spec(-g.x(j))) throw ConfigError("potential is not even on the grid");
}

}  // namespace mfnls
