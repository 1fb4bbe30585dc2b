#pragma once

#include <string>

#include "mfnls/grid.hpp"

namespace mfnls {

enum class PotentialShape { zero, gaussian_well, mixed_sign };

// gaussian_well: V(x) = -a exp(-x^2/s^2)
// mixed_sign:    V(x) = a (r - x^2/s^2) exp(-x^2/s^2), integral a s sqrt(pi) (r - 1/2), so r <= 1/2
struct PotentialSpec {
  PotentialShape shape = PotentialShape::gaussian_well;
  double a = 1.0;
  double s = 1.0;
  double r = 0.5;
  double beta = 0.5;

  static PotentialSpec gaussian_well(double a, double s, double beta);
  static PotentialSpec mixed_sign(double a, double s, double r, double beta);
  static PotentialSpec none(double beta = 0.5);

  double operator()(double x) const;
  double derivative(double x) const;
  std::string id() const;  // e.g. "gaussian_well(a=1,s=1)"
};

struct InteractionConstants {
  double integral = 0.0;  // signed ∫V
  double b0 = 0.0;        // |∫V|
  double alpha = 0.0;     // (∫|V|)^2
  double l1 = 0.0;        // ∫|V|
};

// N^beta V(N^beta x)
double scaled_potential(const PotentialSpec& spec, int N, double x);
// g(tau) = (1 + omega^2 tau^2)^(-1/2)
double lens_damping(double omega, double tau);
// N^beta g V(N^beta g y)
double lens_damped_potential(const PotentialSpec& spec, int N, double omega, double tau, double y);

InteractionConstants constants(const PotentialSpec& spec);

// ∫ f over [-X, X] by composite Gauss-Legendre with breakpoints; used for
// the constants and by tests comparing quadratures of V_N.
double integrate_profile(const PotentialSpec& spec, double scale, bool absolute);

// Minimum-image separation of two grid points, wrapped into [-L, L).
double pair_separation(const Grid1D& g, std::size_t i, std::size_t j);
// Same for an index offset d = (i - j) mod n.
double pair_separation_index(const Grid1D& g, std::size_t d);

// Throws ConfigError when V_N is not negligible at the box edge or not even on the grid.
void validate_on_grid(const PotentialSpec& spec, int N, const Grid1D& g);

}  // namespace mfnls
