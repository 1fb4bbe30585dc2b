#pragma once

#include <cmath>
#include <memory>
#include <vector>

namespace mfnls {

// theta(t) = exp(1 - 1/(1 - t^2)) on (-1, 1), zero outside, with its Fourier
// transform theta_hat(xi) = ∫ theta(t) e^{-i xi t} dt tabulated once by a
// fine-grid transform and evaluated through a cubic B-spline.
class Bump {
 public:
  static const Bump& standard();

  static double theta(double t);
  double hat(double xi) const;       // real and even; 0 beyond cutoff()
  double abs_hat(double xi) const { return std::abs(hat(xi)); }
  double cutoff() const { return cutoff_; }
  double hat_l1() const { return l1_; }  // ∫ |theta_hat|
  // positive zeros of theta_hat below cutoff(), ascending
  const std::vector<double>& zeros() const { return zeros_; }
  double table_step() const { return step_; }
  // last tabulated frequency with |theta_hat| above rel * theta_hat(0)
  double truncation(double rel) const;

  Bump();
  ~Bump();

 private:
  struct Spline;
  std::unique_ptr<Spline> spline_;
  double step_ = 0.0;
  double cutoff_ = 0.0;
  double l1_ = 0.0;
  std::vector<double> zeros_;
  std::vector<double> table_;
};

// Gauss-Legendre nodes and weights on [-1, 1] for the supported orders.
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_rule(int order);

}  // namespace mfnls
