#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace mfnls {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Periodic grid x_j = -L + j h on [-L, L), h = 2L/n, n a power of two.
// Wavenumbers are stored in FFT order: k = pi m / L for m = 0..n/2-1, -n/2..-1.
class Grid1D {
 public:
  Grid1D(double half_length, std::size_t n);

  double half_length() const { return L_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double x(std::size_t j) const { return x_[j]; }
  double k(std::size_t m) const { return k_[m]; }
  const std::vector<double>& points() const { return x_; }
  const std::vector<double>& wavenumbers() const { return k_; }

  bool operator==(const Grid1D& o) const { return L_ == o.L_ && n_ == o.n_; }

 private:
  double L_;
  std::size_t n_;
  double h_;
  std::vector<double> x_;
  std::vector<double> k_;
};

// N-particle amplitudes on grid^N, row-major (axis 0 slowest).
// Axes are numbered 0..N-1 throughout the library.
struct TensorState {
  int N = 1;
  Grid1D grid{8.0, 64};
  CVec amp;
  double omega = 0.0;

  std::size_t size() const { return amp.size(); }
  double weight() const;  // h^N
};

std::size_t ipow(std::size_t b, int e);

TensorState zero_state(const Grid1D& g, int N, double omega = 0.0);
// phi ⊗ ... ⊗ phi (N factors); phi given as grid samples.
TensorState product_state(const Grid1D& g, const CVec& phi, int N, double omega = 0.0);
// f1 ⊗ f2 ⊗ ...
TensorState tensor_product(const Grid1D& g, const std::vector<CVec>& factors, double omega = 0.0);

cplx inner(const TensorState& a, const TensorState& b);  // <a, b>, weight h^N
double norm(const TensorState& s);
void normalize(TensorState& s);
double max_abs_diff(const TensorState& a, const TensorState& b);

// One-particle helpers (weight h).
double norm1(const Grid1D& g, const CVec& f);
cplx inner1(const Grid1D& g, const CVec& a, const CVec& b);
void normalize1(const Grid1D& g, CVec& f);

enum class Direction { forward, inverse };

// Unnormalized forward DFT along one axis; the inverse carries 1/n, so
// forward followed by inverse is the identity.
void dft_axis_inplace(cplx* data, int N, std::size_t n, int axis, Direction dir);
// All axes at once (inverse scaled by 1/n^N).
void dft_all_inplace(cplx* data, int N, std::size_t n, Direction dir);
TensorState dft_axis(const TensorState& s, int axis, Direction dir);

// Multiply by an even Fourier symbol along one axis: F^-1 diag(sym) F.
void apply_symbol_axis(cplx* data, int N, std::size_t n, int axis, const std::vector<double>& symbol);
CVec apply_symbol(const Grid1D& g, const CVec& f, const std::vector<double>& symbol);

enum class WeightKind { S, L };

// S_j^2 = 1 - d^2/2 + omega^2 x^2 / 2 ; L_j^2 = 1 - d^2
struct SobolevWeight {
  WeightKind kind = WeightKind::S;
  std::vector<int> axes;
};

std::vector<double> weight_symbol(const Grid1D& g, WeightKind kind);
TensorState apply_weight_squared(const TensorState& s, const SobolevWeight& w);
// <psi, prod_j W_j^2 psi>
double weighted_norm_squared(const TensorState& s, const SobolevWeight& w);

// Average over all axis permutations, renormalized. Throws DegenerateInput
// when the symmetric part vanishes.
TensorState symmetrize(const TensorState& s);
TensorState permute_axes(const TensorState& s, const std::vector<int>& perm);
// Max over transpositions of max |psi - psi∘swap|.
double symmetry_residual(const TensorState& s);

struct RandomShape {
  double k_cut = 2.0;   // Gaussian spectral envelope width
  double width = 2.0;   // Gaussian spatial envelope width
};

// Smooth random symmetric normalized state (band-limited noise under a
// spatial envelope).
TensorState random_symmetric_state(const Grid1D& g, int N, double omega, std::mt19937_64& rng,
                                   RandomShape shape = {});

// Sample helpers for common one-particle profiles.
CVec gaussian_profile(const Grid1D& g, double center, double width, double momentum = 0.0);
CVec plane_wave(const Grid1D& g, int m);

}  // namespace mfnls
