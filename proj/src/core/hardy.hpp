#pragma once

#include <vector>

#include "core/weight.hpp"

namespace g2k {

// Analytic polynomial on the unit circle, h(z) = sum_k coeffs[k] z^k.
struct CirclePoly {
  std::vector<Complex> coeffs;

  CirclePoly() = default;
  explicit CirclePoly(std::vector<Complex> c) : coeffs(std::move(c)) {}

  int degree() const;
  bool zero() const { return degree() < 0; }
  Complex eval(Complex z) const;
  CirclePoly times(const CirclePoly& other) const;

  nlohmann::json to_json() const;
  static CirclePoly from_json(const nlohmann::json& j);
};

// ||h||_p on the circle (normalized Haar measure) by dense FFT sampling;
// the error field compares against the half-resolution estimate.
struct CircleNorm {
  double value = 0.0;
  double error = 0.0;
};
CircleNorm circle_norm(const CirclePoly& h, double p, int fft_size = 4096);

struct RieszFactorization {
  CirclePoly h1, h2;
  double residual = 0.0;   // max pointwise |h - h1 h2| on the sampling grid
  int fft_size = 0;
};

// Scalar Riesz factorization h = h1 h2 with ||h1||_2 ||h2||_2 = ||h||_1:
// roots from the companion matrix, inner part a finite Blaschke product,
// outer square root via log sampling on the circle. Roots on the unit
// circle are rejected.
RieszFactorization riesz_factorize_circle(const CirclePoly& h,
                                          int fft_size = 4096);

// [G_p f](t) = f((t-i)/(t+i)) / (pi^{1/p} (t+i)^{2/p}),  p in {1,2}.
Complex conformal_transfer(const CirclePoly& f, int p, double t);

// A Hardy-class function on the line given as the conformal image of a
// circle polynomial.
struct LineHardyFunction {
  CirclePoly base;
  int p = 2;

  Complex eval(double t) const { return conformal_transfer(base, p, t); }
};

// ||f||_p on the line by the tan(theta/2) pullback, sampling the line
// function pointwise (the exact Jacobian makes the substitution lossless).
CircleNorm line_norm(const LineHardyFunction& f, int samples = 4096);

struct SarasonFactorization {
  LineHardyFunction h1, h2;
  double residual = 0.0;  // max pointwise |h - h1 h2| on a line test grid
};

// h = G_1(g) factors as G_2(g1) G_2(g2) with the circle factors from the
// Riesz factorization of g.
SarasonFactorization sarason_factorize_line(const LineHardyFunction& h,
                                            int fft_size = 4096);

// Band-limited approximant family: phi has a fixed smoothstep bump
// transform (1 on [-1,1], supported in [-2,2], C^3), and
// phi_n(t) = n phi(nt) - phi(t/n)/n, so that the transform
// phihat(u/n) - phihat(nu) vanishes identically on [-1/n, 1/n].
class FejerApproximant {
 public:
  explicit FejerApproximant(int n);

  int order() const { return n_; }
  // transform of the base bump
  static double bump_hat(double u);
  // transform of phi_n, exact closed form
  double hat(double u) const;
  // L1 norm of phi_n by inverse-FFT quadrature
  double l1_norm() const;
  // L1 norm of the base bump phi
  static double bump_l1();

 private:
  int n_;
};

struct ApproxError {
  double value = 0.0;      // windowed L1 distance
  double quad_error = 0.0; // resolution-halving estimate
  double window = 0.0;     // t-window half-width used
};

// || phi_n * h_+ - h_+ ||_1 where h_+ is the analytic-signal part of h
// (spectrum restricted to u >= 0), computed in the Fourier domain as the
// windowed L1 norm of the inverse transform of (phihat_n - 1) chi_+ hhat.
ApproxError l1_approx_error(const FejerApproximant& phi_n, const Weight& h);

struct PlancherelResult {
  double ratio = 0.0;        // ||hhat||_2 / (sqrt(2 pi) ||h||_2)
  double numerator_sq = 0.0; // integral |hhat|^2 du
  double denominator_sq = 0.0;
  double quad_error = 0.0;
};

// Frequency-side energy by quadrature with exact subtraction of the
// jump-carrying kernels, against the exact time-side L2 norm.
PlancherelResult plancherel_ratio(const Weight& h);

}  // namespace g2k
