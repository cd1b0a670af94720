#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "core/types.hpp"

#include "json.hpp"

namespace g2k {

// One closed-form piece of a weight:
//   coeff * (t - shift)^power * exp(-decay*(t - shift))   on [shift, end).
// end == +inf means the piece extends to infinity, which requires
// Re(decay) > 0 so the weight stays integrable. Windowed pieces (finite
// end) may have any decay, including 0; indicators are power-0, decay-0
// windows.
struct WeightTerm {
  Complex coeff{0.0, 0.0};
  Complex decay{0.0, 0.0};
  int power = 0;
  double shift = 0.0;
  double end = std::numeric_limits<double>::infinity();

  bool windowed() const { return std::isfinite(end); }
};

// Complex-valued function on [0,inf) built from exponential-polynomial
// pieces. All transforms and norms below are closed-form except where
// noted; no quadrature enters the gamma2* side of any verified bound.
class Weight {
 public:
  Weight() = default;

  static Weight zero() { return Weight(); }
  // coeff * t^power * exp(-decay t), decay with Re > 0
  static Weight expo(Complex coeff, Complex decay, int power = 0,
                     double shift = 0.0);
  // coeff * 1_{[a,b)}
  static Weight indicator(Complex coeff, double a, double b);

  void add_term(const WeightTerm& term);

  bool empty() const { return terms_.empty(); }
  const std::vector<WeightTerm>& terms() const { return terms_; }

  Complex eval(double t) const;

  // Exact L1 norm. Real-valued weights are integrated piecewise between
  // isolated sign changes; genuinely complex-valued weights fall back to
  // adaptive quadrature of |f| with an analytic tail bound (~1e-12).
  double l1_norm() const;

  // Exact: integral of |f|^2 (products of pieces are again closed form).
  double l2_norm_sq() const;

  // Closed-form Laplace transform at z, Re z >= 0. Evaluated term by
  // term via incomplete-gamma forms; no quadrature.
  Complex laplace(Complex z) const;
  // Fourier transform b^(u) = integral b(t) e^{-iut} dt = laplace(iu).
  Complex fourier(double u) const { return laplace(Complex(0.0, u)); }

  // Upper bound on the tail integral of |f| beyond T (triangle inequality
  // over pieces, each tail in closed form).
  double l1_tail_bound(double from) const;

  Weight scaled(Complex s) const;
  Weight plus(const Weight& other) const;
  // b(t) * exp(-eps t), exact in the term representation.
  Weight damped(double eps) const;

  // inf when some piece extends to infinity, else the largest window end.
  double support_end() const;

  // True when the function is real-valued (pieces pair into conjugates).
  bool is_real_function() const;

  // Discontinuity data, used by the Plancherel tail subtraction.
  std::vector<double> breakpoints() const;
  Complex eval_limit(double t, bool from_right) const;
  Complex deriv_limit(double t, bool from_right) const;

  nlohmann::json to_json() const;
  static Weight from_json(const nlohmann::json& j);

 private:
  std::vector<WeightTerm> terms_;
};

// Exact closed-form convolution (c*d)(t) = integral_0^t c(s) d(t-s) ds.
// Result is again a Weight. Distinct decays closer than ~1e-7 apart are
// rejected (the partial-fraction split would lose all precision).
Weight convolve(const Weight& c, const Weight& d);

// Finite sum  Psi = sum_j c_j (x) d_j  of weight pairs.
class TensorWeight {
 public:
  TensorWeight() = default;
  explicit TensorWeight(std::vector<std::pair<Weight, Weight>> pairs);

  const std::vector<std::pair<Weight, Weight>>& pairs() const {
    return pairs_;
  }
  // The associated convolution  b = sum_j c_j * d_j.
  Weight to_weight() const;
  // Psi(s,u) = sum_j c_j(s) d_j(u)
  Complex eval(double s, double u) const;

  TensorWeight scaled(Complex s) const;

  nlohmann::json to_json() const;
  static TensorWeight from_json(const nlohmann::json& j);

 private:
  std::vector<std::pair<Weight, Weight>> pairs_;
};

// integral_0^L u^p exp(-w u) du, closed form (lower incomplete gamma).
// L may be +inf when Re w > 0.
Complex incomplete_power_integral(int power, Complex w, double upper);

}  // namespace g2k
