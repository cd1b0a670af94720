#pragma once

#include <cmath>
#include <queue>
#include <vector>

#include "core/types.hpp"

namespace g2k {

// Gauss-Kronrod 15(7) nodes/weights on [-1,1].
namespace gk {
inline constexpr double kNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};
inline constexpr double kWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};
// Embedded 7-point Gauss weights sit on the odd Kronrod nodes.
inline constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};
}  // namespace gk

inline double value_norm(double v) { return std::abs(v); }
inline double value_norm(const Complex& v) { return std::abs(v); }
inline double value_norm(const CMat& v) { return v.norm(); }

template <class T>
struct QuadResult {
  T value;
  double error = 0.0;
  long evals = 0;
  bool converged = true;
};

namespace detail {

template <class T, class F>
void gk_panel(const F& f, double a, double b, T& kronrod, double& err) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  T gauss = T();
  bool first = true;
  for (int i = 0; i < 15; ++i) {
    T fv = f(c + h * gk::kNodes[i]);
    if (first) {
      kronrod = fv * gk::kWeights[i];
      first = false;
    } else {
      kronrod += fv * gk::kWeights[i];
    }
    if (i % 2 == 1) {
      if (i == 1)
        gauss = fv * gk::kGaussWeights[0];
      else
        gauss += fv * gk::kGaussWeights[i / 2];
    }
  }
  kronrod *= h;
  gauss *= h;
  err = value_norm(static_cast<T>(kronrod - gauss));
  // standard GK error sharpening
  err = std::pow(200.0 * err, 1.5);
  if (!(err > 0.0)) err = 0.0;
  err = std::min(err, value_norm(kronrod) + 1e-300);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b]; T must support +,-,* double and
// value_norm. Splits the worst panel until the summed error estimate
// drops below tol or the eval budget runs out.
template <class T, class F>
QuadResult<T> adaptive_quadrature(const F& f, double a, double b, double tol,
                                  long max_evals = 200000) {
  struct Panel {
    double a, b, err;
    T val;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  std::priority_queue<Panel> panels;
  QuadResult<T> res;
  T v0;
  double e0;
  detail::gk_panel<T>(f, a, b, v0, e0);
  res.evals = 15;
  panels.push({a, b, e0, v0});
  double total_err = e0;
  while (total_err > tol && res.evals + 30 <= max_evals) {
    Panel p = panels.top();
    if (p.err <= tol * 1e-3 / (panels.size() + 1.0)) break;
    panels.pop();
    const double m = 0.5 * (p.a + p.b);
    T vl, vr;
    double el, er;
    detail::gk_panel<T>(f, p.a, m, vl, el);
    detail::gk_panel<T>(f, m, p.b, vr, er);
    res.evals += 30;
    total_err += el + er - p.err;
    panels.push({p.a, m, el, vl});
    panels.push({m, p.b, er, vr});
    if (p.b - p.a < 1e-14 * (std::abs(a) + std::abs(b) + 1.0)) break;
  }
  bool first = true;
  double err_sum = 0.0;
  while (!panels.empty()) {
    const Panel& p = panels.top();
    if (first) {
      res.value = p.val;
      first = false;
    } else {
      res.value += p.val;
    }
    err_sum += p.err;
    panels.pop();
  }
  res.error = err_sum;
  res.converged = err_sum <= tol;
  return res;
}

}  // namespace g2k
