#include "support/oracles.hpp"

#include <Eigen/SVD>

namespace g2k::testing {

double maximize_1d(const std::function<double(double)>& f, double lo,
                   double hi, int samples) {
  double best_t = lo, best = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double t = lo + (hi - lo) * double(i) / samples;
    const double v = f(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  double a = std::max(lo, best_t - (hi - lo) / samples);
  double b = std::min(hi, best_t + (hi - lo) / samples);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 80; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

double gamma2_trace_lower_bound(const CMat& m, int trials,
                                unsigned long seed) {
  const int n = int(m.rows()), w = int(m.cols());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  auto value = [&](const RVec& a, const RVec& b) {
    CMat scaled = m;
    for (int i = 0; i < n; ++i) scaled.row(i) *= std::sqrt(a(i));
    for (int j = 0; j < w; ++j) scaled.col(j) *= std::sqrt(b(j));
    Eigen::BDCSVD<CMat> svd(scaled);
    return svd.singularValues().sum();
  };
  double best = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    RVec a(n), b(w);
    if (trial == 0) {
      a.setConstant(1.0 / n);
      b.setConstant(1.0 / w);
    } else {
      for (int i = 0; i < n; ++i) a(i) = uni(rng);
      for (int j = 0; j < w; ++j) b(j) = uni(rng);
      a /= a.sum();
      b /= b.sum();
    }
    double cur = value(a, b);
    // entropic mirror ascent with finite-difference gradients
    double eta = 0.4;
    for (int it = 0; it < 160; ++it) {
      RVec ga(n), gb(w);
      const double h = 1e-6;
      for (int i = 0; i < n; ++i) {
        RVec ap = a;
        ap(i) += h;
        ga(i) = (value(ap, b) - cur) / h;
      }
      for (int j = 0; j < w; ++j) {
        RVec bp = b;
        bp(j) += h;
        gb(j) = (value(a, bp) - cur) / h;
      }
      RVec an = (a.array() * (eta * ga.array()).exp()).matrix();
      RVec bn = (b.array() * (eta * gb.array()).exp()).matrix();
      an /= an.sum();
      bn /= bn.sum();
      const double nv = value(an, bn);
      if (nv > cur + 1e-14) {
        a = an;
        b = bn;
        cur = nv;
      } else {
        eta *= 0.5;
        if (eta < 1e-6) break;
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

Complex simpson_integral(const std::function<Complex(double)>& f, double a,
                         double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  Complex acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i)
    acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * (h / 3.0);
}

}  // namespace g2k::testing
