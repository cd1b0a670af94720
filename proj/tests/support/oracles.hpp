#pragma once

// Test-side oracles, independent of the library implementation paths they
// check.

#include <functional>
#include <random>

#include "core/types.hpp"

namespace g2k::testing {

// rotation semigroup for A = [[0,-1],[1,0]]: e^{-tA}
inline CMat rotation_semigroup(double t) {
  CMat m(2, 2);
  m << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return m;
}

// e^{-tA} for the Jordan block A = [[a,1],[0,a]]
inline CMat jordan_semigroup(double a, double t) {
  CMat m(2, 2);
  m << 1.0, -t, 0.0, 1.0;
  return std::exp(-a * t) * m;
}

// dense-sampling + golden-section maximizer of a scalar function
double maximize_1d(const std::function<double(double)>& f, double lo,
                   double hi, int samples = 4000);

// lower bound on gamma2 via the trace-norm characterization
// max_{a,b simplex} || diag(sqrt a) M diag(sqrt b) ||_tr, sampled randomly
// and polished by mirror ascent. Always a valid lower bound.
double gamma2_trace_lower_bound(const CMat& m, int trials = 64,
                                unsigned long seed = 99);

// brute adaptive Simpson for complex integrands on a finite interval
Complex simpson_integral(const std::function<Complex(double)>& f, double a,
                         double b, int panels = 20000);

}  // namespace g2k::testing
