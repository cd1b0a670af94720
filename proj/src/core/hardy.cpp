#include "core/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

#include "core/fft.hpp"
#include "core/quadrature.hpp"

namespace g2k {

namespace {

// h(e^{2 pi i k / n}) for k = 0..n-1
std::vector<Complex> sample_circle(const std::vector<Complex>& coeffs,
                                   std::size_t n) {
  std::vector<Complex> data(n, Complex(0, 0));
  for (std::size_t j = 0; j < coeffs.size(); ++j) data[j % n] += coeffs[j];
  fft(data, true);
  for (auto& v : data) v *= double(n);
  return data;
}

std::vector<Complex> coeffs_from_samples(std::vector<Complex> samples) {
  const double n = double(samples.size());
  fft(samples, false);
  for (auto& v : samples) v /= n;
  return samples;
}

void trim(std::vector<Complex>& c) {
  double top = 0.0;
  for (const auto& v : c) top = std::max(top, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * (top + 1e-300))
    c.pop_back();
}

}  // namespace

int CirclePoly::degree() const {
  for (int k = int(coeffs.size()) - 1; k >= 0; --k)
    if (coeffs[k] != Complex(0, 0)) return k;
  return -1;
}

Complex CirclePoly::eval(Complex z) const {
  Complex acc(0, 0);
  for (int k = int(coeffs.size()) - 1; k >= 0; --k) acc = acc * z + coeffs[k];
  return acc;
}

CirclePoly CirclePoly::times(const CirclePoly& other) const {
  if (coeffs.empty() || other.coeffs.empty()) return CirclePoly{};
  std::vector<Complex> out(coeffs.size() + other.coeffs.size() - 1,
                           Complex(0, 0));
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs.size(); ++j)
      out[i + j] += coeffs[i] * other.coeffs[j];
  return CirclePoly(std::move(out));
}

nlohmann::json CirclePoly::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : coeffs) arr.push_back({c.real(), c.imag()});
  return arr;
}

CirclePoly CirclePoly::from_json(const nlohmann::json& j) {
  std::vector<Complex> c;
  for (const auto& e : j) {
    if (e.is_array())
      c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    else
      c.emplace_back(e.get<double>(), 0.0);
  }
  return CirclePoly(std::move(c));
}

CircleNorm circle_norm(const CirclePoly& h, double p, int fft_size) {
  require(p >= 1.0, ErrorCode::InvalidArgument, "p >= 1 required");
  const std::size_t n = next_pow2(std::max<std::size_t>(
      256, std::max<std::size_t>(std::size_t(fft_size),
                                 8 * std::size_t(std::max(h.degree(), 1)))));
  auto estimate = [&](std::size_t m) {
    const auto vals = sample_circle(h.coeffs, m);
    double acc = 0.0;
    for (const auto& v : vals) acc += std::pow(std::abs(v), p);
    return std::pow(acc / double(m), 1.0 / p);
  };
  CircleNorm out;
  out.value = estimate(n);
  out.error = std::abs(out.value - estimate(n / 2));
  return out;
}

RieszFactorization riesz_factorize_circle(const CirclePoly& h, int fft_size) {
  require(!h.zero(), ErrorCode::InvalidArgument,
          "cannot factorize the zero polynomial");
  const int deg = h.degree();
  require(fft_size > 8 * deg, ErrorCode::InvalidArgument,
          "fft size must exceed 8x the polynomial degree");
  const std::size_t n = next_pow2(std::max(fft_size, 256));

  RieszFactorization out;
  out.fft_size = int(n);
  if (deg == 0) {
    const Complex r = std::sqrt(h.coeffs[0]);
    out.h1 = CirclePoly({r});
    out.h2 = CirclePoly({r});
    out.residual = 0.0;
    return out;
  }

  // roots via the companion matrix of the monic normalization
  const Complex lead = h.coeffs[deg];
  CMat comp = CMat::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -h.coeffs[i] / lead;
  Eigen::ComplexEigenSolver<CMat> eig(comp);
  require(eig.info() == Eigen::Success, ErrorCode::NoConvergence,
          "root finding failed");

  std::vector<Complex> inside, outside;
  int monomial = 0;  // roots at the origin, split evenly between factors
  for (int i = 0; i < deg; ++i) {
    const Complex r = eig.eigenvalues()(i);
    require(std::abs(std::abs(r) - 1.0) > 1e-8, ErrorCode::DomainError,
            "root on the unit circle; outer part is singular");
    if (std::abs(r) < 1e-12)
      ++monomial;
    else
      (std::abs(r) < 1.0 ? inside : outside).push_back(r);
  }

  // outer polynomial: lead * prod_in (1 - conj(a) z) * prod_out (z - b)
  CirclePoly outer({lead});
  for (const Complex& a : inside)
    outer = outer.times(CirclePoly({Complex(1, 0), -std::conj(a)}));
  for (const Complex& b : outside)
    outer = outer.times(CirclePoly({-b, Complex(1, 0)}));

  // sqrt of the outer part through a continuous log on the circle
  const auto outer_s = sample_circle(outer.coeffs, n);
  std::vector<Complex> log_s(n);
  double prev_arg = std::arg(outer_s[0]);
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(outer_s[k]);
    require(mag > 0.0, ErrorCode::DomainError, "outer part vanished on grid");
    double ang = std::arg(outer_s[k]);
    while (ang - prev_arg > kPi) ang -= kTwoPi;
    while (ang - prev_arg < -kPi) ang += kTwoPi;
    log_s[k] = Complex(std::log(mag), ang);
    prev_arg = ang;
  }
  {
    // a zero-free outer part has winding number zero around the circle
    double close = std::arg(outer_s[0]);
    while (close - prev_arg > kPi) close -= kTwoPi;
    while (close - prev_arg < -kPi) close += kTwoPi;
    require(std::abs(close - log_s[0].imag()) < 1.0, ErrorCode::NoConvergence,
            "outer log winds; branch tracking failed");
  }
  std::vector<Complex> sqrt_s(n);
  for (std::size_t k = 0; k < n; ++k) sqrt_s[k] = std::exp(0.5 * log_s[k]);

  // Blaschke samples carry the inside zeros; origin roots split evenly
  const int mono1 = (monomial + 1) / 2, mono2 = monomial / 2;
  std::vector<Complex> h1_s(n), h2_s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex z = std::polar(1.0, kTwoPi * double(k) / double(n));
    Complex b(1, 0);
    for (const Complex& a : inside) b *= (z - a) / (Complex(1, 0) - std::conj(a) * z);
    h1_s[k] = b * sqrt_s[k] * std::pow(z, mono1);
    h2_s[k] = sqrt_s[k] * std::pow(z, mono2);
  }

  out.h2 = CirclePoly(coeffs_from_samples(std::move(h2_s)));
  out.h1 = CirclePoly(coeffs_from_samples(std::move(h1_s)));
  trim(out.h1.coeffs);
  trim(out.h2.coeffs);

  // residual on a fresh grid, twice as fine
  const std::size_t m = 2 * n;
  const auto hs = sample_circle(h.coeffs, m);
  const auto f1 = sample_circle(out.h1.coeffs, m);
  const auto f2 = sample_circle(out.h2.coeffs, m);
  double resid = 0.0;
  for (std::size_t k = 0; k < m; ++k)
    resid = std::max(resid, std::abs(hs[k] - f1[k] * f2[k]));
  out.residual = resid;
  return out;
}

Complex conformal_transfer(const CirclePoly& f, int p, double t) {
  require(p == 1 || p == 2, ErrorCode::InvalidArgument, "p must be 1 or 2");
  const Complex ti(t, 1.0);
  const Complex z = Complex(t, -1.0) / ti;
  if (p == 1) return f.eval(z) / (kPi * ti * ti);
  return f.eval(z) / (std::sqrt(kPi) * ti);
}

CircleNorm line_norm(const LineHardyFunction& f, int samples) {
  auto estimate = [&](int m) {
    // t = tan(theta/2): integral |f|^p dt = sum over theta with the exact
    // Jacobian dt = (1 + t^2)/2 dtheta
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
      const double theta = -kPi + kTwoPi * (k + 0.5) / m;
      const double t = std::tan(0.5 * theta);
      const double jac = 0.5 * (1.0 + t * t);
      acc += std::pow(std::abs(f.eval(t)), double(f.p)) * jac;
    }
    return std::pow(acc * kTwoPi / m, 1.0 / double(f.p));
  };
  CircleNorm out;
  out.value = estimate(samples);
  out.error = std::abs(out.value - estimate(samples / 2));
  return out;
}

SarasonFactorization sarason_factorize_line(const LineHardyFunction& h,
                                            int fft_size) {
  require(h.p == 1, ErrorCode::InvalidArgument,
          "line factorization starts from an H1 function");
  const auto circle = riesz_factorize_circle(h.base, fft_size);
  SarasonFactorization out;
  out.h1 = LineHardyFunction{circle.h1, 2};
  out.h2 = LineHardyFunction{circle.h2, 2};
  double resid = 0.0;
  for (int k = -40; k <= 40; ++k) {
    const double t = 0.37 * k;
    resid = std::max(resid,
                     std::abs(h.eval(t) - out.h1.eval(t) * out.h2.eval(t)));
  }
  out.residual = resid;
  return out;
}

// ------------------------------------------------------------------
// Fejer approximants

FejerApproximant::FejerApproximant(int n) : n_(n) {
  require(n >= 1, ErrorCode::InvalidArgument, "approximant order must be >= 1");
}

double FejerApproximant::bump_hat(double u) {
  const double x = std::abs(u);
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double s = x - 1.0;
  const double s4 = s * s * s * s;
  // degree-7 smoothstep, C^3 at both seams
  const double step = s4 * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
  return 1.0 - step;
}

double FejerApproximant::hat(double u) const {
  return bump_hat(u / n_) - bump_hat(n_ * u);
}

namespace {

// L1 norm of the inverse transform of an even real compactly supported
// transform, by FFT quadrature.
double l1_of_hat(const std::function<double(double)>& hat, double support) {
  const double du = 1.0 / 128.0;
  const std::size_t m = std::size_t(std::ceil(support / du)) + 1;
  const std::size_t n = next_pow2(std::max<std::size_t>(4 * m, 1 << 15));
  std::vector<Complex> data(n, Complex(0, 0));
  for (std::size_t j = 0; j < n; ++j) {
    const double u = (j <= n / 2) ? j * du : (double(j) - double(n)) * du;
    if (std::abs(u) <= support) data[j] = hat(u);
  }
  fft(data, true);  // unnormalized inverse is forward * n / n with sign flip
  const double dt = kTwoPi / (double(n) * du);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    acc += std::abs(data[k]) * double(n) * du / kTwoPi * dt;
  return acc;
}

}  // namespace

double FejerApproximant::l1_norm() const {
  if (n_ == 1) return 0.0;  // the construction collapses identically
  return l1_of_hat([this](double u) { return hat(u); }, 2.0 * n_);
}

double FejerApproximant::bump_l1() {
  return l1_of_hat([](double u) { return bump_hat(u); }, 2.0);
}

ApproxError l1_approx_error(const FejerApproximant& phi_n, const Weight& h) {
  ApproxError out;
  if (h.empty()) return out;
  const double du = 1.0 / 256.0;
  const double umax = std::max(4.0 * phi_n.order(), 64.0);
  auto windowed = [&](double step) {
    const std::size_t m = std::size_t(std::ceil(umax / step));
    const std::size_t n = next_pow2(std::max<std::size_t>(2 * m, 1 << 14));
    std::vector<Complex> data(n, Complex(0, 0));
    for (std::size_t j = 0; j < m; ++j) {
      const double u = double(j) * step;
      data[j] = (phi_n.hat(u) - 1.0) * h.fourier(u);
    }
    fft(data, true);
    const double dt = kTwoPi / (double(n) * step);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += std::abs(data[k]) * double(n) * step / kTwoPi * dt;
    return acc;
  };
  out.value = windowed(du);
  out.quad_error = std::abs(out.value - windowed(2.0 * du)) +
                   std::abs(h.fourier(umax));
  out.window = kPi / du;
  return out;
}

// ------------------------------------------------------------------
// Plancherel check with exact jump-kernel subtraction

namespace {

Complex ipow(int k) {
  // i^k
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// J(p,q,delta) = integral e^{-iu delta} / ((1+iu)^p (1-iu)^q) du over R,
// p,q in {1,2}, by residues.
Complex kernel_cross_integral(int p, int q, double delta) {
  if (delta < 0.0) return std::conj(kernel_cross_integral(q, p, -delta));
  // 1+iu = i(u-i), 1-iu = -i(u+i); close the contour below (delta >= 0),
  // pole at u = -i of order q.
  const Complex pref = 1.0 / (ipow(p) * ipow(-q) * std::pow(Complex(0, -2), p));
  const double e = std::exp(-delta);
  Complex res;
  if (q == 1) {
    res = pref * e;
  } else {
    // d/du [ e^{-iu delta} (u-i)^{-p} ] at u = -i
    res = pref * e * (Complex(0, -delta) + double(p) / Complex(0, 2));
  }
  return Complex(0, -kTwoPi) * res;
}

}  // namespace

PlancherelResult plancherel_ratio(const Weight& h) {
  require(!h.empty(), ErrorCode::InvalidArgument, "zero weight");
  PlancherelResult out;
  out.denominator_sq = kTwoPi * h.l2_norm_sq();
  require(out.denominator_sq > 0.0, ErrorCode::InvalidArgument,
          "weight has zero L2 norm");

  // kernels matching the value and slope jumps of h
  struct Kernel {
    double shift;
    Complex a;   // coefficient of e^{-(t-s)}
    Complex c;   // coefficient of (t-s) e^{-(t-s)}
  };
  std::vector<Kernel> kernels;
  double scale = 0.0;
  for (const auto& t : h.terms()) scale = std::max(scale, std::abs(t.coeff));
  for (double bp : h.breakpoints()) {
    const Complex a =
        h.eval_limit(bp, true) - h.eval_limit(bp, false);
    const Complex dj =
        h.deriv_limit(bp, true) - h.deriv_limit(bp, false);
    const Complex c = dj + a;
    if (std::abs(a) < 1e-14 * (scale + 1) && std::abs(c) < 1e-14 * (scale + 1))
      continue;
    kernels.push_back({bp, a, c});
  }

  auto what = [&](double u) {
    Complex acc(0, 0);
    const Complex iu(0, u);
    for (const auto& k : kernels) {
      const Complex ph = std::exp(Complex(0, -u * k.shift));
      acc += ph * (k.a / (1.0 + iu) + k.c / ((1.0 + iu) * (1.0 + iu)));
    }
    return acc;
  };

  // exact part: pairwise kernel crossings by residues
  double exact = 0.0;
  for (const auto& r : kernels) {
    for (const auto& s : kernels) {
      const double d = r.shift - s.shift;
      Complex v = r.a * std::conj(s.a) * kernel_cross_integral(1, 1, d);
      v += r.a * std::conj(s.c) * kernel_cross_integral(1, 2, d);
      v += r.c * std::conj(s.a) * kernel_cross_integral(2, 1, d);
      v += r.c * std::conj(s.c) * kernel_cross_integral(2, 2, d);
      exact += v.real();
    }
  }

  // remainder |hhat|^2 - |what|^2 decays like u^-4 and is integrated
  // numerically with an explicit tail estimate
  auto f = [&](double u) {
    const Complex hh = h.fourier(u);
    const Complex ww = what(u);
    return std::norm(hh) - std::norm(ww);
  };
  double window = 400.0;
  double tail_est = 0.0;
  double quad_val = 0.0, quad_err = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto q = adaptive_quadrature<double>(f, -window, window,
                                         1e-11 * (1.0 + out.denominator_sq),
                                         600000);
    double c4 = 0.0;
    for (int k = 1; k <= 16; ++k) {
      const double u = window * (0.5 + 0.5 * k / 16.0);
      c4 = std::max(c4, std::abs(f(u)) * u * u * u * u);
    }
    tail_est = 2.0 * c4 / (3.0 * window * window * window);
    quad_val = q.value;
    quad_err = q.error;
    if (tail_est <= 1e-10 * (1.0 + out.denominator_sq)) break;
    window *= 2.0;
  }

  out.numerator_sq = quad_val + exact;
  out.quad_error = quad_err + tail_est;
  require(out.numerator_sq > 0.0, ErrorCode::NoConvergence,
          "frequency-side energy came out nonpositive");
  out.ratio = std::sqrt(out.numerator_sq / out.denominator_sq);
  return out;
}

}  // namespace g2k
