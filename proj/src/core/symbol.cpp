#include "core/symbol.hpp"

#include <cmath>

#include "core/quadrature.hpp"

namespace g2k {

Symbol Symbol::laplace_of(std::string id, Weight w) {
  Symbol s;
  s.id_ = std::move(id);
  s.kind_ = Kind::LaplaceOfWeight;
  s.weight_ = std::move(w);
  // m(s+t) = <alpha(t), beta(s)> with alpha(t)(x) = b(x)e^{-tx}/sqrt|b(x)|,
  // beta(s)(x) = sqrt|b(x)| e^{-sx}; both sup-norms are at most sqrt(|b| mass).
  FactorWitnessSpec wit;
  wit.nu2_bound = s.weight_.l1_norm();
  wit.description =
      "alpha(t) = b e^{-t.}/sqrt|b|, beta(s) = sqrt|b| e^{-s.} in L2(R+)";
  s.witness_ = wit;
  return s;
}

Symbol Symbol::power_imaginary(std::string id, double r) {
  Symbol s;
  s.id_ = std::move(id);
  s.kind_ = Kind::PowerImaginary;
  s.r_ = r;
  return s;
}

Symbol Symbol::shifted(std::string id, Symbol base, double eps) {
  require(eps > 0.0, ErrorCode::InvalidArgument, "shift must be positive");
  Symbol s;
  s.id_ = std::move(id);
  s.kind_ = Kind::Shifted;
  s.base_ = std::make_shared<Symbol>(std::move(base));
  s.eps_ = eps;
  if (s.base_->witness_) s.witness_ = s.base_->witness_;
  return s;
}

Symbol Symbol::custom(std::string id, std::function<Complex(double)> f,
                      std::string label,
                      std::optional<FactorWitnessSpec> witness) {
  Symbol s;
  s.id_ = std::move(id);
  s.kind_ = Kind::Custom;
  s.custom_ = std::move(f);
  s.custom_label_ = std::move(label);
  s.witness_ = std::move(witness);
  return s;
}

Symbol Symbol::exp_decay(std::string id, double rate) {
  require(rate > 0.0, ErrorCode::InvalidArgument, "rate must be positive");
  FactorWitnessSpec wit;
  wit.nu2_bound = 1.0;
  wit.description = "alpha(t) = e^{-rate t}, beta(s) = e^{-rate s}, rank one";
  return custom(std::move(id),
                [rate](double u) { return Complex(std::exp(-rate * u), 0.0); },
                "exp-decay:" + std::to_string(rate), wit);
}

Symbol Symbol::constant(std::string id, Complex value) {
  FactorWitnessSpec wit;
  wit.nu2_bound = std::abs(value);
  wit.description = "constant kernel, rank one";
  return custom(std::move(id), [value](double) { return value; },
                "const:" + std::to_string(value.real()), wit);
}

Complex Symbol::eval(double u) const {
  require(u > 0.0, ErrorCode::DomainError, "symbol evaluated at u <= 0");
  switch (kind_) {
    case Kind::LaplaceOfWeight:
      return weight_.laplace(Complex(u, 0.0));
    case Kind::PowerImaginary:
      return std::exp(Complex(0.0, r_ * std::log(u)));
    case Kind::Shifted:
      return base_->eval(eps_ + u);
    case Kind::Custom:
      return custom_(u);
  }
  return 0.0;
}

nlohmann::json Symbol::to_json() const {
  nlohmann::json j;
  j["id"] = id_;
  switch (kind_) {
    case Kind::LaplaceOfWeight:
      j["kind"] = "laplace-of-weight";
      j["weight"] = weight_.to_json();
      break;
    case Kind::PowerImaginary:
      j["kind"] = "power-imaginary";
      j["r"] = r_;
      break;
    case Kind::Shifted:
      j["kind"] = "shifted";
      j["base"] = base_->to_json();
      j["eps"] = eps_;
      break;
    case Kind::Custom:
      j["kind"] = "custom";
      j["label"] = custom_label_;
      break;
  }
  if (witness_) {
    j["witness"] = {{"nu2_bound", witness_->nu2_bound},
                    {"description", witness_->description}};
  }
  return j;
}

Symbol Symbol::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::string id = j.value("id", kind);
  if (kind == "laplace-of-weight")
    return laplace_of(id, Weight::from_json(j.at("weight")));
  if (kind == "power-imaginary") return power_imaginary(id, j.at("r").get<double>());
  if (kind == "shifted")
    return shifted(id, from_json(j.at("base")), j.at("eps").get<double>());
  if (kind == "custom") {
    const std::string label = j.value("label", "");
    if (label.rfind("exp-decay:", 0) == 0)
      return exp_decay(id, std::stod(label.substr(10)));
    if (label.rfind("const:", 0) == 0)
      return constant(id, std::stod(label.substr(6)));
    fail(ErrorCode::ParseError, "unknown custom symbol label: " + label);
  }
  fail(ErrorCode::ParseError, "unknown symbol kind: " + kind);
}

PoissonResult poisson_tilde(const Weight& b, Complex z, double tol) {
  require(z.real() > 0.0, ErrorCode::DomainError,
          "Poisson evaluation needs Re z > 0");
  require(tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
  const double x = z.real();
  const double y = z.imag();

  // |b^(s)| <= min(L1, C / |s|), C from integration by parts.
  const double l1 = b.l1_norm();
  double c_decay = std::abs(b.eval_limit(0.0, true));
  for (double bp : b.breakpoints()) {
    if (bp > 0.0)
      c_decay += std::abs(b.eval_limit(bp, true) - b.eval_limit(bp, false));
  }
  {
    // crude bound on the L1 norm of b' from the piece data
    double db = 0.0;
    for (const auto& t : b.terms()) {
      const double red = std::max(t.decay.real(), 0.0);
      const Complex rd(std::max(red, 1e-12), 0.0);
      const double len = t.windowed() ? t.end - t.shift
                                      : std::numeric_limits<double>::infinity();
      double dmass = std::abs(t.coeff) * std::abs(t.decay) *
                     std::abs(incomplete_power_integral(t.power, rd, len));
      if (t.power > 0)
        dmass += std::abs(t.coeff) * t.power *
                 std::abs(incomplete_power_integral(t.power - 1, rd, len));
      db += dmass;
    }
    c_decay += db;
  }

  // Window half-width so the Poisson tail is below tol/2.
  double w = std::max({4.0 * std::abs(y) + 10.0 * x, 10.0});
  auto tail_bound = [&](double width) {
    const double far = std::max(width - std::abs(y), width * 0.5);
    const double env = std::min(l1, c_decay / far);
    return env * (2.0 / kPi) * std::atan2(x, width);
  };
  while (tail_bound(w) > 0.5 * tol && w < 1e9) w *= 2.0;
  const double tail_est = tail_bound(w);

  auto integrand = [&](double s) -> Complex {
    const double kern = x / ((s - y) * (s - y) + x * x);
    return kern * b.fourier(s) / kPi;
  };
  auto quad = adaptive_quadrature<Complex>(integrand, y - w, y + w, 0.25 * tol,
                                           400000);
  PoissonResult res;
  res.value = quad.value;
  res.quad_error = quad.error;
  res.tail_bound = tail_est;
  require(quad.converged && res.quad_error + res.tail_bound <= tol,
          ErrorCode::ToleranceNotMet,
          "Poisson quadrature could not meet the requested tolerance");
  return res;
}

}  // namespace g2k
