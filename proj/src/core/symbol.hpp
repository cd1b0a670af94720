#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "core/weight.hpp"

namespace g2k {

// Closed-form factorization data attached to a symbol: a description of
// alpha/beta and the resulting bound on the factorization norm of the
// kernel m(s+t).
struct FactorWitnessSpec {
  double nu2_bound = 0.0;
  std::string description;
};

// A bounded multiplier symbol on (0,inf).
class Symbol {
 public:
  enum class Kind { LaplaceOfWeight, PowerImaginary, Shifted, Custom };

  static Symbol laplace_of(std::string id, Weight w);
  // m(u) = u^{ir} = exp(i r ln u), principal logarithm.
  static Symbol power_imaginary(std::string id, double r);
  // m_eps(u) = base(eps + u)
  static Symbol shifted(std::string id, Symbol base, double eps);
  static Symbol custom(std::string id, std::function<Complex(double)> f,
                       std::string label,
                       std::optional<FactorWitnessSpec> witness = {});
  // m(u) = exp(-rate u); separable kernel, witness bound 1.
  static Symbol exp_decay(std::string id, double rate);
  static Symbol constant(std::string id, Complex value);

  const std::string& id() const { return id_; }
  Kind kind() const { return kind_; }
  const std::optional<FactorWitnessSpec>& witness() const { return witness_; }
  const Weight* weight() const {
    return kind_ == Kind::LaplaceOfWeight ? &weight_ : nullptr;
  }

  // m(u); rejects u <= 0.
  Complex eval(double u) const;

  nlohmann::json to_json() const;
  static Symbol from_json(const nlohmann::json& j);

 private:
  Symbol() = default;
  std::string id_;
  Kind kind_ = Kind::Custom;
  Weight weight_;
  double r_ = 0.0;
  std::shared_ptr<const Symbol> base_;
  double eps_ = 0.0;
  std::function<Complex(double)> custom_;
  std::string custom_label_;
  std::optional<FactorWitnessSpec> witness_;
};

struct PoissonResult {
  Complex value;
  double quad_error = 0.0;
  double tail_bound = 0.0;
};

// Poisson integral of the boundary function F = b^(-.) evaluated at iz,
// which recovers the Laplace transform of b on the open right half-plane.
// Quadrature on a compact window plus analytic tail bounds; fails when
// the combined error exceeds tol.
PoissonResult poisson_tilde(const Weight& b, Complex z, double tol);

}  // namespace g2k
