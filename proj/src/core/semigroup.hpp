#pragma once

#include <mutex>
#include <optional>
#include <string>

#include "core/grid.hpp"
#include "core/weight.hpp"

namespace g2k {

// A matrix C0-semigroup T_t = e^{-tA} described by its generator data
// (the convention follows "-A generates T"). Boundedness is certified at
// construction: all eigenvalues of A in the closed right half-plane and
// imaginary-axis eigenvalues semisimple.
class SemigroupModel {
 public:
  SemigroupModel(std::string id, CMat generator);

  const std::string& id() const { return id_; }
  const CMat& generator() const { return a_; }
  int dim() const { return int(a_.rows()); }
  double spectral_abscissa() const { return abscissa_; }
  bool bounded() const { return bounded_; }

  // Reliable spectral data, when A is numerically diagonalizable.
  bool has_eigen() const { return eigen_ok_; }
  const CMat& eigvecs() const { return v_; }
  const CVec& eigvals() const { return lambda_; }
  const CMat& eigvecs_inv() const { return vinv_; }
  double eig_cond() const { return cond_v_; }

  // sup_t ||e^{-tA}||, certified upper bound; cached after first use.
  double growth_bound() const;

 private:
  std::string id_;
  CMat a_;
  double abscissa_ = 0.0;
  bool bounded_ = false;
  bool eigen_ok_ = false;
  CMat v_, vinv_;
  CVec lambda_;
  double cond_v_ = 0.0;
  mutable std::once_flag growth_once_;
  mutable double growth_ = 0.0;
};

// e^{-tA}; t >= 0.
CMat semigroup_at(const SemigroupModel& model, double t);

struct GrowthBound {
  double value = 0.0;     // certified upper bound on sup_t ||T_t||
  double accuracy = 0.0;  // sampling resolution of the bound
  double horizon = 0.0;
};

// Max of ||e^{-tA}|| over [0,horizon] by dense sampling plus golden-section
// polish, with a certified tail bound beyond the horizon. horizon <= 0
// selects the default (50/abscissa, or contraction detection when the
// abscissa vanishes).
GrowthBound estimate_growth_bound(const SemigroupModel& model,
                                  double horizon = 0.0, int samples = 512);

struct CalculusResult {
  CMat op;                    // Gamma(A,b) = integral b(t) T_t dt
  double operator_norm = 0.0; // spectral norm
  double quad_error = 0.0;
  double tail_error = 0.0;
};

// Hille-Phillips calculus by adaptive quadrature on [0,T*] with an
// analytic tail bound C_A * integral_{T*}^inf |b|.
CalculusResult hille_phillips(const SemigroupModel& model, const Weight& b,
                              double tol);

struct BoundReport {
  std::string model_id;
  std::string tensor_id;
  double lhs = 0.0;   // ||Gamma(A,b)||
  double c_a = 0.0;
  std::vector<int> grid_sizes;     // per refinement level
  std::vector<double> gamma2_dual; // discretized gamma2* per level
  std::vector<double> rhs;         // c_a^2 * gamma2_dual per level
  double slack = 0.0;              // min rhs - lhs
  bool pass = false;               // lhs <= rhs + tol at every level
  double tol = 0.0;
  nlohmann::json grids;

  nlohmann::json to_json() const;
};

// Discretized check of ||Gamma(A,b)|| <= C_A^2 gamma2*(Psi) with
// b = sum_j c_j * d_j. Advisory: the report carries the value at the given
// grids and at one refinement (doubled point count) so the trend is visible.
BoundReport verify_calculus_bound(const SemigroupModel& model,
                                  const TensorWeight& psi,
                                  const SampleGrid& gs, const SampleGrid& gu,
                                  double tol);

// || Gamma(A + eps I, b) - Gamma(A, e^{-eps t} b) ||; both routes are
// computed independently, so the value is bounded by twice the quadrature
// tolerance.
double shift_consistency(const SemigroupModel& model, const Weight& b,
                         double eps, double tol);

}  // namespace g2k
