#pragma once

#include <string>

#include "core/types.hpp"

#include "json.hpp"

namespace g2k {

// Result of a gamma2 or gamma2* computation. `value` and `dual_value`
// bracket the true norm: value is the certified upper estimate and
// dual_value the certified lower one, gap their difference. The factor
// pair reconstructs the input (gamma2) or the attaining unit-ball matrix
// (gamma2*), with row 2-norms bounded by sqrt(value + gap).
struct Gamma2Certificate {
  double value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  CMat row_factor;  // n x k
  CMat col_factor;  // m x k
  CMat attaining;   // gamma2* only: unit-gamma2 matrix attaining dual_value
  int iterations = 0;
  bool converged = true;

  int rank() const { return int(row_factor.cols()); }
  nlohmann::json to_json() const;
};

// gamma2(M) = min max-row-norm(R) * max-row-norm(C) over M = R C^*,
// computed as the SDP  min t : [[X, M],[M^*, Y]] >= 0, diag <= t  by a
// primal barrier method with exact Newton steps; the dual certificate is
// recovered from the barrier multipliers.
Gamma2Certificate gamma2_norm(const CMat& m, double tol = 1e-6);

// gamma2*(N) = max |sum_ij M_ij N_ij| over gamma2(M) <= 1 (bilinear
// pairing), computed as  max <C,Z> : Z >= 0, diag(Z) <= 1.
Gamma2Certificate gamma2_dual(const CMat& n, double tol = 1e-6);

// Sampled alpha/beta witness in the sense of the Hilbert-space
// factorization of the kernel: <alpha(j), beta(i)> = M[i][j].
struct FactorWitness {
  int dim = 0;
  CMat alpha;  // (cols of M) x dim, row j = alpha(j)
  CMat beta;   // (rows of M) x dim, row i = beta(i)
  double sup_alpha = 0.0;
  double sup_beta = 0.0;
};

FactorWitness extract_witness(const Gamma2Certificate& cert, const CMat& m,
                              double tol = 1e-6);

// Independent oracle for tiny instances (n,m <= 3): multi-start
// alternating minimum-norm factorization search. Accuracy target 1e-4.
double brute_force_gamma2(const CMat& m, int starts = 48,
                          unsigned long seed = 20240901ULL);

}  // namespace g2k
