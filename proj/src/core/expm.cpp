#include "core/expm.hpp"

#include <cmath>

namespace g2k {

namespace {

// Pade-13 coefficients (Higham 2005).
const double kB[14] = {64764752532480000.0, 32382376266240000.0,
                       7771770303897600.0,  1187353796428800.0,
                       129060195264000.0,   10559470521600.0,
                       670442572800.0,      33522128640.0,
                       1323241920.0,        40840800.0,
                       960960.0,            16380.0,
                       182.0,               1.0};
const double kTheta13 = 5.371920351148152;

}  // namespace

CMat expm(const CMat& a) {
  const int n = int(a.rows());
  require(n == a.cols(), ErrorCode::InvalidArgument, "expm: square matrix required");
  require(a.allFinite(), ErrorCode::InvalidArgument, "expm: non-finite entries");
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  CMat as = a;
  if (norm > kTheta13) {
    squarings = int(std::ceil(std::log2(norm / kTheta13)));
    as = a / std::pow(2.0, squarings);
  }

  const CMat a2 = as * as;
  const CMat a4 = a2 * a2;
  const CMat a6 = a2 * a4;
  const CMat ident = CMat::Identity(n, n);

  CMat u = as * (a6 * (kB[13] * a6 + kB[11] * a4 + kB[9] * a2) +
                 kB[7] * a6 + kB[5] * a4 + kB[3] * a2 + kB[1] * ident);
  CMat v = a6 * (kB[12] * a6 + kB[10] * a4 + kB[8] * a2) +
           kB[6] * a6 + kB[4] * a4 + kB[2] * a2 + kB[0] * ident;

  CMat f = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) f = f * f;
  return f;
}

}  // namespace g2k
