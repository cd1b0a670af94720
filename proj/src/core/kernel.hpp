#pragma once

#include <string>

#include "core/grid.hpp"
#include "core/symbol.hpp"

namespace g2k {

class SemigroupModel;

// A complex matrix sampled from a two-variable kernel on a pair of grids,
// with provenance carried alongside for serialization.
struct KernelMatrix {
  CMat entries;
  nlohmann::json provenance;

  int rows() const { return int(entries.rows()); }
  int cols() const { return int(entries.cols()); }

  // CSV body with interleaved re/im columns (re0,im0,re1,im1,...).
  std::string to_csv() const;
  static KernelMatrix from_csv(const std::string& csv);

  void write(const std::string& csv_path, const std::string& sidecar_path) const;
};

// entries[i][j] = m(s_i + t_j)
KernelMatrix sample_hankel(const Symbol& m, const SampleGrid& gs,
                           const SampleGrid& gt);

// entries[i][j] = <T_{u_j} x, T_{s_i}^* y> = y^* e^{-(s_i+u_j)A} x
KernelMatrix sample_semigroup_kernel(const SemigroupModel& model,
                                     const CVec& x, const CVec& y,
                                     const SampleGrid& gs,
                                     const SampleGrid& gu);

// entries[i][j] = Psi(s_i, u_j) w_i w_j, so the entrywise bilinear pairing
// with a sampled Hankel matrix discretizes the integral pairing of m and
// the convolution associated with Psi.
KernelMatrix weighted_tensor_matrix(const TensorWeight& psi,
                                    const SampleGrid& gs,
                                    const SampleGrid& gu);

// sum_ij M[i][j] N[i][j]  (bilinear, no conjugation)
Complex kernel_pairing(const CMat& m, const CMat& n);

}  // namespace g2k
