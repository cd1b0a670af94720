#include "core/kernel.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "core/semigroup.hpp"

namespace g2k {

KernelMatrix sample_hankel(const Symbol& m, const SampleGrid& gs,
                           const SampleGrid& gt) {
  gs.validate();
  gt.validate();
  KernelMatrix k;
  k.entries.resize(gs.size(), gt.size());
  for (int i = 0; i < gs.size(); ++i)
    for (int j = 0; j < gt.size(); ++j)
      k.entries(i, j) = m.eval(gs.points[i] + gt.points[j]);
  require(k.entries.allFinite(), ErrorCode::DomainError,
          "hankel sample has non-finite entries");
  k.provenance = {{"type", "hankel"},
                  {"symbol", m.id()},
                  {"gridS", gs.to_json()},
                  {"gridT", gt.to_json()}};
  return k;
}

KernelMatrix sample_semigroup_kernel(const SemigroupModel& model,
                                     const CVec& x, const CVec& y,
                                     const SampleGrid& gs,
                                     const SampleGrid& gu) {
  gs.validate();
  gu.validate();
  require(x.size() == model.dim() && y.size() == model.dim(),
          ErrorCode::InvalidArgument, "vector dimension mismatch");
  KernelMatrix k;
  k.entries.resize(gs.size(), gu.size());
  // <T_u x, T_s^* y> = y^* T_{s+u} x
  for (int i = 0; i < gs.size(); ++i) {
    for (int j = 0; j < gu.size(); ++j) {
      const CMat t = semigroup_at(model, gs.points[i] + gu.points[j]);
      k.entries(i, j) = y.dot(t * x);  // Eigen dot conjugates the left arg
    }
  }
  require(k.entries.allFinite(), ErrorCode::DomainError,
          "semigroup kernel sample has non-finite entries");
  k.provenance = {{"type", "semigroup"},
                  {"model", model.id()},
                  {"gridS", gs.to_json()},
                  {"gridU", gu.to_json()}};
  return k;
}

KernelMatrix weighted_tensor_matrix(const TensorWeight& psi,
                                    const SampleGrid& gs,
                                    const SampleGrid& gu) {
  gs.validate();
  gu.validate();
  require(gs.has_weights() && gu.has_weights(), ErrorCode::InvalidArgument,
          "weighted_tensor_matrix needs quadrature weights on both grids");
  KernelMatrix k;
  k.entries.resize(gs.size(), gu.size());
  for (int i = 0; i < gs.size(); ++i)
    for (int j = 0; j < gu.size(); ++j)
      k.entries(i, j) = psi.eval(gs.points[i], gu.points[j]) * gs.weights[i] *
                        gu.weights[j];
  k.provenance = {{"type", "tensor"},
                  {"gridS", gs.to_json()},
                  {"gridU", gu.to_json()}};
  return k;
}

Complex kernel_pairing(const CMat& m, const CMat& n) {
  require(m.rows() == n.rows() && m.cols() == n.cols(),
          ErrorCode::InvalidArgument, "pairing shape mismatch");
  return (m.array() * n.array()).sum();
}

std::string KernelMatrix::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i < rows(); ++i) {
    for (int j = 0; j < cols(); ++j) {
      if (j) out << ',';
      out << entries(i, j).real() << ',' << entries(i, j).imag();
    }
    out << '\n';
  }
  return out.str();
}

KernelMatrix KernelMatrix::from_csv(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    rows.push_back(std::move(vals));
  }
  require(!rows.empty(), ErrorCode::ParseError, "empty matrix CSV");
  const size_t width = rows.front().size();
  require(width % 2 == 0, ErrorCode::ParseError,
          "matrix CSV needs interleaved re/im columns");
  KernelMatrix k;
  k.entries.resize(int(rows.size()), int(width / 2));
  for (size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == width, ErrorCode::ParseError,
            "ragged matrix CSV");
    for (size_t j = 0; j < width / 2; ++j)
      k.entries(int(i), int(j)) = Complex(rows[i][2 * j], rows[i][2 * j + 1]);
  }
  k.provenance = {{"type", "csv"}};
  return k;
}

void KernelMatrix::write(const std::string& csv_path,
                         const std::string& sidecar_path) const {
  std::ofstream csv(csv_path);
  require(csv.good(), ErrorCode::IoError, "cannot open " + csv_path);
  csv << to_csv();
  std::ofstream side(sidecar_path);
  require(side.good(), ErrorCode::IoError, "cannot open " + sidecar_path);
  side << provenance.dump(2) << '\n';
}

}  // namespace g2k
