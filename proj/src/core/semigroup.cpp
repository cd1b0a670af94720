#include "core/semigroup.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "core/expm.hpp"
#include "core/gamma2.hpp"
#include "core/kernel.hpp"
#include "core/quadrature.hpp"

namespace g2k {

namespace {

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

SemigroupModel::SemigroupModel(std::string id, CMat generator)
    : id_(std::move(id)), a_(std::move(generator)) {
  require(a_.rows() == a_.cols() && a_.rows() >= 1, ErrorCode::InvalidArgument,
          "generator must be square");
  require(a_.allFinite(), ErrorCode::InvalidArgument,
          "generator has non-finite entries");
  const int d = int(a_.rows());
  const double scale = std::max(1.0, a_.cwiseAbs().maxCoeff());

  Eigen::ComplexEigenSolver<CMat> eig(a_);
  require(eig.info() == Eigen::Success, ErrorCode::NoConvergence,
          "eigendecomposition failed");
  lambda_ = eig.eigenvalues();
  v_ = eig.eigenvectors();
  abscissa_ = lambda_.real().minCoeff();

  // diagonalizability check: trust V only when it reproduces A well
  Eigen::FullPivLU<CMat> lu(v_);
  eigen_ok_ = lu.isInvertible();
  if (eigen_ok_) {
    vinv_ = lu.inverse();
    const double resid =
        (v_ * lambda_.asDiagonal() * vinv_ - a_).cwiseAbs().maxCoeff();
    Eigen::BDCSVD<CMat> svdv(v_);
    cond_v_ = svdv.singularValues()(0) /
              std::max(svdv.singularValues()(d - 1), 1e-300);
    eigen_ok_ = resid <= 1e-10 * scale && cond_v_ < 1e12;
  }

  // bounded iff spectrum in the closed right half-plane and imaginary-axis
  // eigenvalues semisimple (numerical tolerance 1e-10)
  bounded_ = abscissa_ >= -1e-10 * scale;
  if (bounded_) {
    for (int i = 0; i < d && bounded_; ++i) {
      if (std::abs(lambda_(i).real()) > 1e-10 * scale) continue;
      int mult = 0;
      for (int j = 0; j < d; ++j)
        if (std::abs(lambda_(j) - lambda_(i)) <= 1e-8 * scale) ++mult;
      Eigen::BDCSVD<CMat> svd(CMat(a_ - lambda_(i) * CMat::Identity(d, d)));
      int rank = 0;
      for (int j = 0; j < d; ++j)
        if (svd.singularValues()(j) > 1e-10 * scale * d) ++rank;
      if (rank != d - mult) bounded_ = false;  // defective on the axis
    }
  }
}

double SemigroupModel::growth_bound() const {
  std::call_once(growth_once_, [this]() {
    growth_ = estimate_growth_bound(*this).value;
  });
  return growth_;
}

CMat semigroup_at(const SemigroupModel& model, double t) {
  require(t >= 0.0, ErrorCode::DomainError, "semigroup time must be >= 0");
  if (t == 0.0) return CMat::Identity(model.dim(), model.dim());
  if (model.has_eigen() && model.eig_cond() < 1e3) {
    CVec e = (-t * model.eigvals().array()).exp();
    return model.eigvecs() * e.asDiagonal() * model.eigvecs_inv();
  }
  return expm(CMat(-t * model.generator()));
}

GrowthBound estimate_growth_bound(const SemigroupModel& model, double horizon,
                                  int samples) {
  require(model.bounded(), ErrorCode::DomainError,
          "growth bound requires a bounded semigroup");
  if (samples < 32) samples = 32;
  const double absc = std::max(model.spectral_abscissa(), 0.0);
  double h = horizon;
  if (h <= 0.0) h = absc > 1e-12 ? 50.0 / absc : 1e3;

  auto norm_at = [&](double t) { return spectral_norm(semigroup_at(model, t)); };

  // mixed sampling: uniform near the origin plus geometric out to the horizon
  std::vector<double> ts{0.0};
  const double lin_hi = std::min(h, 100.0);
  for (int i = 1; i <= samples; ++i) ts.push_back(lin_hi * i / samples);
  const double glo = std::max(1e-3, h * 1e-8);
  for (int i = 0; i <= samples; ++i)
    ts.push_back(glo * std::pow(h / glo, double(i) / samples));
  std::sort(ts.begin(), ts.end());

  double tbest = 0.0, fbest = 0.0, gap = 0.0;
  double prev_f = -1.0;
  for (double t : ts) {
    const double f = norm_at(t);
    if (f > fbest) {
      fbest = f;
      tbest = t;
    }
    if (prev_f >= 0.0) gap = std::max(gap, std::abs(f - prev_f));
    prev_f = f;
  }

  // golden-section polish around the sampled argmax
  {
    auto it = std::lower_bound(ts.begin(), ts.end(), tbest);
    double lo = it == ts.begin() ? 0.0 : *(it - 1);
    double hi = (it + 1) == ts.end() ? tbest : *(it + 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = norm_at(c), fd = norm_at(d);
    for (int i = 0; i < 60 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = norm_at(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = norm_at(d);
      }
      fbest = std::max({fbest, fc, fd});
    }
  }

  GrowthBound out;
  out.horizon = h;
  out.accuracy = gap * 0.5 + 1e-12;

  // certify the tail beyond the horizon
  const double rho = norm_at(h);
  if (rho <= 1.0 + 1e-12) {
    // ||T_{r+kh}|| <= ||T_r|| rho^k, so the sup over [0,h] covers all t
    out.value = fbest;
    return out;
  }
  if (model.has_eigen()) {
    const double tail = model.eig_cond() * std::exp(-absc * h);
    if (tail <= fbest) {
      out.value = fbest;
      return out;
    }
  }
  fail(ErrorCode::DomainError,
       "growth bound: horizon too small for a certified tail bound");
}

CalculusResult hille_phillips(const SemigroupModel& model, const Weight& b,
                              double tol) {
  require(model.bounded(), ErrorCode::DomainError,
          "Hille-Phillips calculus requires a bounded semigroup");
  require(tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
  const int d = model.dim();
  const double ca = model.growth_bound();

  // truncation point: C_A * tail(|b|) <= tol/2
  double tstar = 1.0;
  while (ca * b.l1_tail_bound(tstar) > 0.5 * tol) {
    tstar *= 1.6;
    require(tstar < 1e8, ErrorCode::ToleranceNotMet,
            "tail of the weight decays too slowly for the tolerance");
  }

  const bool fast = model.has_eigen() && model.eig_cond() < 1e4;
  auto tt = [&](double t) -> CMat {
    if (fast) {
      CVec e = (-t * model.eigvals().array()).exp();
      return model.eigvecs() * e.asDiagonal() * model.eigvecs_inv();
    }
    return expm(CMat(-t * model.generator()));
  };
  auto integrand = [&](double t) -> CMat { return b.eval(t) * tt(t); };

  // integrate between weight breakpoints so panels stay smooth
  std::vector<double> cuts{0.0};
  for (double bp : b.breakpoints())
    if (bp > 0.0 && bp < tstar) cuts.push_back(bp);
  cuts.push_back(tstar);
  std::sort(cuts.begin(), cuts.end());

  CalculusResult res;
  res.op = CMat::Zero(d, d);
  const double seg_tol = 0.5 * tol / double(cuts.size());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto q = adaptive_quadrature<CMat>(integrand, cuts[i], cuts[i + 1], seg_tol,
                                       400000);
    require(q.converged, ErrorCode::ToleranceNotMet,
            "quadrature failed to reach the requested tolerance");
    res.op += q.value;
    res.quad_error += q.error;
  }
  res.tail_error = ca * b.l1_tail_bound(tstar);
  res.operator_norm = spectral_norm(res.op);
  return res;
}

nlohmann::json BoundReport::to_json() const {
  return {{"model", model_id}, {"tensor", tensor_id},
          {"lhs", lhs},        {"cA", c_a},
          {"gridSizes", grid_sizes}, {"gamma2Dual", gamma2_dual},
          {"rhs", rhs},        {"slack", slack},
          {"pass", pass},      {"tol", tol},
          {"grids", grids}};
}

BoundReport verify_calculus_bound(const SemigroupModel& model,
                                  const TensorWeight& psi,
                                  const SampleGrid& gs, const SampleGrid& gu,
                                  double tol) {
  require(tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
  require(gs.kind != GridKind::Custom && gu.kind != GridKind::Custom,
          ErrorCode::InvalidArgument,
          "refinement levels need uniform or geometric grids");
  BoundReport rep;
  rep.model_id = model.id();
  rep.tol = tol;
  rep.grids = {{"gridS", gs.to_json()}, {"gridU", gu.to_json()}};

  const Weight b = psi.to_weight();
  const double htol = std::min(1e-8, 0.01 * tol);
  rep.lhs = hille_phillips(model, b, htol).operator_norm;
  rep.c_a = model.growth_bound();

  const double gtol = std::min(1e-6, 0.01 * tol);
  double min_rhs = std::numeric_limits<double>::infinity();
  bool pass = true;
  for (int level = 0; level < 2; ++level) {
    const int factor = level == 0 ? 1 : 2;
    const SampleGrid gsl =
        make_grid(gs.kind, gs.size() * factor, gs.points.front(), gs.points.back());
    const SampleGrid gul =
        make_grid(gu.kind, gu.size() * factor, gu.points.front(), gu.points.back());
    const KernelMatrix w = weighted_tensor_matrix(psi, gsl, gul);
    const auto cert = gamma2_dual(w.entries, gtol);
    rep.grid_sizes.push_back(gsl.size());
    rep.gamma2_dual.push_back(cert.value);
    const double rhs = rep.c_a * rep.c_a * cert.value;
    rep.rhs.push_back(rhs);
    min_rhs = std::min(min_rhs, rhs);
    pass = pass && rep.lhs <= rhs + tol;
  }
  rep.slack = min_rhs - rep.lhs;
  rep.pass = pass;
  return rep;
}

double shift_consistency(const SemigroupModel& model, const Weight& b,
                         double eps, double tol) {
  require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be >= 0");
  const CMat shifted_gen =
      model.generator() + eps * CMat::Identity(model.dim(), model.dim());
  SemigroupModel shifted(model.id() + "+shift", shifted_gen);
  const CalculusResult lhs = hille_phillips(shifted, b, tol);
  const CalculusResult rhs = hille_phillips(model, b.damped(eps), tol);
  return spectral_norm(CMat(lhs.op - rhs.op));
}

}  // namespace g2k
