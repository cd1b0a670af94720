#include "core/gamma2.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace g2k {

namespace {

double max_abs(const CMat& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

template <class Scalar>
struct Mats {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
};

template <class Scalar>
double re(const Scalar& v) {
  if constexpr (std::is_same_v<Scalar, double>)
    return v;
  else
    return v.real();
}

// Re <A, B> for the real trace inner product on Hermitian pairs.
template <class MatT>
double dot_re(const MatT& a, const MatT& b) {
  using Scalar = typename MatT::Scalar;
  return re(Scalar((a.conjugate().cwiseProduct(b)).sum()));
}

// ------------------------------------------------------------------
// Primal barrier solver for
//     gamma2(M) = min t : Z = [[X, M],[M*, Y]] psd, diag(Z) <= t.
// The Newton system over (X, Y, t) splits into the log-det congruence
// part, solved exactly through a Stein equation in the eigenbasis of
// K = Q* P^{-1} Q, and a diagonal-cap correction handled by a Woodbury
// step over the N diagonal coordinates.
template <class Scalar>
class NormSolver {
  using Mat = typename Mats<Scalar>::Mat;
  using Vec = typename Mats<Scalar>::Vec;

 public:
  NormSolver(Mat m, double tol, int max_newton)
      : m_(std::move(m)),
        n_(int(m_.rows())),
        w_(int(m_.cols())),
        nn_(n_ + w_),
        tol_(tol),
        max_newton_(max_newton) {}

  struct Result {
    double primal = 0.0;
    double dual = 0.0;
    Mat x, y;  // best feasible completion blocks
    int iterations = 0;
    bool converged = false;
  };

  Result solve() {
    Eigen::BDCSVD<Mat> svd(m_);
    const double top = std::max(svd.singularValues()(0), 1e-12);
    const double c0 = top + 0.5;
    x_ = Mat::Identity(n_, n_) * Scalar(c0);
    y_ = Mat::Identity(w_, w_) * Scalar(c0);
    t_ = 1.5 * c0;
    mu_ = 0.1 * t_;

    Result best;
    best.primal = std::numeric_limits<double>::infinity();
    best.dual = 0.0;
    best.x = x_;
    best.y = y_;

    int newton_total = 0;
    int weak_rounds = 0;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 90; ++round) {
      for (int step = 0; step < 20; ++step) {
        if (newton_total >= max_newton_) break;
        double decrement = 0.0;
        if (!newton_step(decrement)) {
          newton_total = max_newton_;  // numerical breakdown: stop with best
          break;
        }
        ++newton_total;
        if (decrement < 0.02) break;
      }
      harvest(best);
      best.iterations = newton_total;
      const double gap = best.primal - best.dual;
      if (gap <= tol_) {
        best.converged = true;
        return best;
      }
      weak_rounds = (prev_gap - gap < std::max(0.02 * gap, 1e-3 * tol_))
                        ? weak_rounds + 1
                        : 0;
      prev_gap = gap;
      if (weak_rounds >= 3 || newton_total >= max_newton_) return best;
      mu_ *= 0.12;
      if (mu_ < 1e-13 * (1.0 + best.primal)) return best;
    }
    return best;
  }

 private:
  Mat assemble_z(const Mat& x, const Mat& y) const {
    Mat z(nn_, nn_);
    z.topLeftCorner(n_, n_) = x;
    z.topRightCorner(n_, w_) = m_;
    z.bottomLeftCorner(w_, n_) = m_.adjoint();
    z.bottomRightCorner(w_, w_) = y;
    return z;
  }

  // returns false when the point is not strictly feasible
  bool barrier(const Mat& x, const Mat& y, double t, double& value) const {
    Eigen::LLT<Mat> llt(assemble_z(x, y));
    if (llt.info() != Eigen::Success) return false;
    double logdet = 0.0;
    for (int i = 0; i < nn_; ++i)
      logdet += std::log(re(Scalar(llt.matrixLLT()(i, i))));
    logdet *= 2.0;
    double caps = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double s = t - re(Scalar(x(i, i)));
      if (s <= 0.0) return false;
      caps += std::log(s);
    }
    for (int j = 0; j < w_; ++j) {
      const double s = t - re(Scalar(y(j, j)));
      if (s <= 0.0) return false;
      caps += std::log(s);
    }
    value = t / mu_ - logdet - caps;
    return true;
  }

  struct Factorization {
    Mat pinv, j, bt, ymat, vall;
    Mat cmat;                 // 1/(1 - d_a d_b), cast to Scalar
    Eigen::MatrixXd s;        // capacitance E^T H_ld^{-1} E
    Mat p, q, r;
  };

  bool factorize(Factorization& f) const {
    Eigen::LLT<Mat> llt(assemble_z(x_, y_));
    if (llt.info() != Eigen::Success) return false;
    Mat w = llt.solve(Mat::Identity(nn_, nn_));
    f.p = w.topLeftCorner(n_, n_);
    f.q = w.topRightCorner(n_, w_);
    f.r = w.bottomRightCorner(w_, w_);

    Eigen::LLT<Mat> lltp(f.p);
    if (lltp.info() != Eigen::Success) return false;
    f.pinv = lltp.solve(Mat::Identity(n_, n_));
    f.j = f.pinv * f.q;
    Mat k = f.q.adjoint() * f.j;

    Eigen::LLT<Mat> lltr(f.r);
    if (lltr.info() != Eigen::Success) return false;
    Mat lr = lltr.matrixL();
    Mat linv = lr.template triangularView<Eigen::Lower>().solve(
        Mat::Identity(w_, w_));
    Mat khat = linv * k * linv.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> eig(khat);
    if (eig.info() != Eigen::Success) return false;
    Eigen::VectorXd d = eig.eigenvalues();
    for (int i = 0; i < w_; ++i)
      d(i) = std::clamp(d(i), 0.0, 1.0 - 1e-14);
    const Mat& u = eig.eigenvectors();
    f.bt = linv.adjoint() * u;
    f.ymat = u.adjoint() * linv;

    Eigen::MatrixXd cr(w_, w_);
    for (int a = 0; a < w_; ++a)
      for (int b = 0; b < w_; ++b) cr(a, b) = 1.0 / (1.0 - d(a) * d(b));
    f.cmat = cr.template cast<Scalar>();

    // rep vectors: X-units map to columns of Zmat, Y-units to Ymat
    f.vall.resize(w_, nn_);
    f.vall.leftCols(n_) = f.ymat * f.j.adjoint();
    f.vall.rightCols(w_) = f.ymat;

    // capacitance: S_ab = sgn_a sgn_b (w_ab^* C w_ab) + X-direct part
    f.s.resize(nn_, nn_);
    for (int b = 0; b < nn_; ++b) {
      const int cols = nn_ - b;
      Mat matb = f.vall.rightCols(cols);
      const Vec vb = f.vall.col(b);
      for (int a = 0; a < cols; ++a)
        matb.col(a) = matb.col(a).cwiseProduct(vb.conjugate());
      Mat tb = f.cmat * matb;
      for (int a = 0; a < cols; ++a)
        f.s(b + a, b) = re(Scalar(matb.col(a).dot(tb.col(a))));
    }
    {
      Eigen::MatrixXd full = f.s.template selfadjointView<Eigen::Lower>();
      f.s = full;
    }
    Eigen::MatrixXd sgn = Eigen::MatrixXd::Ones(nn_, 1);
    sgn.topRows(n_).array() = -1.0;
    f.s = (sgn * sgn.transpose()).cwiseProduct(f.s);
    f.s.topLeftCorner(n_, n_) += f.pinv.cwiseAbs2();
    return true;
  }

  void base_solve(const Factorization& f, const Mat& gx, const Mat& gy,
                  Mat& dx, Mat& dy) const {
    Mat gt = gy - f.j.adjoint() * gx * f.j;
    Mat gbar = f.ymat * gt * f.ymat.adjoint();
    gbar = gbar.cwiseProduct(f.cmat);
    dy = f.bt * gbar * f.bt.adjoint();
    dy = Scalar(0.5) * (dy + dy.adjoint()).eval();
    dx = f.pinv * gx * f.pinv - f.j * dy * f.j.adjoint();
    dx = Scalar(0.5) * (dx + dx.adjoint()).eval();
  }

  static Eigen::VectorXd diag_proj(const Mat& dx, const Mat& dy) {
    Eigen::VectorXd v(dx.rows() + dy.rows());
    for (int i = 0; i < dx.rows(); ++i) v(i) = re(Scalar(dx(i, i)));
    for (int j = 0; j < dy.rows(); ++j) v(dx.rows() + j) = re(Scalar(dy(j, j)));
    return v;
  }

  bool newton_step(double& decrement) {
    Factorization f;
    if (!factorize(f)) return false;

    Eigen::VectorXd sx(n_), sy(w_);
    for (int i = 0; i < n_; ++i) sx(i) = t_ - re(Scalar(x_(i, i)));
    for (int j = 0; j < w_; ++j) sy(j) = t_ - re(Scalar(y_(j, j)));
    if (sx.minCoeff() <= 0.0 || sy.minCoeff() <= 0.0) return false;

    // gradient of the barrier
    Mat rx = f.p;  // = -grad_X
    for (int i = 0; i < n_; ++i) rx(i, i) -= Scalar(1.0 / sx(i));
    Mat ry = f.r;
    for (int j = 0; j < w_; ++j) ry(j, j) -= Scalar(1.0 / sy(j));
    double rt = -(1.0 / mu_);
    for (int i = 0; i < n_; ++i) rt += 1.0 / sx(i);
    for (int j = 0; j < w_; ++j) rt += 1.0 / sy(j);

    Eigen::VectorXd ct(nn_);
    double htt = 0.0;
    for (int i = 0; i < n_; ++i) {
      ct(i) = 1.0 / (sx(i) * sx(i));
      htt += ct(i);
    }
    for (int j = 0; j < w_; ++j) {
      ct(n_ + j) = 1.0 / (sy(j) * sy(j));
      htt += ct(n_ + j);
    }

    Eigen::MatrixXd kcap = f.s;
    for (int a = 0; a < nn_; ++a) kcap(a, a) += 1.0 / ct(a);  // D^{-1} = s^2
    Eigen::LDLT<Eigen::MatrixXd> kldlt(kcap);
    if (kldlt.info() != Eigen::Success) return false;

    auto solve_corrected = [&](const Mat& gx, const Mat& gy, Mat& dx,
                               Mat& dy) {
      base_solve(f, gx, gy, dx, dy);
      Eigen::VectorXd p = diag_proj(dx, dy);
      Eigen::VectorXd q = kldlt.solve(p);
      Mat cx = Mat::Zero(n_, n_), cy = Mat::Zero(w_, w_);
      for (int i = 0; i < n_; ++i) cx(i, i) = Scalar(q(i));
      for (int j = 0; j < w_; ++j) cy(j, j) = Scalar(q(n_ + j));
      Mat ex, ey;
      base_solve(f, cx, cy, ex, ey);
      dx -= ex;
      dy -= ey;
    };

    Mat ux, uy, wx, wy;
    solve_corrected(rx, ry, ux, uy);
    Mat ctx = Mat::Zero(n_, n_), cty = Mat::Zero(w_, w_);
    for (int i = 0; i < n_; ++i) ctx(i, i) = Scalar(ct(i));
    for (int j = 0; j < w_; ++j) cty(j, j) = Scalar(ct(n_ + j));
    solve_corrected(ctx, cty, wx, wy);

    const double denom = htt - ct.dot(diag_proj(wx, wy));
    if (!(denom > 0.0)) return false;
    const double dt = (rt + ct.dot(diag_proj(ux, uy))) / denom;
    Mat dx = ux + Scalar(dt) * wx;
    Mat dy = uy + Scalar(dt) * wy;

    // Newton decrement^2 = <r, d>
    double dec2 = rt * dt + dot_re(rx, dx) + dot_re(ry, dy);
    decrement = std::sqrt(std::max(dec2, 0.0));

    double f0;
    if (!barrier(x_, y_, t_, f0)) return false;
    // centered to floating-point resolution: a line search on barrier
    // differences would only chase rounding noise
    if (dec2 <= 1e-15 * (1.0 + std::abs(f0))) {
      decrement = 0.0;
      return true;
    }
    const double noise = 1e-12 * (1.0 + std::abs(f0));
    double alpha = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      Mat xn = x_ + Scalar(alpha) * dx;
      Mat yn = y_ + Scalar(alpha) * dy;
      const double tn = t_ + alpha * dt;
      double fn;
      if (barrier(xn, yn, tn, fn) && fn <= f0 - 1e-4 * alpha * dec2 + noise) {
        x_ = std::move(xn);
        y_ = std::move(yn);
        t_ = tn;
        return true;
      }
      alpha *= 0.5;
    }
    return false;
  }

  // Extract the certified primal/dual pair at the current iterate and
  // fold improvements into `best`. Returns the bracket improvement.
  double harvest(Result& best) const {
    double primal = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) primal = std::max(primal, re(Scalar(x_(i, i))));
    for (int j = 0; j < w_; ++j) primal = std::max(primal, re(Scalar(y_(j, j))));

    double dual = 0.0;
    Eigen::LLT<Mat> llt(assemble_z(x_, y_));
    if (llt.info() == Eigen::Success) {
      Mat w = llt.solve(Mat::Identity(nn_, nn_));
      Eigen::VectorXd lam(n_), nu(w_);
      for (int i = 0; i < n_; ++i) lam(i) = std::max(re(Scalar(w(i, i))), 1e-300);
      for (int j = 0; j < w_; ++j)
        nu(j) = std::max(re(Scalar(w(n_ + j, n_ + j))), 1e-300);
      Mat s2 = w.topRightCorner(n_, w_);
      Mat scaled = s2;
      for (int i = 0; i < n_; ++i) scaled.row(i) /= Scalar(std::sqrt(lam(i)));
      for (int j = 0; j < w_; ++j) scaled.col(j) /= Scalar(std::sqrt(nu(j)));
      Eigen::BDCSVD<Mat> svd(scaled);
      const double sigma = std::max(svd.singularValues()(0), 1.0);
      const double pairing = -2.0 * dot_re(s2, m_);
      // rescaling (lam, nu) -> (c lam, nu/c) keeps feasibility; the best
      // split replaces the sum by 2 sqrt(product)
      dual = (pairing / sigma) / (2.0 * std::sqrt(lam.sum() * nu.sum()));
    }

    const double before = best.primal - best.dual;
    if (primal < best.primal) {
      best.primal = primal;
      best.x = x_;
      best.y = y_;
    }
    best.dual = std::max(best.dual, dual);
    return before - (best.primal - best.dual);
  }

  Mat m_;
  int n_, w_, nn_;
  double tol_;
  int max_newton_;
  Mat x_, y_;
  double t_ = 0.0;
  double mu_ = 1.0;
};

// ------------------------------------------------------------------
// Real symmetric fast path. The completion may be taken with Y = X, and
// [[X, M],[M, X]] psd collapses orthogonally to X+M psd and X-M psd.
// The two congruences diagonalize jointly in a generalized eigenbasis,
// so Newton steps cost a quarter of the general solver's.
class SymNormSolver {
  using Mat = Eigen::MatrixXd;
  using Vec = Eigen::VectorXd;

 public:
  SymNormSolver(Mat m, double tol, int max_newton)
      : m_(std::move(m)), n_(int(m_.rows())), tol_(tol),
        max_newton_(max_newton) {}

  struct Result {
    double primal = 0.0;
    double dual = 0.0;
    Mat x;
    int iterations = 0;
    bool converged = false;
  };

  Result solve() {
    Eigen::SelfAdjointEigenSolver<Mat> spec(m_);
    const double top = spec.eigenvalues().cwiseAbs().maxCoeff();
    const double c0 = top + 0.5;
    x_ = Mat::Identity(n_, n_) * c0;
    t_ = 1.5 * c0;
    mu_ = 0.1 * t_;

    Result best;
    best.primal = std::numeric_limits<double>::infinity();
    best.dual = 0.0;
    best.x = x_;

    int newton_total = 0;
    int weak_rounds = 0;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 90; ++round) {
      for (int step = 0; step < 20; ++step) {
        if (newton_total >= max_newton_) break;
        double decrement = 0.0;
        if (!newton_step(decrement)) {
          newton_total = max_newton_;
          break;
        }
        ++newton_total;
        if (decrement < 0.02) break;
      }
      harvest(best);
      best.iterations = newton_total;
      const double gap = best.primal - best.dual;
      if (gap <= tol_) {
        best.converged = true;
        return best;
      }
      weak_rounds = (prev_gap - gap < std::max(0.02 * gap, 1e-3 * tol_))
                        ? weak_rounds + 1
                        : 0;
      prev_gap = gap;
      if (weak_rounds >= 3 || newton_total >= max_newton_) return best;
      mu_ *= 0.12;
      if (mu_ < 1e-13 * (1.0 + best.primal)) return best;
    }
    return best;
  }

 private:
  bool barrier(const Mat& x, double t, double& value) const {
    Eigen::LLT<Mat> lp(Mat(x + m_)), lm(Mat(x - m_));
    if (lp.info() != Eigen::Success || lm.info() != Eigen::Success)
      return false;
    double logdet = 0.0;
    for (int i = 0; i < n_; ++i)
      logdet += std::log(lp.matrixLLT()(i, i)) + std::log(lm.matrixLLT()(i, i));
    logdet *= 2.0;
    double caps = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double s = t - x(i, i);
      if (s <= 0.0) return false;
      caps += std::log(s);
    }
    value = t / mu_ - logdet - caps;
    return true;
  }

  bool newton_step(double& decrement) {
    Eigen::LLT<Mat> lp(Mat(x_ + m_)), lm(Mat(x_ - m_));
    if (lp.info() != Eigen::Success || lm.info() != Eigen::Success)
      return false;
    const Mat ident = Mat::Identity(n_, n_);
    Mat wp = lp.solve(ident);
    Mat wm = lm.solve(ident);

    Vec s(n_);
    for (int i = 0; i < n_; ++i) {
      s(i) = t_ - x_(i, i);
      if (s(i) <= 0.0) return false;
    }

    Mat r = wp + wm;  // = -grad_X, up to the cap part
    for (int i = 0; i < n_; ++i) r(i, i) -= 1.0 / s(i);
    double rt = -(1.0 / mu_);
    for (int i = 0; i < n_; ++i) rt += 1.0 / s(i);

    // joint diagonalization of the two congruences
    Eigen::LLT<Mat> lltp(wp);
    if (lltp.info() != Eigen::Success) return false;
    Mat l = lltp.matrixL();
    Mat linv = l.triangularView<Eigen::Lower>().solve(ident);
    Mat cm = linv * wm * linv.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> eig(cm);
    if (eig.info() != Eigen::Success) return false;
    Vec d = eig.eigenvalues().cwiseMax(0.0);
    const Mat& u = eig.eigenvectors();
    Mat ymat = u.transpose() * linv;   // rows give the unit reps
    Mat tmat = ymat.transpose();       // back transform
    Mat cm1(n_, n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) cm1(a, b) = 1.0 / (1.0 + d(a) * d(b));

    auto base_solve = [&](const Mat& g) {
      Mat ghat = (ymat * g * ymat.transpose()).cwiseProduct(cm1);
      Mat dx = tmat * ghat * tmat.transpose();
      return Mat(0.5 * (dx + dx.transpose()));
    };

    // capacitance over diagonal units: rep of E_kk is y_k y_k^T
    Eigen::MatrixXd cap(n_, n_);
    for (int b = 0; b < n_; ++b) {
      const int cols = n_ - b;
      Mat matb = ymat.rightCols(cols);
      const Vec vb = ymat.col(b);
      for (int a = 0; a < cols; ++a) matb.col(a) = matb.col(a).cwiseProduct(vb);
      Mat tb = cm1 * matb;
      for (int a = 0; a < cols; ++a) cap(b + a, b) = matb.col(a).dot(tb.col(a));
    }
    {
      Eigen::MatrixXd full = cap.selfadjointView<Eigen::Lower>();
      cap = full;
    }
    Vec ct(n_);
    double htt = 0.0;
    for (int i = 0; i < n_; ++i) {
      ct(i) = 1.0 / (s(i) * s(i));
      htt += ct(i);
    }
    Eigen::MatrixXd kcap = cap;
    for (int a = 0; a < n_; ++a) kcap(a, a) += s(a) * s(a);
    Eigen::LDLT<Eigen::MatrixXd> kldlt(kcap);
    if (kldlt.info() != Eigen::Success) return false;

    auto solve_corrected = [&](const Mat& g) {
      Mat dx = base_solve(g);
      Vec q = kldlt.solve(dx.diagonal());
      Mat corr = base_solve(Mat(q.asDiagonal()));
      return Mat(dx - corr);
    };

    Mat ux = solve_corrected(r);
    Mat wx = solve_corrected(Mat(ct.asDiagonal()));
    const double denom = htt - ct.dot(wx.diagonal());
    if (!(denom > 0.0)) return false;
    const double dt = (rt + ct.dot(ux.diagonal())) / denom;
    Mat dx = ux + dt * wx;

    double dec2 = rt * dt + (r.cwiseProduct(dx)).sum();
    decrement = std::sqrt(std::max(dec2, 0.0));

    double f0;
    if (!barrier(x_, t_, f0)) return false;
    if (dec2 <= 1e-15 * (1.0 + std::abs(f0))) {
      decrement = 0.0;
      return true;
    }
    const double noise = 1e-12 * (1.0 + std::abs(f0));
    double alpha = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      Mat xn = x_ + alpha * dx;
      const double tn = t_ + alpha * dt;
      double fn;
      if (barrier(xn, tn, fn) && fn <= f0 - 1e-4 * alpha * dec2 + noise) {
        x_ = std::move(xn);
        t_ = tn;
        return true;
      }
      alpha *= 0.5;
    }
    return false;
  }

  void harvest(Result& best) const {
    double primal = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) primal = std::max(primal, x_(i, i));

    double dual = 0.0;
    Eigen::LLT<Mat> lp(Mat(x_ + m_)), lm(Mat(x_ - m_));
    if (lp.info() == Eigen::Success && lm.info() == Eigen::Success) {
      const Mat ident = Mat::Identity(n_, n_);
      Mat wp = lp.solve(ident);
      Mat wm = lm.solve(ident);
      // block form: S2 = (W- - W+)/2, lam = nu = diag(W+ + W-)/2
      Vec lam = 0.5 * (wp + wm).diagonal();
      Mat s2 = 0.5 * (wm - wp);
      Mat scaled = s2;
      for (int i = 0; i < n_; ++i) {
        const double root = std::sqrt(std::max(lam(i), 1e-300));
        scaled.row(i) /= root;
        scaled.col(i) /= root;
      }
      Eigen::BDCSVD<Mat> svd(scaled);
      const double sigma = std::max(svd.singularValues()(0), 1.0);
      dual = (2.0 * (s2.cwiseProduct(m_)).sum() / sigma) / (2.0 * lam.sum());
    }

    if (primal < best.primal) {
      best.primal = primal;
      best.x = x_;
    }
    best.dual = std::max(best.dual, dual);
  }

  Mat m_;
  int n_;
  double tol_;
  int max_newton_;
  Mat x_;
  double t_ = 0.0;
  double mu_ = 1.0;
};

// ------------------------------------------------------------------
// Barrier solver for the dual norm:
//     gamma2*(N) = max <C,Z> : Z psd, diag(Z) <= 1,
// C = [[0, conj(N)],[N^T, 0]]/2. Here the congruence inverse is closed
// form (dZ = Z G Z) and the diagonal-cap capacitance is |Z|^2 entrywise.
template <class Scalar>
class DualSolver {
  using Mat = typename Mats<Scalar>::Mat;
  using Vec = typename Mats<Scalar>::Vec;

 public:
  DualSolver(Mat nmat, double tol, int max_newton)
      : nin_(std::move(nmat)),
        n_(int(nin_.rows())),
        w_(int(nin_.cols())),
        nn_(n_ + w_),
        tol_(tol),
        max_newton_(max_newton) {
    c_.resize(nn_, nn_);
    c_.setZero();
    c_.topRightCorner(n_, w_) = Scalar(0.5) * nin_.conjugate();
    c_.bottomLeftCorner(w_, n_) = Scalar(0.5) * nin_.transpose();
  }

  struct Result {
    double upper = 0.0;  // certified: Sum lambda with Diag(lambda) >= C
    double lower = 0.0;  // certified: pairing at a feasible Z
    Mat z;               // best feasible point
    int iterations = 0;
    bool converged = false;
  };

  Result solve() {
    z_ = Mat::Identity(nn_, nn_) * Scalar(0.5);
    mu_ = 0.5;
    Result best;
    best.upper = std::numeric_limits<double>::infinity();
    best.lower = 0.0;
    best.z = z_;

    int newton_total = 0;
    int weak_rounds = 0;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 90; ++round) {
      for (int step = 0; step < 20; ++step) {
        if (newton_total >= max_newton_) break;
        double dec = 0.0;
        if (!newton_step(dec)) {
          newton_total = max_newton_;
          break;
        }
        ++newton_total;
        if (dec < 0.02) break;
      }
      harvest(best);
      best.iterations = newton_total;
      const double gap = best.upper - best.lower;
      if (gap <= tol_) {
        best.converged = true;
        return best;
      }
      weak_rounds = (prev_gap - gap < std::max(0.02 * gap, 1e-3 * tol_))
                        ? weak_rounds + 1
                        : 0;
      prev_gap = gap;
      if (weak_rounds >= 3 || newton_total >= max_newton_) return best;
      mu_ *= 0.12;
      if (mu_ < 1e-13 * (1.0 + std::abs(best.lower))) return best;
    }
    return best;
  }

 private:
  bool barrier(const Mat& z, double& value) const {
    Eigen::LLT<Mat> llt(z);
    if (llt.info() != Eigen::Success) return false;
    double logdet = 0.0;
    for (int i = 0; i < nn_; ++i)
      logdet += std::log(re(Scalar(llt.matrixLLT()(i, i))));
    logdet *= 2.0;
    double caps = 0.0;
    for (int i = 0; i < nn_; ++i) {
      const double s = 1.0 - re(Scalar(z(i, i)));
      if (s <= 0.0) return false;
      caps += std::log(s);
    }
    const double obj = dot_re(c_, z);
    value = -obj / mu_ - logdet - caps;
    return true;
  }

  bool newton_step(double& decrement) {
    Eigen::LLT<Mat> llt(z_);
    if (llt.info() != Eigen::Success) return false;
    Mat w = llt.solve(Mat::Identity(nn_, nn_));

    Eigen::VectorXd s(nn_);
    for (int i = 0; i < nn_; ++i) {
      s(i) = 1.0 - re(Scalar(z_(i, i)));
      if (s(i) <= 0.0) return false;
    }

    // r = -grad = C/mu + W - Diag(1/s)
    Mat r = c_ / Scalar(mu_) + w;
    for (int i = 0; i < nn_; ++i) r(i, i) -= Scalar(1.0 / s(i));

    Eigen::MatrixXd kcap = z_.cwiseAbs2();
    for (int i = 0; i < nn_; ++i) kcap(i, i) += s(i) * s(i);
    Eigen::LDLT<Eigen::MatrixXd> kldlt(kcap);
    if (kldlt.info() != Eigen::Success) return false;

    Mat dz0 = z_ * r * z_;
    Eigen::VectorXd p(nn_);
    for (int i = 0; i < nn_; ++i) p(i) = re(Scalar(dz0(i, i)));
    Eigen::VectorXd q = kldlt.solve(p);
    Mat zq = z_;
    for (int i = 0; i < nn_; ++i) zq.col(i) *= Scalar(q(i));
    Mat dz = dz0 - zq * z_;
    dz = Scalar(0.5) * (dz + dz.adjoint()).eval();

    double dec2 = dot_re(r, dz);
    decrement = std::sqrt(std::max(dec2, 0.0));

    double f0;
    if (!barrier(z_, f0)) return false;
    if (dec2 <= 1e-15 * (1.0 + std::abs(f0))) {
      decrement = 0.0;
      return true;
    }
    const double noise = 1e-12 * (1.0 + std::abs(f0));
    double alpha = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      Mat zn = z_ + Scalar(alpha) * dz;
      double fn;
      if (barrier(zn, fn) && fn <= f0 - 1e-4 * alpha * dec2 + noise) {
        z_ = std::move(zn);
        return true;
      }
      alpha *= 0.5;
    }
    return false;
  }

  double harvest(Result& best) const {
    const double lower = dot_re(c_, z_);

    // The barrier multipliers lambda = mu/s are dual feasible exactly on
    // the central path. Off the path only the profile is trusted: the
    // minimal feasible multiple of it is found by Cholesky bisection.
    Eigen::VectorXd prof(nn_);
    for (int i = 0; i < nn_; ++i) {
      const double s = 1.0 - re(Scalar(z_(i, i)));
      prof(i) = mu_ / std::max(s, 1e-300);
    }
    prof.array() += 1e-14 * prof.maxCoeff();
    auto feasible = [&](double c) {
      Mat e = -c_;
      for (int i = 0; i < nn_; ++i) e(i, i) += Scalar(c * prof(i));
      return Eigen::LLT<Mat>(e).info() == Eigen::Success;
    };
    double upper = std::numeric_limits<double>::infinity();
    double hi = 1.0;
    int grow = 0;
    while (!feasible(hi) && grow++ < 60) hi *= 2.0;
    if (grow < 60) {
      double lo = 0.0;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
      }
      upper = hi * prof.sum();
    }

    const double before = best.upper - best.lower;
    if (lower > best.lower) {
      best.lower = lower;
      best.z = z_;
    }
    best.upper = std::min(best.upper, upper);
    return before - (best.upper - best.lower);
  }

  Mat nin_, c_;
  int n_, w_, nn_;
  double tol_;
  int max_newton_;
  Mat z_;
  double mu_ = 1.0;
};

// Eigenfactor a PSD completion; rank threshold 1e-9 of the top eigenvalue.
void factor_completion(const CMat& z, int n, int w, CMat& row_factor,
                       CMat& col_factor) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(z);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  const double thresh = 1e-9 * top;
  std::vector<int> keep;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > thresh) keep.push_back(i);
  CMat f(n + w, int(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c)
    f.col(int(c)) = eig.eigenvectors().col(keep[c]) * std::sqrt(ev(keep[c]));
  row_factor = f.topRows(n);
  col_factor = f.bottomRows(w);
}

bool essentially_real(const CMat& m) {
  const double scale = max_abs(m);
  return m.imag().cwiseAbs().maxCoeff() <= 1e-14 * (scale + 1.0);
}

}  // namespace

nlohmann::json Gamma2Certificate::to_json() const {
  return {{"value", value},         {"dualValue", dual_value},
          {"gap", gap},             {"rank", rank()},
          {"iterations", iterations}, {"converged", converged}};
}

Gamma2Certificate gamma2_norm(const CMat& m, double tol) {
  require(m.rows() >= 1 && m.cols() >= 1, ErrorCode::InvalidArgument,
          "gamma2_norm: empty matrix");
  require(m.allFinite(), ErrorCode::InvalidArgument,
          "gamma2_norm: non-finite entries");
  require(tol > 0.0, ErrorCode::InvalidArgument, "gamma2_norm: tol <= 0");

  Gamma2Certificate cert;
  const double scale = max_abs(m);
  if (scale == 0.0) {
    cert.row_factor = CMat::Zero(m.rows(), 0);
    cert.col_factor = CMat::Zero(m.cols(), 0);
    return cert;
  }

  // The eliminated block carries the m^3-cost eigensolve; transpose so it
  // is the smaller side. gamma2 is transpose-invariant.
  const bool transposed = m.rows() < m.cols();
  CMat work = transposed ? CMat(m.transpose()) : m;
  work /= scale;
  const double wtol = tol / scale;
  const int max_newton = 420;

  double primal, dual;
  int iterations;
  bool converged;
  CMat z(work.rows() + work.cols(), work.rows() + work.cols());
  const bool realsym =
      essentially_real(work) && work.rows() == work.cols() &&
      (work - work.transpose()).cwiseAbs().maxCoeff() <= 1e-14;
  if (realsym) {
    SymNormSolver solver(work.real(), wtol, max_newton);
    auto res = solver.solve();
    primal = res.primal;
    dual = res.dual;
    iterations = res.iterations;
    converged = res.converged;
    RMat zr(z.rows(), z.cols());
    const int nr = int(work.rows());
    zr.topLeftCorner(nr, nr) = res.x;
    zr.topRightCorner(nr, nr) = work.real();
    zr.bottomLeftCorner(nr, nr) = work.real();
    zr.bottomRightCorner(nr, nr) = res.x;
    z = zr.cast<Complex>();
  } else if (essentially_real(work)) {
    NormSolver<double> solver(work.real(), wtol, max_newton);
    auto res = solver.solve();
    primal = res.primal;
    dual = res.dual;
    iterations = res.iterations;
    converged = res.converged;
    RMat zr(z.rows(), z.cols());
    zr.topLeftCorner(work.rows(), work.rows()) = res.x;
    zr.topRightCorner(work.rows(), work.cols()) = work.real();
    zr.bottomLeftCorner(work.cols(), work.rows()) = work.real().transpose();
    zr.bottomRightCorner(work.cols(), work.cols()) = res.y;
    z = zr.cast<Complex>();
  } else {
    NormSolver<Complex> solver(work, wtol, max_newton);
    auto res = solver.solve();
    primal = res.primal;
    dual = res.dual;
    iterations = res.iterations;
    converged = res.converged;
    z.topLeftCorner(work.rows(), work.rows()) = res.x;
    z.topRightCorner(work.rows(), work.cols()) = work;
    z.bottomLeftCorner(work.cols(), work.rows()) = work.adjoint();
    z.bottomRightCorner(work.cols(), work.cols()) = res.y;
  }

  CMat rf, cf;
  factor_completion(z, int(work.rows()), int(work.cols()), rf, cf);
  rf *= std::sqrt(scale);
  cf *= std::sqrt(scale);

  cert.value = primal * scale;
  cert.dual_value = std::max(dual, 0.0) * scale;
  cert.gap = cert.value - cert.dual_value;
  cert.iterations = iterations;
  cert.converged = converged;
  cert.row_factor = transposed ? cf : rf;
  cert.col_factor = transposed ? rf : cf;
  if (transposed) {
    cert.row_factor = cert.row_factor.conjugate();
    cert.col_factor = cert.col_factor.conjugate();
  }
  return cert;
}

Gamma2Certificate gamma2_dual(const CMat& nmat, double tol) {
  require(nmat.rows() >= 1 && nmat.cols() >= 1, ErrorCode::InvalidArgument,
          "gamma2_dual: empty matrix");
  require(nmat.allFinite(), ErrorCode::InvalidArgument,
          "gamma2_dual: non-finite entries");
  require(tol > 0.0, ErrorCode::InvalidArgument, "gamma2_dual: tol <= 0");

  Gamma2Certificate cert;
  const double scale = max_abs(nmat);
  const int n = int(nmat.rows()), w = int(nmat.cols());
  if (scale == 0.0) {
    cert.row_factor = CMat::Zero(n, 0);
    cert.col_factor = CMat::Zero(w, 0);
    cert.attaining = CMat::Zero(n, w);
    return cert;
  }
  CMat work = nmat / scale;
  const double wtol = tol / scale;
  const int max_newton = 420;

  CMat zbest;
  if (essentially_real(work)) {
    DualSolver<double> solver(work.real(), wtol, max_newton);
    auto res = solver.solve();
    cert.value = res.upper * scale;
    cert.dual_value = res.lower * scale;
    cert.iterations = res.iterations;
    cert.converged = res.converged;
    zbest = res.z.cast<Complex>();
  } else {
    DualSolver<Complex> solver(work, wtol, max_newton);
    auto res = solver.solve();
    cert.value = res.upper * scale;
    cert.dual_value = res.lower * scale;
    cert.iterations = res.iterations;
    cert.converged = res.converged;
    zbest = res.z;
  }
  cert.gap = cert.value - cert.dual_value;
  cert.attaining = zbest.topRightCorner(n, w);
  factor_completion(zbest, n, w, cert.row_factor, cert.col_factor);
  return cert;
}

FactorWitness extract_witness(const Gamma2Certificate& cert, const CMat& m,
                              double tol) {
  FactorWitness wit;
  wit.dim = cert.rank();
  require(cert.row_factor.rows() == m.rows() &&
              cert.col_factor.rows() == m.cols(),
          ErrorCode::InvalidArgument, "certificate does not match matrix");
  const CMat recon = cert.row_factor * cert.col_factor.adjoint();
  const double resid = max_abs(recon - m);
  const double allowed = tol * (1.0 + max_abs(m));
  require(resid <= allowed, ErrorCode::ToleranceNotMet,
          "witness reconstruction residual exceeds tolerance");
  wit.alpha = cert.col_factor.conjugate();
  wit.beta = cert.row_factor.conjugate();
  wit.sup_alpha = 0.0;
  for (int j = 0; j < wit.alpha.rows(); ++j)
    wit.sup_alpha = std::max(wit.sup_alpha, wit.alpha.row(j).norm());
  wit.sup_beta = 0.0;
  for (int i = 0; i < wit.beta.rows(); ++i)
    wit.sup_beta = std::max(wit.sup_beta, wit.beta.row(i).norm());
  return wit;
}

double brute_force_gamma2(const CMat& m, int starts, unsigned long seed) {
  require(m.rows() >= 1 && m.cols() >= 1 && m.rows() <= 3 && m.cols() <= 3,
          ErrorCode::InvalidArgument, "brute force oracle is for dims <= 3");
  const double scale = max_abs(m);
  if (scale == 0.0) return 0.0;

  const bool transposed = m.rows() < m.cols();
  CMat a = (transposed ? CMat(m.transpose()) : m) / scale;
  const int k = int(a.cols());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_c = [&]() {
    CMat c(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) c(i, j) = Complex(gauss(rng), gauss(rng));
    return c;
  };
  auto max_row_norm = [](const CMat& x) {
    double v = 0.0;
    for (int i = 0; i < x.rows(); ++i) v = std::max(v, x.row(i).norm());
    return v;
  };

  // An SVD split seeds the search with an always-valid factorization.
  double best;
  {
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec sq = svd.singularValues().cwiseSqrt();
    CMat r0 = svd.matrixU() * sq.asDiagonal();
    CMat c0 = svd.matrixV() * sq.asDiagonal();
    best = max_row_norm(r0) * max_row_norm(c0);
  }
  // adaptive random search: single-entry and full-matrix proposals with a
  // slowly shrinking radius
  auto descend = [&rng, &gauss](CMat& c, double& val, auto&& eval,
                                auto&& rand_full, double radius, int iters) {
    std::uniform_int_distribution<int> pick(0, int(c.size()) - 1);
    int fails = 0;
    for (int it = 0; it < iters && radius > 1e-10; ++it) {
      const double cscale = c.cwiseAbs().maxCoeff() + 1e-12;
      CMat prop = c;
      if (it % 3 == 0) {
        prop += (radius * cscale) * rand_full();
      } else {
        const int idx = pick(rng);
        prop.data()[idx] += radius * cscale * Complex(gauss(rng), gauss(rng));
      }
      const double f = eval(prop);
      if (f < val - 1e-15) {
        c = prop;
        val = f;
        fails = 0;
      } else if (++fails >= 16) {
        radius *= 0.7;
        fails = 0;
      }
    }
  };

  // objective along the parameterization R = M (C^*)^+; p < inf gives the
  // 2p-norm smoothing of the max row norm
  auto eval_p = [&](const CMat& c, double p) -> double {
    auto cod = c.adjoint().completeOrthogonalDecomposition();
    CMat r = a * cod.pseudoInverse();
    if ((r * c.adjoint() - a).cwiseAbs().maxCoeff() > 1e-9)
      return std::numeric_limits<double>::infinity();
    auto rownorm = [&](const CMat& x) {
      double top = 0.0;
      for (int i = 0; i < x.rows(); ++i) top = std::max(top, x.row(i).norm());
      if (!std::isfinite(p) || top == 0.0) return top;
      double acc = 0.0;
      for (int i = 0; i < x.rows(); ++i)
        acc += std::pow(x.row(i).norm() / top, 2.0 * p);
      return top * std::pow(acc, 0.5 / p);
    };
    return rownorm(r) * rownorm(c);
  };
  auto eval_c = [&](const CMat& c) {
    return eval_p(c, std::numeric_limits<double>::infinity());
  };

  // finite-difference Armijo descent on the smoothed objective
  auto fd_descend = [&](CMat& c, double p, int iters) {
    const int dim = int(c.size());
    double f0 = eval_p(c, p);
    if (!std::isfinite(f0)) return;
    for (int it = 0; it < iters; ++it) {
      const double scale_c = c.cwiseAbs().maxCoeff() + 1e-12;
      const double h = 1e-6 * scale_c;
      Eigen::VectorXd grad(2 * dim);
      for (int i = 0; i < dim; ++i) {
        for (int part = 0; part < 2; ++part) {
          const Complex delta = part == 0 ? Complex(h, 0) : Complex(0, h);
          CMat cp = c, cm = c;
          cp.data()[i] += delta;
          cm.data()[i] -= delta;
          grad(2 * i + part) = (eval_p(cp, p) - eval_p(cm, p)) / (2 * h);
        }
      }
      const double gn = grad.norm();
      if (gn < 1e-13 * (1.0 + f0)) break;
      double step = 0.1 * scale_c / gn;
      bool moved = false;
      for (int ls = 0; ls < 25; ++ls) {
        CMat cn = c;
        for (int i = 0; i < dim; ++i)
          cn.data()[i] -= step * Complex(grad(2 * i), grad(2 * i + 1));
        const double fn = eval_p(cn, p);
        if (fn < f0 - 1e-4 * step * gn * gn) {
          c = cn;
          f0 = fn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
  };

  CMat cbest;
  std::vector<std::pair<double, CMat>> leaders;
  for (int s = 0; s < starts; ++s) {
    CMat c = (s % 4 == 3 && cbest.size())
                 ? CMat(cbest + 0.15 * random_c())
                 : random_c();
    // alternating row-wise minimum-norm updates give a balanced feasible
    // starting point
    for (int it = 0; it < 60; ++it) {
      auto codc = c.adjoint().completeOrthogonalDecomposition();
      CMat r = a * codc.pseudoInverse();
      if ((r * c.adjoint() - a).cwiseAbs().maxCoeff() > 1e-9) break;
      auto codr = r.completeOrthogonalDecomposition();
      CMat cn = (codr.pseudoInverse() * a).adjoint();
      if ((cn - c).cwiseAbs().maxCoeff() < 1e-12) {
        c = cn;
        break;
      }
      c = cn;
    }
    double val = eval_c(c);
    if (!std::isfinite(val)) continue;

    // adaptive random descent on the max-row-norm product
    descend(c, val, eval_c, random_c, 0.3, 1200);
    if (val < best) {
      best = val;
      cbest = c;
    }
    leaders.emplace_back(val, c);
    std::sort(leaders.begin(), leaders.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    if (leaders.size() > 3) leaders.resize(3);
  }

  // smoothing homotopy plus exact-max polish from the leading candidates
  for (auto& [lval, lc] : leaders) {
    CMat c = lc;
    for (double p : {4.0, 16.0, 64.0}) fd_descend(c, p, 120);
    double val = eval_c(c);
    descend(c, val, eval_c, random_c, 0.02, 6000);
    if (std::isfinite(val)) best = std::min(best, val);
  }
  return best * scale;
}

}  // namespace g2k
