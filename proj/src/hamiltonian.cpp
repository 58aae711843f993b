#include "symmorse/hamiltonian.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symmorse/error.hpp"

namespace symmorse {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

lapack_logical select_left(const double* re, const double*) { return *re < 0.0; }
lapack_logical select_right(const double* re, const double*) { return *re > 0.0; }

// Leading Schur vectors for the eigenvalues picked by `select`.
Mat ordered_schur_basis(const Mat& a, LAPACK_D_SELECT2 select, int expected) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Mat t = a;
  Mat z(n, n);
  std::vector<double> wr(n), wi(n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select, n, t.data(), n, &sdim, wr.data(),
                                        wi.data(), z.data(), n);
  if (info != 0) throw NumericError("ordered Schur decomposition failed (dgees info " + std::to_string(info) + ")");
  if (sdim != expected) {
    throw NumericError("spectral subspace has dimension " + std::to_string(sdim) + ", expected " +
                       std::to_string(expected));
  }
  return z.leftCols(sdim);
}

double max_abs_real(const Eigen::VectorXcd& ev) {
  double m = inf;
  for (Eigen::Index i = 0; i < ev.size(); ++i) m = std::min(m, std::abs(ev(i).real()));
  return m;
}

}  // namespace

HamiltonianAt assemble_B(const Mat& P, const Mat& Q, const Mat& R, double lambda, double t) {
  const Eigen::Index n = P.rows();
  Eigen::FullPivLU<Mat> lu(P);
  if (!lu.isInvertible()) throw NumericError("assemble_B: P(t) is singular");
  const Mat pinv = lu.inverse();
  const Mat pinv_q = pinv * Q;
  HamiltonianAt h;
  h.t = t;
  h.lambda = lambda;
  h.B.resize(2 * n, 2 * n);
  h.B.topLeftCorner(n, n) = pinv;
  h.B.topRightCorner(n, n) = -pinv_q;
  h.B.bottomLeftCorner(n, n) = -Q.transpose() * pinv;
  h.B.bottomRightCorner(n, n) = Q.transpose() * pinv_q - R - lambda * Mat::Identity(n, n);
  h.B = linalg::symmetric_part(h.B);
  h.JB.resize(2 * n, 2 * n);
  h.JB.topRows(n) = -h.B.bottomRows(n);
  h.JB.bottomRows(n) = h.B.topRows(n);
  return h;
}

HamiltonianAt assemble_B(const CoefficientSystem& sys, double t, double lambda) {
  return assemble_B(sys.P_at(t), sys.Q_at(t), sys.R_at(t), lambda, t);
}

Hyperbolicity is_hyperbolic(const HamiltonianAt& h, const Tolerances& tol) {
  Eigen::EigenSolver<Mat> es(h.JB, false);
  Hyperbolicity out;
  out.margin = max_abs_real(es.eigenvalues());
  out.hyperbolic = out.margin > tol.hyp_tol;
  return out;
}

Hyperbolicity det_criterion(const Mat& P, const Mat& Q, const Mat& R, const Tolerances& tol) {
  const Eigen::Index n = P.rows();
  Eigen::FullPivLU<Mat> lu(P);
  if (!lu.isInvertible()) throw NumericError("det_criterion: P is singular");
  const Mat k = Q.transpose() - Q;
  // (v, w = mu v):  mu w = P^-1 (R v + K w).
  Mat c = Mat::Zero(2 * n, 2 * n);
  c.topRightCorner(n, n) = Mat::Identity(n, n);
  c.bottomLeftCorner(n, n) = lu.solve(R);
  c.bottomRightCorner(n, n) = lu.solve(k);
  Eigen::EigenSolver<Mat> es(c, false);
  Hyperbolicity out;
  out.margin = max_abs_real(es.eigenvalues());
  out.hyperbolic = out.margin > tol.hyp_tol;
  return out;
}

double threshold_identity_shift(const CoefficientSystem& sys) { return sys.C2 * sys.C2 / sys.C1 + sys.C3; }

double threshold_nondegeneracy(const CoefficientSystem& sys) { return 2.0 * sys.C2 * sys.C2 / sys.C1 + sys.C3; }

double threshold_boundary(const CoefficientSystem& sys, double C0) {
  return 2.0 * (sys.C2 + C0) * (sys.C2 + C0) / sys.C1 + sys.C3;
}

BoundaryData boundary_constant(const LagrangianFrame& l0, const Tolerances& tol) {
  const int n = l0.n();
  const Mat y = l0.basis().topRows(n);
  const Mat x = l0.basis().bottomRows(n);
  BoundaryData out;
  out.V = linalg::orthonormal_basis(x, tol.int_tol);
  const Eigen::Index k = out.V.cols();
  out.A = Mat::Zero(k, k);
  if (k == 0) return out;
  // X c = V, then (Y c, V) are the pairs (y, x) of L0 over the basis of V.
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol.int_tol);
  const Mat c = svd.solve(out.V);
  out.A = linalg::symmetric_part(out.V.transpose() * (y * c));
  Eigen::SelfAdjointEigenSolver<Mat> es(out.A, Eigen::EigenvaluesOnly);
  out.C0 = es.eigenvalues().cwiseAbs().maxCoeff();
  return out;
}

SpectralSubspaces spectral_subspaces(const HamiltonianAt& h, const Tolerances& tol) {
  const Hyperbolicity hyp = is_hyperbolic(h, tol);
  if (!hyp.hyperbolic) {
    std::ostringstream msg;
    msg << "spectral_subspaces: JB is not hyperbolic at t=" << h.t << ", lambda=" << h.lambda << " (margin "
        << hyp.margin << ")";
    throw NumericError(msg.str());
  }
  const int n = static_cast<int>(h.JB.rows() / 2);
  Mat plus = ordered_schur_basis(h.JB, select_right, n);
  Mat minus = ordered_schur_basis(h.JB, select_left, n);
  try {
    return SpectralSubspaces{LagrangianFrame(plus, tol), LagrangianFrame(minus, tol)};
  } catch (const ValidationError& e) {
    throw NumericError(std::string("spectral subspace is not Lagrangian: ") + e.what());
  }
}

LagrangianFrame stable_limit(const CoefficientSystem& sys, double lambda, const Tolerances& tol) {
  return spectral_subspaces(assemble_B(sys, inf, lambda), tol).minus;
}

LagrangianFrame unstable_limit(const CoefficientSystem& sys, double lambda, const Tolerances& tol) {
  return spectral_subspaces(assemble_B(sys, -inf, lambda), tol).plus;
}

GraphMatrices graph_matrices_MN(const CoefficientSystem& sys, double lambda, const Tolerances& tol) {
  return GraphMatrices{graph_matrix(stable_limit(sys, lambda, tol), tol),
                       graph_matrix(unstable_limit(sys, lambda, tol), tol)};
}

double tail_bound(const CoefficientSystem& sys, double lambda, double T) {
  const Mat bp = assemble_B(sys, inf, lambda).B;
  const Mat bm = assemble_B(sys, -inf, lambda).B;
  return std::max((assemble_B(sys, T, lambda).B - bp).norm(), (assemble_B(sys, -T, lambda).B - bm).norm());
}

Truncation truncation_time(const CoefficientSystem& sys, double lambda, const Tolerances& tol, double t_max) {
  const double step = 0.25;
  const Mat bp = assemble_B(sys, inf, lambda).B;
  const Mat bm = assemble_B(sys, -inf, lambda).B;
  double last_bad = -1.0;
  double tail = 0.0;
  std::vector<double> bounds;
  for (double t = 0.0; t <= t_max + 1e-12; t += step) {
    const double b = std::max((assemble_B(sys, t, lambda).B - bp).norm(), (assemble_B(sys, -t, lambda).B - bm).norm());
    bounds.push_back(b);
    if (!(b <= tol.limit_tol)) last_bad = t;
  }
  if (last_bad + step > t_max) {
    std::ostringstream msg;
    msg << "coefficients do not settle to their limits within limit_tol=" << tol.limit_tol << " before t=" << t_max;
    throw NumericError(msg.str());
  }
  Truncation out;
  out.T = std::max(step, last_bad + step);
  const std::size_t first = static_cast<std::size_t>(std::llround(out.T / step));
  for (std::size_t i = first; i < bounds.size(); ++i) tail = std::max(tail, bounds[i]);
  out.tail = tail;
  return out;
}

std::vector<double> tau_grid(double T, double max_spacing) {
  if (!(T > 0.0) || !(max_spacing > 0.0)) throw ArgumentError("tau_grid: T and spacing must be positive");
  const int intervals = std::max(1, static_cast<int>(std::ceil(T / max_spacing - 1e-12)));
  std::vector<double> tau(intervals + 1);
  for (int k = 0; k <= intervals; ++k) tau[k] = T * k / intervals;
  tau.back() = T;
  return tau;
}

namespace {

class FrameIntegrator {
 public:
  FrameIntegrator(const CoefficientSystem& sys, double lambda, const Tolerances& tol)
      : sys_(sys), lambda_(lambda), tol_(tol) {}

  // Advances the span of z from t0 to t1 with RK4 and per-step QR.
  long advance(Mat& z, double t0, double t1) {
    const double len = std::abs(t1 - t0);
    const double rate = std::max({jb(t0).norm(), jb(0.5 * (t0 + t1)).norm(), jb(t1).norm()});
    const long m = std::max(1L, static_cast<long>(std::ceil(len * rate / tol_.rk4_step_factor)));
    const double h = (t1 - t0) / static_cast<double>(m);
    Mat a0 = jb(t0);
    for (long k = 0; k < m; ++k) {
      const double t = t0 + h * static_cast<double>(k);
      const double tn = k + 1 == m ? t1 : t + h;
      const Mat am = jb(t + 0.5 * h);
      const Mat a1 = jb(tn);
      const Mat k1 = a0 * z;
      const Mat k2 = am * (z + 0.5 * h * k1);
      const Mat k3 = am * (z + 0.5 * h * k2);
      const Mat k4 = a1 * (z + h * k3);
      z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      reorthonormalize(z, tn);
      a0 = a1;
    }
    return m;
  }

 private:
  Mat jb(double t) const { return assemble_B(sys_, t, lambda_).JB; }

  void reorthonormalize(Mat& z, double t) const {
    Eigen::HouseholderQR<Mat> qr(z);
    const Mat r = qr.matrixQR().topRows(z.cols()).triangularView<Eigen::Upper>();
    const Vec d = r.diagonal().cwiseAbs();
    if (!z.allFinite() || d.minCoeff() <= 1e-12 * d.maxCoeff()) {
      std::ostringstream msg;
      msg << "bundle frame degenerated (rank loss) at t=" << t;
      throw NumericError(msg.str());
    }
    z = qr.householderQ() * Mat::Identity(z.rows(), z.cols());
  }

  const CoefficientSystem& sys_;
  double lambda_;
  const Tolerances& tol_;
};

}  // namespace

std::vector<Mat> transport_frames(const CoefficientSystem& sys, double lambda, const Mat& start, double t_start,
                                  const std::vector<double>& times, const Tolerances& tol, long* steps) {
  std::vector<Mat> out;
  out.reserve(times.size());
  FrameIntegrator integ(sys, lambda, tol);
  Mat z = start;
  double t = t_start;
  long total = 0;
  for (double target : times) {
    if (target != t) total += integ.advance(z, t, target);
    t = target;
    out.push_back(z);
  }
  if (steps) *steps = total;
  return out;
}

InvariantBundle bundle(const CoefficientSystem& sys, double lambda, BundleKind kind, const std::vector<double>& tau,
                       const Tolerances& tol) {
  if (tau.size() < 2 || tau.front() != 0.0) throw ArgumentError("bundle: tau grid must start at 0");
  for (std::size_t k = 1; k < tau.size(); ++k) {
    if (!(tau[k] > tau[k - 1])) throw ArgumentError("bundle: tau grid must be increasing");
  }
  const double T = tau.back();
  const bool stable = kind == BundleKind::stable;
  const LagrangianFrame limit = stable ? stable_limit(sys, lambda, tol) : unstable_limit(sys, lambda, tol);
  const double t_end = stable ? T : -T;
  const SpectralSubspaces at_end = spectral_subspaces(assemble_B(sys, t_end, lambda), tol);
  const double limit_gap = subspace_gap(stable ? at_end.minus : at_end.plus, limit);

  InvariantBundle out{kind, lambda, T, LagrangianPath{}, limit, limit_gap, 0.0, 0};
  // Integrate from the far end toward tau = 0: backward in t for the stable bundle,
  // forward (from -T) for the unstable one.
  std::vector<double> times;
  for (std::size_t k = tau.size(); k-- > 0;) times.push_back(stable ? tau[k] : -tau[k]);
  std::vector<Mat> frames = transport_frames(sys, lambda, limit.basis(), t_end, times, tol, &out.steps);
  std::reverse(frames.begin(), frames.end());
  out.path.t = tau;
  out.path.frames.reserve(frames.size());
  const Mat j = standard_j(sys.n);
  for (auto& f : frames) {
    const double defect = linalg::max_abs(f.transpose() * j * f);
    out.max_isotropy = std::max(out.max_isotropy, defect);
    if (defect > tol.iso_tol) {
      throw NumericError("bundle frame lost isotropy (defect " + std::to_string(defect) + ")");
    }
    out.path.frames.push_back(frame_from_orthonormal(std::move(f)));
  }
  return out;
}

}  // namespace symmorse
