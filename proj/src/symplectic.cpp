#include "symmorse/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "symmorse/error.hpp"

namespace symmorse {

Mat standard_j(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

namespace {

// J x for x = (p, q) is (-q, p).
Mat apply_j(const Mat& x) {
  const Eigen::Index n = x.rows() / 2;
  Mat out(x.rows(), x.cols());
  out.topRows(n) = -x.bottomRows(n);
  out.bottomRows(n) = x.topRows(n);
  return out;
}

}  // namespace

double omega(const Vec& u, const Vec& v) {
  if (u.size() != v.size() || u.size() % 2 != 0 || u.size() == 0) {
    throw ArgumentError("omega: vectors must share an even, positive dimension (got " +
                        std::to_string(u.size()) + " and " + std::to_string(v.size()) + ")");
  }
  const Vec ju = apply_j(u);
  return ju.dot(v);
}

LagrangianFrame::LagrangianFrame(const Mat& columns, const Tolerances& tol) {
  const Eigen::Index n = columns.cols();
  if (n < 1 || columns.rows() != 2 * n) {
    throw ValidationError("Lagrangian frame must be 2n x n with n >= 1 (got " +
                          std::to_string(columns.rows()) + " x " + std::to_string(n) + ")");
  }
  if (!columns.allFinite()) throw ValidationError("Lagrangian frame has non-finite entries");
  Eigen::JacobiSVD<Mat> svd(columns);
  const Vec& sv = svd.singularValues();
  const double smax = sv.maxCoeff();
  const double smin = sv.minCoeff();
  if (!(smax > 0.0) || smin <= tol.rank_tol * smax) {
    throw ValidationError("Lagrangian frame is rank deficient");
  }
  if (smax / smin > tol.cond_max) {
    throw ValidationError("Lagrangian frame is ill-conditioned (condition number " +
                          std::to_string(smax / smin) + ")");
  }
  Eigen::HouseholderQR<Mat> qr(columns);
  basis_ = qr.householderQ() * Mat::Identity(2 * n, n);
  const double defect = isotropy_defect();
  if (defect > tol.iso_tol) {
    throw ValidationError("frame is not isotropic: max |F^T J F| = " + std::to_string(defect));
  }
}

double LagrangianFrame::isotropy_defect() const {
  return linalg::max_abs(basis_.transpose() * apply_j(basis_));
}

LagrangianFrame frame_from_orthonormal(Mat basis) {
  return LagrangianFrame(LagrangianFrame::Trusted{}, std::move(basis));
}

LagrangianFrame dirichlet_frame(int n) {
  if (n < 1) throw ArgumentError("dimension must be positive");
  Mat f = Mat::Zero(2 * n, n);
  f.topRows(n) = Mat::Identity(n, n);
  return frame_from_orthonormal(std::move(f));
}

LagrangianFrame neumann_frame(int n) {
  if (n < 1) throw ArgumentError("dimension must be positive");
  Mat f = Mat::Zero(2 * n, n);
  f.bottomRows(n) = Mat::Identity(n, n);
  return frame_from_orthonormal(std::move(f));
}

LagrangianFrame graph_frame(const Mat& s, const Tolerances& tol) {
  const Eigen::Index n = s.rows();
  if (n < 1 || s.cols() != n) throw ArgumentError("graph_frame: S must be square");
  Mat f(2 * n, n);
  f.topRows(n) = s;
  f.bottomRows(n) = Mat::Identity(n, n);
  return LagrangianFrame(f, tol);
}

SubspaceIntersection intersect(const LagrangianFrame& a, const LagrangianFrame& b,
                               const Tolerances& tol) {
  if (a.n() != b.n()) throw ArgumentError("intersect: frames of different dimension");
  SubspaceIntersection out;
  out.basis = linalg::intersect_spans(a.basis(), b.basis(), tol.int_tol);
  out.dim = static_cast<int>(out.basis.cols());
  return out;
}

bool is_transversal(const LagrangianFrame& a, const LagrangianFrame& b, const Tolerances& tol) {
  return intersect(a, b, tol).dim == 0;
}

Mat graph_matrix(const LagrangianFrame& a, const Tolerances& tol) {
  const int n = a.n();
  const Mat top = a.basis().topRows(n);
  const Mat bottom = a.basis().bottomRows(n);
  Eigen::JacobiSVD<Mat> svd(bottom);
  if (svd.singularValues().minCoeff() <= tol.int_tol) {
    throw NumericError("graph_matrix: precondition failed, frame is not transversal to L_D");
  }
  const Mat m = bottom.transpose().partialPivLu().solve(top.transpose()).transpose();
  const double defect = linalg::max_abs(m - m.transpose());
  if (defect > tol.iso_tol * std::max(1.0, linalg::max_abs(m))) {
    throw NumericError("graph_matrix: graph is not symmetric (defect " + std::to_string(defect) + ")");
  }
  return linalg::symmetric_part(m);
}

double transversality_margin(const LagrangianFrame& a, const LagrangianFrame& b) {
  // [a, Ja] is an orthonormal basis of R^{2n}; the sines of the principal angles
  // between a and b are the singular values of (Ja)^T b.
  const Mat c = apply_j(a.basis()).transpose() * b.basis();
  return Eigen::JacobiSVD<Mat>(c).singularValues().minCoeff();
}

double subspace_gap(const LagrangianFrame& a, const LagrangianFrame& b) {
  const Mat c = apply_j(a.basis()).transpose() * b.basis();
  return Eigen::JacobiSVD<Mat>(c).singularValues().maxCoeff();
}

Vec principal_angles(const LagrangianFrame& a, const LagrangianFrame& b) {
  const Mat cosines = a.basis().transpose() * b.basis();
  const Mat sines = apply_j(a.basis()).transpose() * b.basis();
  // Use the sine side for small angles and the cosine side for large ones.
  Vec c = Eigen::JacobiSVD<Mat>(cosines).singularValues();  // descending
  Vec s = Eigen::JacobiSVD<Mat>(sines).singularValues();    // descending
  const Eigen::Index n = c.size();
  Vec angles(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sine = s(n - 1 - i);
    const double cosine = c(i);
    angles(i) = std::atan2(std::min(1.0, sine), std::min(1.0, cosine));
  }
  std::sort(angles.data(), angles.data() + n);
  return angles;
}

LagrangianFrame apply(const Mat& symplectic, const LagrangianFrame& a, const Tolerances& tol) {
  if (symplectic.rows() != 2 * a.n() || symplectic.cols() != 2 * a.n()) {
    throw ArgumentError("apply: symplectic matrix has the wrong size");
  }
  return LagrangianFrame(symplectic * a.basis(), tol);
}

Mat random_symmetric(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Mat s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      s(i, j) = normal(rng);
      s(j, i) = s(i, j);
    }
  }
  return s;
}

Mat random_symplectic(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> stretch(0.5, 2.0);
  Mat upper = Mat::Identity(2 * n, 2 * n);
  upper.topRightCorner(n, n) = random_symmetric(rng, n, 0.7);
  Mat lower = Mat::Identity(2 * n, 2 * n);
  lower.bottomLeftCorner(n, n) = random_symmetric(rng, n, 0.7);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat orth = qr.householderQ();
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = stretch(rng);
  const Mat gmat = orth * d.asDiagonal();
  Mat diag = Mat::Zero(2 * n, 2 * n);
  diag.topLeftCorner(n, n) = gmat;
  diag.bottomRightCorner(n, n) = gmat.inverse().transpose();
  return upper * lower * diag;
}

LagrangianFrame random_lagrangian(std::mt19937_64& rng, int n) {
  // X + iY unitary makes [X; Y] an orthonormal Lagrangian frame.
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  const Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Mat f(2 * n, n);
  f.topRows(n) = u.real();
  f.bottomRows(n) = u.imag();
  return LagrangianFrame(f);
}

}  // namespace symmorse
