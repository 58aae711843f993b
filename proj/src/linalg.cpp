#include "symmorse/linalg.hpp"

#include <algorithm>

namespace symmorse::linalg {

namespace {

Eigen::JacobiSVD<Mat> full_svd(const Mat& a, int options) { return Eigen::JacobiSVD<Mat>(a, options); }

int count_above(const Vec& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double top = sv.maxCoeff();
  if (top <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * top) ++r;
  }
  return r;
}

}  // namespace

Mat orthonormal_basis(const Mat& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  auto svd = full_svd(a, Eigen::ComputeThinU);
  const int r = count_above(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& a, double rel_tol) {
  if (a.cols() == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  auto svd = full_svd(a, Eigen::ComputeFullV);
  const int r = count_above(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(a.cols() - r);
}

Mat intersect_spans(const Mat& a, const Mat& b, double rel_tol) {
  const Eigen::Index rows = a.rows();
  if (a.cols() == 0 || b.cols() == 0) return Mat(rows, 0);
  Mat stacked(rows, a.cols() + b.cols());
  stacked << a, -b;
  const Mat kernel = null_space(stacked, rel_tol);
  if (kernel.cols() == 0) return Mat(rows, 0);
  // Average the two representations of each kernel vector; both lie in the intersection.
  const Mat from_a = a * kernel.topRows(a.cols());
  const Mat from_b = b * kernel.bottomRows(b.cols());
  return orthonormal_basis(0.5 * (from_a + from_b), rel_tol);
}

Mat sum_spans(const Mat& a, const Mat& b, double rel_tol) {
  Mat stacked(a.rows(), a.cols() + b.cols());
  stacked << a, b;
  return orthonormal_basis(stacked, rel_tol);
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

int rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  auto svd = full_svd(a, 0);
  return count_above(svd.singularValues(), rel_tol);
}

Mat symmetric_part(const Mat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace symmorse::linalg
