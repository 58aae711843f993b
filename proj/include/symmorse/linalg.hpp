#pragma once

#include <Eigen/Dense>

namespace symmorse {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace linalg {

/// Orthonormal basis of the column space of `a`; singular values at or below
/// rel_tol * sigma_max are treated as zero. Returns a rows x 0 matrix for the zero span.
Mat orthonormal_basis(const Mat& a, double rel_tol);

/// Orthonormal basis of the null space of `a` with the same relative threshold.
Mat null_space(const Mat& a, double rel_tol);

/// Intersection of two spans given by orthonormal bases, via the null space of [a, -b].
Mat intersect_spans(const Mat& a, const Mat& b, double rel_tol);

/// Orthonormal basis of span(a) + span(b).
Mat sum_spans(const Mat& a, const Mat& b, double rel_tol);

double max_abs(const Mat& a);

/// Numerical rank with a relative singular-value threshold.
int rank(const Mat& a, double rel_tol);

/// Symmetric part (a + a^T) / 2.
Mat symmetric_part(const Mat& a);

}  // namespace linalg
}  // namespace symmorse
