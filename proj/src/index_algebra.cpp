#include "symmorse/index_algebra.hpp"

#include <string>

#include "symmorse/error.hpp"

namespace symmorse {

QForm q_form(const LagrangianFrame& alpha, const LagrangianFrame& beta, const LagrangianFrame& delta,
             const Tolerances& tol) {
  if (alpha.n() != beta.n() || alpha.n() != delta.n()) {
    throw ArgumentError("q_form: frames of different dimension");
  }
  const Mat& b = beta.basis();
  const Mat& d = delta.basis();
  const Mat span_bd = linalg::sum_spans(b, d, tol.int_tol);
  QForm out;
  out.domain_basis = linalg::intersect_spans(alpha.basis(), span_bd, tol.int_tol);
  const Eigen::Index m = out.domain_basis.cols();
  out.gram = Mat::Zero(m, m);
  if (m == 0) return out;

  Mat stacked(b.rows(), b.cols() + d.cols());
  stacked << b, d;
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol.int_tol);
  const Mat coeffs = svd.solve(out.domain_basis);
  const Mat ys = b * coeffs.topRows(b.cols());
  const Mat zs = d * coeffs.bottomRows(d.cols());
  out.max_residual = linalg::max_abs(ys + zs - out.domain_basis);
  if (out.max_residual > tol.decomp_tol) {
    throw NumericError("q_form: splitting x = y + z failed, residual " + std::to_string(out.max_residual));
  }
  const Mat jy = standard_j(alpha.n()) * ys;
  const Mat g = jy.transpose() * zs;
  out.asymmetry = linalg::max_abs(g - g.transpose());
  out.gram = linalg::symmetric_part(g);
  return out;
}

InertiaTriple inertia(const Mat& symmetric, const Tolerances& tol) {
  InertiaTriple out;
  if (symmetric.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetric, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  const double band = tol.eig_zero_tol * (ev.cwiseAbs().maxCoeff() + 1.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > band) {
      ++out.pos;
    } else if (ev(i) < -band) {
      ++out.neg;
    } else {
      ++out.null;
    }
  }
  return out;
}

int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta, const LagrangianFrame& kappa,
                 const Tolerances& tol) {
  const QForm q = q_form(alpha, beta, kappa, tol);
  const int m_plus = inertia(q.gram, tol).pos;
  const Mat ak = linalg::intersect_spans(alpha.basis(), kappa.basis(), tol.int_tol);
  const Mat ab = linalg::intersect_spans(alpha.basis(), beta.basis(), tol.int_tol);
  const Mat abk = linalg::intersect_spans(ab, kappa.basis(), tol.int_tol);
  return m_plus + static_cast<int>(ak.cols()) - static_cast<int>(abk.cols());
}

int hormander_index(const LagrangianFrame& l0, const LagrangianFrame& l1, const LagrangianFrame& v0,
                    const LagrangianFrame& v1, const Tolerances& tol) {
  return triple_index(l0, l1, v1, tol) - triple_index(l0, l1, v0, tol);
}

int hormander_index_alt(const LagrangianFrame& l0, const LagrangianFrame& l1, const LagrangianFrame& v0,
                        const LagrangianFrame& v1, const Tolerances& tol) {
  return triple_index(l0, v0, v1, tol) - triple_index(l1, v0, v1, tol);
}

}  // namespace symmorse
