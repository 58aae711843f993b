#include "symmorse/coefficients.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "symmorse/error.hpp"

namespace symmorse {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Mat evaluate_checked(const MatrixFunction& f, double t, int n, const char* which) {
  Mat m = f(t);
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream msg;
    msg << which << "(t) must be " << n << "x" << n;
    throw ValidationError(msg.str());
  }
  return m;
}

Mat limit_of(const MatrixFunction& f, int n, double sign, const char* which, const Tolerances& tol) {
  Mat at_inf = evaluate_checked(f, sign * inf, n, which);
  if (at_inf.allFinite()) return at_inf;
  Mat prev = evaluate_checked(f, sign * 25.0, n, which);
  for (double t = 50.0; t <= 1600.0; t *= 2.0) {
    Mat cur = evaluate_checked(f, sign * t, n, which);
    if (prev.allFinite() && cur.allFinite() && (cur - prev).norm() <= tol.limit_tol * std::max(1.0, cur.norm())) {
      return cur;
    }
    prev = std::move(cur);
  }
  std::ostringstream msg;
  msg << which << "(t) has no limit as t -> " << (sign > 0 ? "+inf" : "-inf");
  throw ValidationError(msg.str());
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

}  // namespace

Mat CoefficientSystem::P_at(double t) const {
  if (std::isinf(t)) return t > 0 ? P_plus : P_minus;
  return P(t);
}

Mat CoefficientSystem::Q_at(double t) const {
  if (std::isinf(t)) return t > 0 ? Q_plus : Q_minus;
  return Q(t);
}

Mat CoefficientSystem::R_at(double t) const {
  if (std::isinf(t)) return t > 0 ? R_plus : R_minus;
  return R(t);
}

CoefficientSystem make_system(std::string name, int n, MatrixFunction P, MatrixFunction Q, MatrixFunction R,
                              double C1, double C2, double C3, bool f2_declared, const Tolerances& tol) {
  if (n < 1) throw ValidationError("system dimension must be positive");
  if (!(C1 > 0.0) || !(C2 >= 0.0) || !(C3 >= 0.0)) {
    throw ValidationError("constants must satisfy C1 > 0, C2 >= 0, C3 >= 0");
  }
  CoefficientSystem sys;
  sys.name = std::move(name);
  sys.n = n;
  sys.P = std::move(P);
  sys.Q = std::move(Q);
  sys.R = std::move(R);
  sys.C1 = C1;
  sys.C2 = C2;
  sys.C3 = C3;
  sys.f2_declared = f2_declared;
  sys.P_minus = limit_of(sys.P, n, -1.0, "P", tol);
  sys.P_plus = limit_of(sys.P, n, 1.0, "P", tol);
  sys.Q_minus = limit_of(sys.Q, n, -1.0, "Q", tol);
  sys.Q_plus = limit_of(sys.Q, n, 1.0, "Q", tol);
  sys.R_minus = limit_of(sys.R, n, -1.0, "R", tol);
  sys.R_plus = limit_of(sys.R, n, 1.0, "R", tol);
  return sys;
}

std::vector<CheckItem> validate_system(const CoefficientSystem& sys, double T, int samples, const Tolerances& tol) {
  const double slack = 1e-9;
  double worst_sym_p = 0, worst_sym_r = 0, min_sv_p = inf, max_q = 0, max_r = 0, min_eig_p = inf;
  bool finite = true;
  double where_p = 0, where_q = 0, where_r = 0;
  if (samples < 2) samples = 2;
  auto visit = [&](double t) {
    const Mat p = sys.P_at(t);
    const Mat q = sys.Q_at(t);
    const Mat r = sys.R_at(t);
    if (!p.allFinite() || !q.allFinite() || !r.allFinite()) {
      finite = false;
      return;
    }
    worst_sym_p = std::max(worst_sym_p, linalg::max_abs(p - p.transpose()) / std::max(1.0, linalg::max_abs(p)));
    worst_sym_r = std::max(worst_sym_r, linalg::max_abs(r - r.transpose()) / std::max(1.0, linalg::max_abs(r)));
    Eigen::JacobiSVD<Mat> sp(p);
    if (sp.singularValues().minCoeff() < min_sv_p) {
      min_sv_p = sp.singularValues().minCoeff();
      where_p = t;
    }
    const double qn = q.size() ? Eigen::JacobiSVD<Mat>(q).singularValues()(0) : 0.0;
    if (qn > max_q) {
      max_q = qn;
      where_q = t;
    }
    const double rn = Eigen::JacobiSVD<Mat>(r).singularValues()(0);
    if (rn > max_r) {
      max_r = rn;
      where_r = t;
    }
    Eigen::SelfAdjointEigenSolver<Mat> ep(linalg::symmetric_part(p), Eigen::EigenvaluesOnly);
    min_eig_p = std::min(min_eig_p, ep.eigenvalues()(0));
  };
  for (int k = 0; k < samples; ++k) visit(-T + 2.0 * T * k / (samples - 1));
  visit(0.0);
  visit(-inf);
  visit(inf);

  std::vector<CheckItem> out;
  out.push_back({"finite coefficients", finite, finite ? "" : "non-finite value on the validation grid"});
  out.push_back({"P symmetric", worst_sym_p <= tol.iso_tol, "max relative defect " + fmt(worst_sym_p)});
  out.push_back({"R symmetric", worst_sym_r <= tol.iso_tol, "max relative defect " + fmt(worst_sym_r)});
  out.push_back({"P invertible", min_sv_p > tol.rank_tol, "min singular value " + fmt(min_sv_p)});
  out.push_back({"(F1) |P v| >= C1 |v|", min_sv_p >= sys.C1 * (1.0 - slack) - 1e-12,
                 "min singular value of P " + fmt(min_sv_p) + " at t=" + fmt(where_p) + ", C1=" + fmt(sys.C1)});
  out.push_back({"(F1) |Q v| <= C2 |v|", max_q <= sys.C2 * (1.0 + slack) + 1e-12,
                 "max |Q| " + fmt(max_q) + " at t=" + fmt(where_q) + ", C2=" + fmt(sys.C2)});
  out.push_back({"(F1) |R v| <= C3 |v|", max_r <= sys.C3 * (1.0 + slack) + 1e-12,
                 "max |R| " + fmt(max_r) + " at t=" + fmt(where_r) + ", C3=" + fmt(sys.C3)});
  if (sys.f2_declared) {
    out.push_back({"(F2) (P v, v) >= C1 |v|^2", min_eig_p >= sys.C1 * (1.0 - slack) - 1e-12,
                   "min eigenvalue of P " + fmt(min_eig_p) + ", C1=" + fmt(sys.C1)});
  }
  return out;
}

void require_valid(const std::vector<CheckItem>& checks) {
  for (const auto& c : checks) {
    if (!c.ok) throw ValidationError(c.name + " failed: " + c.detail);
  }
}

bool h2_holds(const CoefficientSystem& sys) {
  const int n = sys.n;
  auto pd = [n](const Mat& p, const Mat& q, const Mat& r) {
    Mat block(2 * n, 2 * n);
    block << p, q, q.transpose(), r;
    Eigen::SelfAdjointEigenSolver<Mat> es(linalg::symmetric_part(block), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) > 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  };
  return pd(sys.P_minus, sys.Q_minus, sys.R_minus) && pd(sys.P_plus, sys.Q_plus, sys.R_plus);
}

}  // namespace symmorse
