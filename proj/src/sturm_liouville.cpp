#include "symmorse/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symmorse/error.hpp"
#include "symmorse/parallel.hpp"

namespace symmorse {

const char* side_name(Side side) {
  switch (side) {
    case Side::line:
      return "line";
    case Side::plus:
      return "plus";
    case Side::minus:
      return "minus";
  }
  return "?";
}

BandedSym::BandedSym(int size, int bandwidth)
    : size_(size), bw_(bandwidth), data_(static_cast<std::size_t>(size) * (bandwidth + 1), 0.0) {}

double& BandedSym::at(int i, int j) {
  if (i < j) std::swap(i, j);
  return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
}

double BandedSym::get(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) return 0.0;
  return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
}

Mat BandedSym::dense() const {
  Mat m = Mat::Zero(size_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = std::max(0, i - bw_); j <= i; ++j) m(i, j) = m(j, i) = get(i, j);
  return m;
}

double BandedSym::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < size_; ++i) {
    double row = 0.0;
    for (int j = std::max(0, i - bw_); j <= std::min(size_ - 1, i + bw_); ++j) row += std::abs(get(i, j));
    best = std::max(best, row);
  }
  return best;
}

DiscreteOperator discretize(const CoefficientSystem& sys, const BoundarySpec& boundary, double T, int nodes,
                            double lambda, const Tolerances& tol) {
  if (nodes < 16) throw ArgumentError("discretize: at least 16 nodes are required");
  if (!(T > 0.0)) throw ArgumentError("discretize: T must be positive");
  const int n = sys.n;
  DiscreteOperator op;
  op.side = boundary.side;
  op.nodes = nodes;
  op.lambda = lambda;
  op.T = T;
  Mat u;  // trace space at t = 0
  Mat a;
  if (boundary.side != Side::line) {
    if (!boundary.l0) throw ArgumentError("discretize: half-line problems need a boundary Lagrangian L0");
    if (boundary.l0->n() != n) throw ValidationError("boundary Lagrangian has the wrong dimension");
    const BoundaryData bd = boundary_constant(*boundary.l0, tol);
    u = bd.V;
    a = bd.A;
    op.C0 = bd.C0;
    op.boundary_dofs = static_cast<int>(u.cols());
  }
  switch (boundary.side) {
    case Side::line:
      op.t_lo = -T;
      op.t_hi = T;
      break;
    case Side::plus:
      op.t_lo = 0.0;
      op.t_hi = T;
      break;
    case Side::minus:
      op.t_lo = -T;
      op.t_hi = 0.0;
      break;
  }
  const double h = (op.t_hi - op.t_lo) / (nodes - 1);
  // Elements must resolve the local oscillation scale of the zeroth-order part.
  const double scale = (sys.C3 + std::abs(lambda) + sys.C2 * sys.C2 / sys.C1 + op.C0 * op.C0 / sys.C1) / sys.C1;
  if (h * h * scale > 1.0) {
    std::ostringstream msg;
    msg << "mesh too coarse: h = " << h << " does not resolve the coefficient scale (h^2 * " << scale << " > 1)";
    throw NumericError(msg.str());
  }

  // Node j carries w(t_j) = E_j c_j; clamped nodes carry no unknowns.
  std::vector<Mat> embed(nodes, Mat::Identity(n, n));
  std::vector<int> offset(nodes + 1, 0);
  const int first = 0;
  const int last = nodes - 1;
  if (boundary.side == Side::line) {
    embed[first] = Mat(n, 0);
    embed[last] = Mat(n, 0);
  } else if (boundary.side == Side::plus) {
    embed[first] = u;
    embed[last] = Mat(n, 0);
  } else {
    embed[first] = Mat(n, 0);
    embed[last] = u;
  }
  for (int j = 0; j < nodes; ++j) offset[j + 1] = offset[j] + static_cast<int>(embed[j].cols());
  const int size = offset[nodes];
  if (size == 0) throw NumericError("discretize: no unknowns");
  const int bw = std::max(1, 2 * n - 1);
  op.stiffness = BandedSym(size, bw);
  op.mass = BandedSym(size, bw);

  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const Mat eye = Mat::Identity(n, n);
  for (int e = 0; e + 1 < nodes; ++e) {
    const double t0 = op.t_lo + h * e;
    const double t1 = e + 2 == nodes ? op.t_hi : op.t_lo + h * (e + 1);
    const double he = t1 - t0;
    Mat kloc = Mat::Zero(2 * n, 2 * n);
    Mat mloc = Mat::Zero(2 * n, 2 * n);
    for (int q = 0; q < 3; ++q) {
      const double s = 0.5 * (1.0 + gx[q]);  // position in [0, 1]
      const double t = t0 + s * he;
      const double w = 0.5 * gw[q] * he;
      const Mat p = sys.P_at(t);
      const Mat qq = sys.Q_at(t);
      const Mat r = sys.R_at(t) + lambda * eye;
      const double phi[2] = {1.0 - s, s};
      const double dphi[2] = {-1.0 / he, 1.0 / he};
      for (int aa = 0; aa < 2; ++aa) {
        for (int bb = 0; bb < 2; ++bb) {
          kloc.block(aa * n, bb * n, n, n) +=
              w * (dphi[aa] * dphi[bb] * p + dphi[aa] * phi[bb] * qq + phi[aa] * dphi[bb] * qq.transpose() +
                   phi[aa] * phi[bb] * r);
          mloc.block(aa * n, bb * n, n, n) += w * phi[aa] * phi[bb] * eye;
        }
      }
    }
    const int d0 = static_cast<int>(embed[e].cols());
    const int d1 = static_cast<int>(embed[e + 1].cols());
    if (d0 + d1 == 0) continue;
    Mat emb = Mat::Zero(2 * n, d0 + d1);
    emb.topLeftCorner(n, d0) = embed[e];
    emb.bottomRightCorner(n, d1) = embed[e + 1];
    const Mat kr = emb.transpose() * kloc * emb;
    const Mat mr = emb.transpose() * mloc * emb;
    auto global = [&](int local) { return local < d0 ? offset[e] + local : offset[e + 1] + (local - d0); };
    for (int i = 0; i < d0 + d1; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double kij = 0.5 * (kr(i, j) + kr(j, i));
        const double mij = 0.5 * (mr(i, j) + mr(j, i));
        op.stiffness.at(global(i), global(j)) += kij;
        op.mass.at(global(i), global(j)) += mij;
      }
    }
  }
  // Boundary form +-(A c, c) at t = 0: plus on [0, T], minus on [-T, 0].
  if (op.boundary_dofs > 0) {
    const double sign = boundary.side == Side::plus ? 1.0 : -1.0;
    const int base = boundary.side == Side::plus ? offset[first] : offset[last];
    for (int i = 0; i < op.boundary_dofs; ++i)
      for (int j = 0; j <= i; ++j) op.stiffness.at(base + i, base + j) += sign * 0.5 * (a(i, j) + a(j, i));
  }
  return op;
}

namespace {

// Negative pivots of S = K - sigma M by banded LDL^T without pivoting; -1 on breakdown.
int banded_negative_pivots(const DiscreteOperator& op, double sigma) {
  const int size = op.stiffness.size();
  const int bw = op.stiffness.bandwidth();
  BandedSym l(size, bw);
  std::vector<double> d(size, 0.0);
  const double scale = std::max(op.stiffness.norm_inf(), std::abs(sigma) * op.mass.norm_inf());
  const double tiny = 1e-14 * std::max(scale, 1e-300);
  int negative = 0;
  for (int j = 0; j < size; ++j) {
    const int lo = std::max(0, j - bw);
    double dj = op.stiffness.get(j, j) - sigma * op.mass.get(j, j);
    for (int k = lo; k < j; ++k) dj -= l.get(j, k) * l.get(j, k) * d[k];
    if (!std::isfinite(dj) || std::abs(dj) <= tiny) return -1;
    d[j] = dj;
    negative += dj < 0.0;
    for (int i = j + 1; i <= std::min(size - 1, j + bw); ++i) {
      double v = op.stiffness.get(i, j) - sigma * op.mass.get(i, j);
      for (int k = std::max(0, i - bw); k < j; ++k) v -= l.get(i, k) * l.get(j, k) * d[k];
      l.at(i, j) = v / dj;
    }
  }
  return negative;
}

int dense_count_below(const DiscreteOperator& op, double sigma) {
  const Mat s = op.stiffness.dense() - sigma * op.mass.dense();
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  int count = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) count += es.eigenvalues()(i) < 0.0;
  return count;
}

}  // namespace

int count_below(const DiscreteOperator& op, double sigma) {
  const int direct = banded_negative_pivots(op, sigma);
  if (direct >= 0) return direct;
  // A zero pivot means sigma (nearly) hits the spectrum or a leading minor is singular;
  // tiny shifts keep the count for every eigenvalue outside the shift window.
  const double unit = std::max(1e-300, op.stiffness.norm_inf() / std::max(1e-300, op.mass.norm_inf()));
  for (double rel : {1e-12, -1e-12, 1e-10, -1e-10}) {
    const int shifted = banded_negative_pivots(op, sigma + rel * unit);
    if (shifted >= 0) return shifted;
  }
  if (op.stiffness.size() <= 3000) return dense_count_below(op, sigma);
  throw NumericError("inertia: banded factorization broke down and the problem is too large for a dense solve");
}

namespace {

double zero_band(const DiscreteOperator& op, const Tolerances& tol) {
  return tol.fem_zero_rel * op.stiffness.norm_inf() / op.mass.norm_inf();
}

}  // namespace

MorseResult morse_index(const DiscreteOperator& op, const Tolerances& tol) {
  MorseResult out;
  out.zero_tol = zero_band(op, tol);
  out.morse = count_below(op, -out.zero_tol);
  const int up_to_zero = count_below(op, out.zero_tol);
  out.nullity = up_to_zero - out.morse;
  const int far_below = count_below(op, -10.0 * out.zero_tol);
  const int far_above = count_below(op, 10.0 * out.zero_tol);
  if (far_below != out.morse || far_above != up_to_zero) {
    out.certified = false;
    std::ostringstream msg;
    msg << "eigenvalue in the ambiguity band " << out.zero_tol << " < |mu| < " << 10.0 * out.zero_tol
        << " at lambda=" << op.lambda;
    out.note = msg.str();
  }
  return out;
}

namespace {

struct SweepPoint {
  int morse = 0;
  int nullity = 0;
  int sharp = 0;  // eigenvalues < 0
  double zero_tol = 0;
  bool certified = true;
  std::string note;
};

class SweepRunner {
 public:
  SweepRunner(const CoefficientSystem& sys, const BoundarySpec& boundary, double T, int nodes, const Tolerances& tol)
      : sys_(sys), boundary_(boundary), T_(T), nodes_(nodes), tol_(tol) {}

  DiscreteOperator op(double lambda) const { return discretize(sys_, boundary_, T_, nodes_, lambda, tol_); }

  SweepPoint point(double lambda) const {
    const DiscreteOperator o = op(lambda);
    const MorseResult m = morse_index(o, tol_);
    return SweepPoint{m.morse, m.nullity, count_below(o, 0.0), m.zero_tol, m.certified, m.note};
  }

  int sharp(double lambda) const { return count_below(op(lambda), 0.0); }

  // All parameters in (lo, hi] where the number of negative eigenvalues drops.
  void locate(double lo, double hi, int nlo, int nhi, double eps, std::vector<Crossing>& out) const {
    if (nlo == nhi) return;
    if (hi - lo <= eps) {
      out.push_back(Crossing{0.5 * (lo + hi), nlo - nhi});
      return;
    }
    const double mid = 0.5 * (lo + hi);
    const int nmid = sharp(mid);
    locate(lo, mid, nlo, nmid, eps, out);
    locate(mid, hi, nmid, nhi, eps, out);
  }

 private:
  const CoefficientSystem& sys_;
  const BoundarySpec& boundary_;
  double T_;
  int nodes_;
  const Tolerances& tol_;
};

SpectralFlowTrace sweep_once(const CoefficientSystem& sys, const BoundarySpec& boundary, double T, int nodes,
                             double lambda_max, const Tolerances& tol, const SweepOptions& opt) {
  const int count = std::max(2, opt.grid_points);
  SpectralFlowTrace out;
  out.lambdas.resize(count);
  for (int i = 0; i < count; ++i) out.lambdas[i] = lambda_max * i / (count - 1);
  out.lambdas.back() = lambda_max;
  const SweepRunner runner(sys, boundary, T, nodes, tol);
  std::vector<SweepPoint> pts(count);
  parallel_for(count, opt.threads, [&](std::size_t i) { pts[i] = runner.point(out.lambdas[i]); });

  for (int i = 0; i < count; ++i) {
    out.morse_counts.push_back(pts[i].morse);
    out.nullities.push_back(pts[i].nullity);
    if (i > 0 && pts[i].morse > pts[i - 1].morse) out.monotone = false;
  }
  out.start_nullity = pts.front().nullity;
  out.sf = pts.front().morse - pts.back().morse;
  out.end_positive = pts.back().morse == 0 && pts.back().nullity == 0;
  if (!pts.front().certified) {
    out.certified = false;
    out.note = pts.front().note;
  }
  if (!pts.back().certified) {
    out.certified = false;
    out.note += (out.note.empty() ? "" : "; ") + pts.back().note;
  }

  // Partition sum: on [lambda_{i-1}, lambda_i] pick a_i > 0 that no eigenvalue crosses
  // (neither a_i nor -a_i), then add dim E_[0,a_i] at the right end minus the left end.
  std::vector<int> terms(count, 0);
  std::vector<int> failed(count, 0);
  const double a0 = std::max(1.0, lambda_max);
  parallel_for(count - 1, opt.threads, [&](std::size_t k) {
    const std::size_t i = k + 1;
    const DiscreteOperator left = runner.op(out.lambdas[i - 1]);
    const DiscreteOperator right = runner.op(out.lambdas[i]);
    for (int m = 0; m < 40; ++m) {
      const double a = a0 * std::ldexp(1.0, -m) * (1.0 + 0.0137 * m);
      if (a <= 10.0 * std::max(pts[i - 1].zero_tol, pts[i].zero_tol)) break;
      const int up_l = count_below(left, a), up_r = count_below(right, a);
      const int dn_l = count_below(left, -a), dn_r = count_below(right, -a);
      if (up_l != up_r || dn_l != dn_r) continue;
      const int dim_r = up_r - pts[i].morse;
      const int dim_l = up_l - pts[i - 1].morse;
      terms[i] = dim_r - dim_l;
      return;
    }
    failed[i] = 1;
  });
  for (int i = 1; i < count; ++i) {
    out.sf_partition += terms[i];
    if (failed[i]) {
      out.certified = false;
      out.note += (out.note.empty() ? "" : "; ") + std::string("no admissible partition level on a sweep interval");
    }
  }

  // Crossings from the sharp count of negative eigenvalues; drops inside the zero band
  // at lambda = 0 belong to the kernel at the start point.
  std::vector<std::vector<Crossing>> found(count);
  parallel_for(count - 1, opt.threads, [&](std::size_t k) {
    const std::size_t i = k + 1;
    runner.locate(out.lambdas[i - 1], out.lambdas[i], pts[i - 1].sharp, pts[i].sharp, opt.locate_tol, found[i]);
  });
  for (const auto& f : found) {
    for (const auto& c : f) {
      if (c.lambda <= pts.front().zero_tol) continue;
      out.crossings.push_back(c);
      out.crossing_sum += c.dim;
    }
  }
  return out;
}

}  // namespace

SpectralFlowTrace spectral_flow_positive(const CoefficientSystem& sys, const BoundarySpec& boundary, double T,
                                         int nodes, double lambda_max, const Tolerances& tol,
                                         const SweepOptions& opt) {
  if (!(lambda_max > 0.0)) throw ArgumentError("spectral flow: lambda_max must be positive");
  SpectralFlowTrace trace = sweep_once(sys, boundary, T, nodes, lambda_max, tol, opt);
  if (!trace.monotone) {
    trace = sweep_once(sys, boundary, T, 2 * nodes - 1, lambda_max, tol, opt);
    if (!trace.monotone) throw NumericError("spectral flow: Morse counts are not monotone in lambda after refinement");
    trace.note += (trace.note.empty() ? "" : "; ") + std::string("mesh refined once for monotonicity");
  }
  return trace;
}

}  // namespace symmorse
