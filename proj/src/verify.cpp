#include "symmorse/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "symmorse/error.hpp"
#include "symmorse/index_algebra.hpp"
#include "symmorse/parallel.hpp"

namespace symmorse {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

MaslovOptions maslov_options(const RunConfig& cfg) {
  MaslovOptions opt;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  return opt;
}

void check_limits(const CoefficientSystem& sys, double lambda, const RunConfig& cfg, IndexReport& r) {
  const Hyperbolicity plus = is_hyperbolic(assemble_B(sys, inf, lambda), cfg.tol);
  const Hyperbolicity minus = is_hyperbolic(assemble_B(sys, -inf, lambda), cfg.tol);
  r.metric("hyperbolic margin +inf", plus.margin);
  r.metric("hyperbolic margin -inf", minus.margin);
  r.flag("(H1) JB(+inf) hyperbolic", plus.hyperbolic, "margin " + fmt(plus.margin));
  r.flag("(H1) JB(-inf) hyperbolic", minus.hyperbolic, "margin " + fmt(minus.margin));
  if (!plus.hyperbolic || !minus.hyperbolic) throw ValidationError("(H1) fails: limit system not hyperbolic");
}

void check_system(const CoefficientSystem& sys, const RunConfig& cfg, IndexReport& r) {
  for (const auto& c : validate_system(sys, cfg.T, 2001, cfg.tol)) r.flag(c.name, c.ok, c.detail);
  const double tail = tail_bound(sys, 0.0, cfg.T);
  r.metric("tail bound at T", tail);
  r.flag("limits reached at +-T", tail <= cfg.tol.limit_tol, "tail " + fmt(tail));
  r.metric("T", cfg.T);
  r.integer("nodes", cfg.nodes);
  check_limits(sys, 0.0, cfg, r);
}

void add_geometric(const GeometricIndex& g, const std::string& label, const RunConfig& cfg, IndexReport& r) {
  r.flag(label + " Maslov certified", g.maslov.certified, g.maslov.note);
  r.flag(label + " bundle limit", g.limit_gap <= cfg.tol.bundle_tol, "gap " + fmt(g.limit_gap));
  r.metric(label + " limit gap", g.limit_gap);
  r.metric(label + " isotropy", g.max_isotropy);
  r.integer(label + " segments", static_cast<long long>(g.maslov.segments.size()));
}

// The operator kernel and the bundle intersection at tau = 0 are the same space. A mismatch
// means an eigenvalue sits in the zero band while the bundles are resolvably transversal,
// or the reverse: the run cannot tell a small eigenvalue from zero.
void kernel_check(int nullity, int kernel_dim, double margin, const std::string& label, IndexReport& r) {
  r.integer(label + " kernel dim via bundles", kernel_dim);
  r.metric(label + " kernel margin", margin);
  r.flag(label + " kernel matches bundle intersection", nullity == kernel_dim,
         "nullity " + std::to_string(nullity) + ", intersection " + std::to_string(kernel_dim) + ", margin " +
             fmt(margin));
}

void add_morse(const MorseResult& m, const std::string& label, IndexReport& r) {
  r.flag(label + " inertia certified", m.certified, m.note);
  r.metric(label + " zero band", m.zero_tol);
}

void finish(IndexReport& r, Clock::time_point start) {
  r.residual = r.lhs - r.rhs;
  r.integer("morse", r.morse);
  r.integer("nullity", r.nullity);
  r.integer("geo", r.geo);
  r.integer("correction", r.correction);
  r.integer("lhs", r.lhs);
  r.integer("rhs", r.rhs);
  r.integer("residual", r.residual);
  r.seconds = since(start);
}

double max_jb_norm(const CoefficientSystem& sys, double lambda, double T) {
  double m = std::max(assemble_B(sys, inf, lambda).JB.norm(), assemble_B(sys, -inf, lambda).JB.norm());
  const int samples = 801;
  for (int i = 0; i < samples; ++i) {
    const double t = -T + 2.0 * T * i / (samples - 1);
    m = std::max(m, assemble_B(sys, t, lambda).JB.norm());
  }
  return m;
}

InvariantBundle bundle_on(const CoefficientSystem& sys, double lambda, BundleKind kind, const std::vector<double>& tau,
                          const RunConfig& cfg) {
  return bundle(sys, lambda, kind, tau, cfg.tol);
}

Mat shortcut_intersection(const Mat& a, const Mat& b, const Mat& c, double rel) {
  const Mat ab = linalg::intersect_spans(a, b, rel);
  if (ab.cols() == 0) return ab;
  return linalg::intersect_spans(ab, c, rel);
}

double min_margin(const LagrangianPath& path, const LagrangianFrame& l0) {
  double m = inf;
  for (const auto& f : path.frames) m = std::min(m, transversality_margin(f, l0));
  return m;
}

// Both readings of the half-line transversality lemma at lambda, over tau in [0, T].
void lemma_readings(const CoefficientSystem& sys, const LagrangianFrame& l0, double lambda, const RunConfig& cfg,
                    IndexReport& r) {
  const std::vector<double> tau = bundle_grid(sys, lambda, cfg.T, cfg.tau_spacing);
  const InvariantBundle s = bundle_on(sys, lambda, BundleKind::stable, tau, cfg);
  const InvariantBundle u = bundle_on(sys, lambda, BundleKind::unstable, tau, cfg);
  std::vector<double> back(tau.begin() + 1, tau.end());
  for (double& t : back) t = -t;
  const std::vector<Mat> es_neg = transport_frames(sys, lambda, s.path.frames.front().basis(), 0.0, back, cfg.tol);

  const double m_es = min_margin(s.path, l0);
  const double m_eu = min_margin(u.path, l0);
  double m_es_neg = transversality_margin(s.path.frames.front(), l0);
  for (const auto& f : es_neg) m_es_neg = std::min(m_es_neg, transversality_margin(frame_from_orthonormal(f), l0));

  const double floor = cfg.tol.margin_min;
  r.metric("lemma margin E^s(tau)", m_es);
  r.metric("lemma margin E^s(-tau)", m_es_neg);
  r.metric("lemma margin E^u(-tau)", m_eu);
  r.integer("lemma E^s(tau) transversal", m_es > floor);
  r.integer("lemma E^s(-tau) transversal", m_es_neg > floor);
  r.integer("lemma E^u(-tau) transversal", m_eu > floor);
  std::ostringstream note;
  note << "half-line lemma at lambda " << fmt(lambda) << ": E^s(tau) cap L0 = 0 " << (m_es > floor ? "holds" : "fails")
       << "; reading E^s(-tau): " << (m_es_neg > floor ? "holds" : "fails")
       << "; reading E^u(-tau): " << (m_eu > floor ? "holds" : "fails");
  r.notes.push_back(note.str());
}

}  // namespace

void IndexReport::flag(const std::string& name, bool ok, const std::string& detail) {
  flags.push_back({name, ok, detail});
  certified = certified && ok;
}

std::vector<double> bundle_grid(const CoefficientSystem& sys, double lambda, double T, double max_spacing) {
  const double norm = max_jb_norm(sys, lambda, T);
  return tau_grid(T, std::min(max_spacing, 0.1 / std::max(norm, 1e-12)));
}

GeometricIndex geometric_index_line(const CoefficientSystem& sys, double lambda, const RunConfig& cfg) {
  const std::vector<double> tau = bundle_grid(sys, lambda, cfg.T, cfg.tau_spacing);
  std::vector<std::optional<InvariantBundle>> slots(2);
  parallel_for(2, cfg.threads, [&](std::size_t i) {
    slots[i] = bundle_on(sys, lambda, i == 0 ? BundleKind::stable : BundleKind::unstable, tau, cfg);
  });
  const InvariantBundle& s = *slots[0];
  const InvariantBundle& u = *slots[1];
  GeometricIndex out;
  out.maslov = maslov_pair(s.path, u.path, maslov_options(cfg));
  out.value = -out.maslov.index;
  out.limit_gap = std::max(s.limit_gap, u.limit_gap);
  out.max_isotropy = std::max(s.max_isotropy, u.max_isotropy);
  out.kernel_dim = intersect(s.path.frames.front(), u.path.frames.front(), cfg.tol).dim;
  out.kernel_margin = transversality_margin(s.path.frames.front(), u.path.frames.front());
  return out;
}

GeometricIndex geometric_index_half(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side,
                                    double lambda, const RunConfig& cfg) {
  if (side == Side::line) throw ArgumentError("geometric_index_half: side must be plus or minus");
  if (l0.n() != sys.n) throw ArgumentError("geometric_index_half: L0 has the wrong dimension");
  const std::vector<double> tau = bundle_grid(sys, lambda, cfg.T, cfg.tau_spacing);
  const bool plus = side == Side::plus;
  const InvariantBundle b = bundle_on(sys, lambda, plus ? BundleKind::stable : BundleKind::unstable, tau, cfg);
  const LagrangianPath fixed = constant_path(l0, tau);
  GeometricIndex out;
  out.maslov = plus ? maslov_pair(b.path, fixed, maslov_options(cfg)) : maslov_pair(fixed, b.path, maslov_options(cfg));
  out.value = -out.maslov.index;
  out.limit_gap = b.limit_gap;
  out.max_isotropy = b.max_isotropy;
  out.kernel_dim = intersect(b.path.frames.front(), l0, cfg.tol).dim;
  out.kernel_margin = transversality_margin(b.path.frames.front(), l0);
  return out;
}

int correction_line(const CoefficientSystem& sys, double lambda, const Tolerances& tol) {
  return triple_index(unstable_limit(sys, lambda, tol), stable_limit(sys, lambda, tol), dirichlet_frame(sys.n), tol);
}

int correction_line_shortcut(const CoefficientSystem& sys, double lambda, const Tolerances& tol) {
  const LagrangianFrame es = stable_limit(sys, lambda, tol);
  const LagrangianFrame eu = unstable_limit(sys, lambda, tol);
  const LagrangianFrame ld = dirichlet_frame(sys.n);
  const GraphMatrices mn = graph_matrices_MN(sys, lambda, tol);
  const int pos = inertia(linalg::symmetric_part(mn.M - mn.N), tol).pos;
  const int eu_ld = intersect(eu, ld, tol).dim;
  const int triple = static_cast<int>(shortcut_intersection(eu.basis(), es.basis(), ld.basis(), tol.int_tol).cols());
  return pos + eu_ld - triple;
}

int correction_half(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side, double lambda,
                    const Tolerances& tol) {
  const LagrangianFrame ld = dirichlet_frame(sys.n);
  switch (side) {
    case Side::plus:
      return triple_index(ld, l0, stable_limit(sys, lambda, tol), tol);
    case Side::minus:
      return triple_index(unstable_limit(sys, lambda, tol), l0, ld, tol);
    case Side::line:
      break;
  }
  throw ArgumentError("correction_half: side must be plus or minus");
}

IndexReport verify_theorem_C(const CoefficientSystem& sys, const RunConfig& cfg) {
  const auto start = Clock::now();
  IndexReport r;
  r.problem = sys.name;
  r.check = "C";
  r.side = "line";
  r.flag("(F2) declared", sys.f2_declared);
  check_system(sys, cfg, r);

  const MorseResult m = morse_index(discretize(sys, BoundarySpec{}, cfg.T, cfg.nodes, 0.0, cfg.tol), cfg.tol);
  add_morse(m, "operator", r);
  r.morse = m.morse;
  r.nullity = m.nullity;

  const GeometricIndex g = geometric_index_line(sys, 0.0, cfg);
  add_geometric(g, "geometric", cfg, r);
  kernel_check(m.nullity, g.kernel_dim, g.kernel_margin, "operator", r);
  r.geo = g.value;

  r.correction = correction_line(sys, 0.0, cfg.tol);
  const int shortcut = correction_line_shortcut(sys, 0.0, cfg.tol);
  r.integer("correction via M - N", shortcut);
  r.flag("correction agrees with M - N inertia", shortcut == r.correction,
         std::to_string(r.correction) + " vs " + std::to_string(shortcut));
  r.integer("(H2)", h2_holds(sys));
  if (h2_holds(sys)) r.flag("(H2) forces zero correction", r.correction == 0);

  r.lhs = r.morse;
  r.rhs = r.geo + r.correction;
  finish(r, start);
  return r;
}

IndexReport verify_theorem_D(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side, const RunConfig& cfg) {
  if (side == Side::line) throw ArgumentError("theorem D needs a half-line side");
  const auto start = Clock::now();
  IndexReport r;
  r.problem = sys.name;
  r.check = "D";
  r.side = side_name(side);
  r.flag("(F2) declared", sys.f2_declared);
  check_system(sys, cfg, r);

  const BoundaryData bd = boundary_constant(l0, cfg.tol);
  r.metric("C0", bd.C0);
  r.integer("dim V(L0)", bd.V.cols());

  const MorseResult m = morse_index(discretize(sys, BoundarySpec{side, l0}, cfg.T, cfg.nodes, 0.0, cfg.tol), cfg.tol);
  add_morse(m, "operator", r);
  r.morse = m.morse;
  r.nullity = m.nullity;

  const GeometricIndex g = geometric_index_half(sys, l0, side, 0.0, cfg);
  add_geometric(g, "geometric", cfg, r);
  kernel_check(m.nullity, g.kernel_dim, g.kernel_margin, "operator", r);
  r.geo = g.value;
  r.correction = correction_half(sys, l0, side, 0.0, cfg.tol);

  // At the boundary threshold the positive part of the correction form vanishes.
  const double lhat = threshold_boundary(sys, bd.C0);
  r.metric("lambda threshold", lhat);
  const LagrangianFrame ld = dirichlet_frame(sys.n);
  const QForm q = side == Side::plus ? q_form(ld, l0, stable_limit(sys, lhat, cfg.tol), cfg.tol)
                                     : q_form(unstable_limit(sys, lhat, cfg.tol), l0, ld, cfg.tol);
  const int qpos = inertia(q.gram, cfg.tol).pos;
  r.integer("m+ of correction form at threshold", qpos);
  r.flag("correction form has no positive part at threshold", qpos == 0);

  lemma_readings(sys, l0, lhat, cfg, r);

  r.lhs = r.morse;
  r.rhs = r.geo + r.correction;
  finish(r, start);
  return r;
}

IndexReport verify_dirichlet_difference(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side,
                                        const RunConfig& cfg) {
  if (side == Side::line) throw ArgumentError("the Dirichlet difference needs a half-line side");
  const auto start = Clock::now();
  IndexReport r;
  r.problem = sys.name;
  r.check = "dirichlet";
  r.side = side_name(side);
  check_system(sys, cfg, r);

  const LagrangianFrame ld = dirichlet_frame(sys.n);
  std::vector<MorseResult> m(2);
  parallel_for(2, cfg.threads, [&](std::size_t i) {
    const BoundarySpec spec{side, i == 0 ? l0 : ld};
    m[i] = morse_index(discretize(sys, spec, cfg.T, cfg.nodes, 0.0, cfg.tol), cfg.tol);
  });
  add_morse(m[0], "L0 operator", r);
  add_morse(m[1], "Dirichlet operator", r);
  r.morse = m[0].morse;
  r.nullity = m[0].nullity;
  r.integer("morse Dirichlet", m[1].morse);
  r.integer("nullity Dirichlet", m[1].nullity);

  const bool plus = side == Side::plus;
  const InvariantBundle b = bundle_on(sys, 0.0, plus ? BundleKind::stable : BundleKind::unstable, {0.0, cfg.T}, cfg);
  r.flag("bundle limit", b.limit_gap <= cfg.tol.bundle_tol, "gap " + fmt(b.limit_gap));
  const LagrangianFrame& at0 = b.path.frames.front();
  kernel_check(m[0].nullity, intersect(at0, l0, cfg.tol).dim, transversality_margin(at0, l0), "L0 operator", r);
  kernel_check(m[1].nullity, intersect(at0, ld, cfg.tol).dim, transversality_margin(at0, ld), "Dirichlet operator", r);
  r.correction = plus ? triple_index(ld, l0, at0, cfg.tol) : triple_index(at0, l0, ld, cfg.tol);

  r.lhs = m[0].morse - m[1].morse;
  r.rhs = r.correction;
  finish(r, start);
  return r;
}

IndexReport verify_theorem_B(const CoefficientSystem& sys, const BoundarySpec& boundary, const RunConfig& cfg) {
  const auto start = Clock::now();
  IndexReport r;
  r.problem = sys.name;
  r.check = "B";
  r.side = side_name(boundary.side);
  const bool half = boundary.side != Side::line;
  if (half && !boundary.l0) throw ArgumentError("theorem B on a half line needs L0");
  check_system(sys, cfg, r);

  const double C0 = half ? boundary_constant(*boundary.l0, cfg.tol).C0 : 0.0;
  const double threshold = half ? threshold_boundary(sys, C0) : threshold_nondegeneracy(sys);
  const double lmax = cfg.lambda_max > 0 ? cfg.lambda_max : threshold;
  r.metric("lambda threshold", threshold);
  r.metric("lambda max", lmax);
  r.integer("lambda max below threshold", lmax < threshold);
  if (lmax < threshold) {
    r.notes.push_back("lambda_max " + fmt(lmax) + " is below the non-degeneracy threshold " + fmt(threshold) +
                      "; positivity at the end point is checked numerically only");
  }
  r.notes.push_back("parameter interval [0, " + fmt(lmax) + "] with R replaced by R + lambda");
  check_limits(sys, lmax, cfg, r);

  SweepOptions so;
  so.grid_points = cfg.sweep_points;
  so.threads = cfg.threads;
  const SpectralFlowTrace tr = spectral_flow_positive(sys, boundary, cfg.T, cfg.nodes, lmax, cfg.tol, so);
  r.flag("sweep certified", tr.certified, tr.note);
  r.flag("Morse counts monotone", tr.monotone);
  r.flag("operator positive at lambda max", tr.end_positive);
  r.flag("partition sum agrees", tr.sf_partition == tr.sf,
         std::to_string(tr.sf_partition) + " vs " + std::to_string(tr.sf));
  r.flag("crossing sum agrees", tr.crossing_sum == tr.sf,
         std::to_string(tr.crossing_sum) + " vs " + std::to_string(tr.sf));
  r.integer("sf", tr.sf);
  r.integer("sf partition", tr.sf_partition);
  r.integer("crossing sum", tr.crossing_sum);
  r.integer("crossings", static_cast<long long>(tr.crossings.size()));
  for (std::size_t i = 0; i < tr.crossings.size(); ++i) {
    r.metric("crossing " + std::to_string(i) + " lambda", tr.crossings[i].lambda);
    r.integer("crossing " + std::to_string(i) + " dim", tr.crossings[i].dim);
  }
  r.morse = tr.morse_counts.front();
  r.nullity = tr.nullities.front();

  // X(lambda) = iota_CLM along tau at fixed lambda; igeo = -X.
  std::vector<std::optional<GeometricIndex>> g(2);
  parallel_for(2, cfg.threads, [&](std::size_t i) {
    const double lambda = i == 0 ? 0.0 : lmax;
    g[i] = half ? geometric_index_half(sys, *boundary.l0, boundary.side, lambda, cfg)
                : geometric_index_line(sys, lambda, cfg);
  });
  add_geometric(*g[0], "X(0)", cfg, r);
  kernel_check(tr.nullities.front(), g[0]->kernel_dim, g[0]->kernel_margin, "operator at 0", r);
  add_geometric(*g[1], "X(lambda max)", cfg, r);
  const int x0 = -g[0]->value;
  const int x1 = -g[1]->value;
  r.geo = g[0]->value;

  // Y: limit spaces along lambda.
  const Tolerances tol = cfg.tol;
  FrameFunction es = [&sys, tol](double l) { return stable_limit(sys, l, tol); };
  FrameFunction eu = [&sys, tol](double l) { return unstable_limit(sys, l, tol); };
  MaslovResult y;
  if (boundary.side == Side::line) {
    y = maslov_pair_adaptive(es, eu, 0.0, lmax, cfg.sweep_points, maslov_options(cfg));
  } else {
    const LagrangianFrame l0 = *boundary.l0;
    FrameFunction fixed = [l0](double) { return l0; };
    y = boundary.side == Side::plus ? maslov_pair_adaptive(es, fixed, 0.0, lmax, cfg.sweep_points, maslov_options(cfg))
                                    : maslov_pair_adaptive(fixed, eu, 0.0, lmax, cfg.sweep_points, maslov_options(cfg));
  }
  r.flag("Y Maslov certified", y.certified, y.note);
  r.correction = y.index;
  r.integer("X(0)", x0);
  r.integer("X(lambda max)", x1);
  r.integer("Y", y.index);

  r.lhs = tr.sf;
  r.rhs = x1 - x0 - y.index;
  finish(r, start);
  return r;
}

ConvergenceCheck check_convergence(const std::function<IndexReport(const RunConfig&)>& run, const RunConfig& cfg) {
  ConvergenceCheck out;
  out.base = run(cfg);
  RunConfig big = cfg;
  big.T = 2.0 * cfg.T;
  big.nodes = 2 * cfg.nodes - 1;
  out.doubled = run(big);
  std::map<std::string, long long> a(out.base.integers.begin(), out.base.integers.end());
  for (const auto& [name, value] : out.doubled.integers) {
    if (name == "nodes" || name.find("segments") != std::string::npos) continue;
    const auto it = a.find(name);
    if (it == a.end()) {
      out.differences.push_back(name + ": only in the doubled run");
    } else if (it->second != value) {
      out.differences.push_back(name + ": " + std::to_string(it->second) + " -> " + std::to_string(value));
    }
  }
  for (const auto& [name, value] : a) {
    const bool seen = std::any_of(out.doubled.integers.begin(), out.doubled.integers.end(),
                                  [&](const auto& p) { return p.first == name; });
    if (!seen) out.differences.push_back(name + ": missing from the doubled run");
  }
  out.stable = out.differences.empty();
  return out;
}

IndexReport compute_indices(const CoefficientSystem& sys, const BoundarySpec& boundary, const RunConfig& cfg) {
  IndexReport r;
  if (boundary.side == Side::line) {
    r = verify_theorem_C(sys, cfg);
  } else {
    if (!boundary.l0) throw ArgumentError("half-line indices need L0");
    r = verify_theorem_D(sys, *boundary.l0, boundary.side, cfg);
  }
  r.check = "indices";
  r.metric("threshold identity shift", threshold_identity_shift(sys));
  r.metric("threshold nondegeneracy", threshold_nondegeneracy(sys));
  return r;
}

IndexReport check_problem(const CoefficientSystem& sys, const std::optional<LagrangianFrame>& l0,
                          const RunConfig& cfg) {
  const auto start = Clock::now();
  IndexReport r;
  r.problem = sys.name;
  r.check = "check";
  for (const auto& c : validate_system(sys, cfg.T, 2001, cfg.tol)) r.flag(c.name, c.ok, c.detail);
  r.flag("(F2) declared", sys.f2_declared);
  r.metric("T", cfg.T);
  const double tail = tail_bound(sys, 0.0, cfg.T);
  r.metric("tail bound at T", tail);
  r.flag("limits reached at +-T", tail <= cfg.tol.limit_tol, "tail " + fmt(tail));
  try {
    const Truncation tr = truncation_time(sys, 0.0, cfg.tol);
    r.metric("suggested T", tr.T);
  } catch (const NumericError& e) {
    r.notes.push_back(e.what());
  }

  bool hyperbolic = true;
  for (double end : {inf, -inf}) {
    const std::string at = end > 0 ? "+inf" : "-inf";
    const Hyperbolicity h = is_hyperbolic(assemble_B(sys, end, 0.0), cfg.tol);
    const Hyperbolicity d = det_criterion(sys.P_at(end), sys.Q_at(end), sys.R_at(end), cfg.tol);
    r.metric("hyperbolic margin " + at, h.margin);
    r.flag("(H1) JB(" + at + ") hyperbolic", h.hyperbolic, "margin " + fmt(h.margin));
    r.flag("determinant criterion agrees at " + at, d.hyperbolic == h.hyperbolic);
    hyperbolic = hyperbolic && h.hyperbolic;
  }
  r.integer("(H2)", h2_holds(sys));
  r.metric("threshold identity shift", threshold_identity_shift(sys));
  r.metric("threshold nondegeneracy", threshold_nondegeneracy(sys));
  if (hyperbolic) {
    const LagrangianFrame ld = dirichlet_frame(sys.n);
    const LagrangianFrame es = stable_limit(sys, 0.0, cfg.tol);
    const LagrangianFrame eu = unstable_limit(sys, 0.0, cfg.tol);
    r.integer("dim E^s(+inf)", es.n());
    r.integer("dim E^u(-inf)", eu.n());
    r.metric("margin E^s(+inf) to L_D", transversality_margin(es, ld));
    r.metric("margin E^u(-inf) to L_D", transversality_margin(eu, ld));
    r.integer("correction", correction_line(sys, 0.0, cfg.tol));
  }
  if (l0) {
    const BoundaryData bd = boundary_constant(*l0, cfg.tol);
    r.integer("dim V(L0)", bd.V.cols());
    r.metric("C0", bd.C0);
    r.metric("threshold boundary", threshold_boundary(sys, bd.C0));
  }
  r.seconds = since(start);
  return r;
}

SweepResult sweep(const CoefficientSystem& sys, const BoundarySpec& boundary, const RunConfig& cfg) {
  const auto start = Clock::now();
  SweepResult out;
  out.problem = sys.name;
  out.side = side_name(boundary.side);
  const bool half = boundary.side != Side::line;
  if (half && !boundary.l0) throw ArgumentError("a half-line sweep needs L0");
  const double threshold =
      half ? threshold_boundary(sys, boundary_constant(*boundary.l0, cfg.tol).C0) : threshold_nondegeneracy(sys);
  out.lambda_max = cfg.lambda_max > 0 ? cfg.lambda_max : threshold;

  SweepOptions so;
  so.grid_points = cfg.sweep_points;
  so.threads = cfg.threads;
  out.trace = spectral_flow_positive(sys, boundary, cfg.T, cfg.nodes, out.lambda_max, cfg.tol, so);

  out.tau = bundle_grid(sys, 0.0, cfg.T, cfg.tau_spacing);
  if (half) {
    const bool plus = boundary.side == Side::plus;
    const InvariantBundle b = bundle_on(sys, 0.0, plus ? BundleKind::stable : BundleKind::unstable, out.tau, cfg);
    out.angle_pair = plus ? "E^s(tau), L0" : "E^u(-tau), L0";
    for (const auto& f : b.path.frames) out.angles.push_back(principal_angles(f, *boundary.l0));
  } else {
    const InvariantBundle s = bundle_on(sys, 0.0, BundleKind::stable, out.tau, cfg);
    const InvariantBundle u = bundle_on(sys, 0.0, BundleKind::unstable, out.tau, cfg);
    out.angle_pair = "E^s(tau), E^u(-tau)";
    for (std::size_t k = 0; k < out.tau.size(); ++k) {
      out.angles.push_back(principal_angles(s.path.frames[k], u.path.frames[k]));
    }
  }
  out.certified = out.trace.certified && out.trace.monotone && out.trace.end_positive;
  out.seconds = since(start);
  return out;
}

}  // namespace symmorse
