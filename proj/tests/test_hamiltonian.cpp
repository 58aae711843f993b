#include <cmath>
#include <random>

#include "doctest.h"
#include "symmorse/error.hpp"
#include "symmorse/hamiltonian.hpp"
#include "properties.hpp"
#include "test_support.hpp"

using namespace symmorse;

namespace {

Mat scalar(double v) { return Mat::Constant(1, 1, v); }

double sech(double t) { return 1.0 / std::cosh(t); }

CoefficientSystem scalar_system(std::function<double(double)> p, std::function<double(double)> q,
                                std::function<double(double)> r, double c1, double c2, double c3) {
  return make_system(
      "scalar", 1, [p](double t) { return scalar(p(t)); }, [q](double t) { return scalar(q(t)); },
      [r](double t) { return scalar(r(t)); }, c1, c2, c3, true);
}

CoefficientSystem poschl_teller(int depth) {
  const double a = depth * (depth + 1.0);
  return scalar_system([](double) { return 1.0; }, [](double) { return 0.0; },
                       [a](double t) { return 1.0 - a * sech(t) * sech(t); }, 1.0, 0.0, a - 1.0);
}

// Line spanned by (a, 1).
double slope(const LagrangianFrame& f) { return f.basis()(0, 0) / f.basis()(1, 0); }

}  // namespace

TEST_CASE("assemble_B blocks") {
  const auto h0 = assemble_B(Mat::Identity(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2), 0.0);
  Mat expected = Mat::Zero(4, 4);
  expected.topLeftCorner(2, 2) = Mat::Identity(2, 2);
  CHECK(h0.B.isApprox(expected));
  const auto h = assemble_B(scalar(2), scalar(1), scalar(3), 0.0);
  Mat b(2, 2);
  b << 0.5, -0.5, -0.5, -2.5;
  CHECK((h.B - b).norm() < 1e-14);
  CHECK((h.JB - standard_j(1) * h.B).norm() < 1e-14);
  CHECK_THROWS_AS(assemble_B(scalar(0), scalar(1), scalar(1), 0.0), NumericError);
}

TEST_CASE("scalar limit eigenvalues and hyperbolicity") {
  for (double lambda : {0.0, 0.5, 3.0}) {
    const double p = 2.0, r = 1.5;
    const auto h = assemble_B(scalar(p), scalar(0.7), scalar(r), lambda);
    Eigen::EigenSolver<Mat> es(h.JB);
    const double mu = std::sqrt((r + lambda) / p);
    std::vector<double> re = {es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-mu));
    CHECK(re[1] == doctest::Approx(mu));
  }
  const auto h1 = assemble_B(Mat::Identity(2, 2), Mat::Zero(2, 2), Mat::Identity(2, 2), 0.0);
  const auto hy = is_hyperbolic(h1);
  CHECK(hy.hyperbolic);
  CHECK(hy.margin == doctest::Approx(1.0));
  CHECK_FALSE(is_hyperbolic(assemble_B(Mat::Identity(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2), 0.0)).hyperbolic);
  CHECK(is_hyperbolic(assemble_B(scalar(1), scalar(0.3), scalar(0.2), 0.0)).hyperbolic);
  CHECK_FALSE(is_hyperbolic(assemble_B(scalar(1), scalar(0.3), scalar(-0.2), 0.0)).hyperbolic);
}

TEST_CASE("det criterion examples") {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 3; ++n) {
    const Mat a = testsupport::sym(rng, n);
    const Mat p = a * a + Mat::Identity(n, n);
    const Mat q = testsupport::sym(rng, n);
    const Mat b = testsupport::sym(rng, n);
    const Mat r = b * b + Mat::Identity(n, n);
    CHECK(det_criterion(p, q, r).hyperbolic);
  }
  // [[P, Q], [Q^T, R]] positive definite implies hyperbolic.
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 3;
    const Mat g = testsupport::sym(rng, 2 * n);
    const Mat block = g * g + 0.1 * Mat::Identity(2 * n, 2 * n);
    const Mat p = block.topLeftCorner(n, n), q = block.topRightCorner(n, n), r = block.bottomRightCorner(n, n);
    CHECK(is_hyperbolic(assemble_B(p, q, r, 0.0)).hyperbolic);
    CHECK(det_criterion(p, q, r).hyperbolic);
  }
}

TEST_CASE("property: det criterion agrees with hyperbolicity of JB") {
  const props::Outcome o = props::det_criterion_agreement();
  CHECK_MESSAGE(o.failures == 0, o.first);
  CHECK(o.cases >= 200);
}

TEST_CASE("thresholds") {
  CoefficientSystem s = poschl_teller(1);
  auto with = [&](double c1, double c2, double c3) {
    s.C1 = c1;
    s.C2 = c2;
    s.C3 = c3;
    return s;
  };
  CHECK(threshold_identity_shift(with(1, 0, 1)) == doctest::Approx(1.0));
  CHECK(threshold_identity_shift(with(2, 3, 1)) == doctest::Approx(5.5));
  CHECK(threshold_identity_shift(with(1, 1, 0)) == doctest::Approx(1.0));
  CHECK(threshold_nondegeneracy(with(1, 0, 1)) == doctest::Approx(1.0));
  CHECK(threshold_nondegeneracy(with(2, 3, 1)) == doctest::Approx(10.0));
  CHECK(threshold_nondegeneracy(with(1, 1, 2)) == doctest::Approx(4.0));
  CHECK(threshold_boundary(with(1, 1, 2), 0.0) == doctest::Approx(4.0));
  CHECK(threshold_boundary(with(1, 1, 0), 1.0) == doctest::Approx(8.0));
  CHECK(threshold_boundary(with(2, 0, 1), 2.0) == doctest::Approx(5.0));
}

TEST_CASE("boundary constant") {
  const auto d = boundary_constant(dirichlet_frame(2));
  CHECK(d.V.cols() == 0);
  CHECK(d.C0 == 0.0);
  const auto nn = boundary_constant(neumann_frame(2));
  CHECK(nn.V.cols() == 2);
  CHECK(nn.C0 == doctest::Approx(0.0));
  Mat f(2, 1);
  f << 3, 1;
  const auto b = boundary_constant(LagrangianFrame(f));
  CHECK(b.V.cols() == 1);
  CHECK(b.A(0, 0) == doctest::Approx(3.0));
  CHECK(b.C0 == doctest::Approx(3.0));
  // Graph [S; I] with S symmetric: V = R^n and A = S in any orthonormal basis of V.
  std::mt19937_64 rng(9);
  const Mat s = testsupport::sym(rng, 3);
  const auto g = boundary_constant(graph_frame(s));
  CHECK((g.V * g.A * g.V.transpose() - s).norm() < 1e-10);
  // Mixed: p1 = 0 direction plus a graph in the second coordinate.
  Mat m = Mat::Zero(4, 2);
  m(0, 0) = 1.0;           // e1 in L_D
  m(1, 1) = -2.0;          // y2 = -2 x2
  m(3, 1) = 1.0;
  const auto mixed = boundary_constant(LagrangianFrame(m));
  CHECK(mixed.V.cols() == 1);
  CHECK(std::abs(mixed.V(1, 0)) == doctest::Approx(1.0));
  CHECK(mixed.A(0, 0) == doctest::Approx(-2.0));
  CHECK(mixed.C0 == doctest::Approx(2.0));
}

TEST_CASE("spectral subspaces: scalar closed forms") {
  const double pp = 1.5, qp = 2.0, rp = 1.0, pm = 0.5, qm = -2.0, rm = 3.0;
  for (double lambda : {0.0, 1.0, 9.0}) {
    const auto sp = spectral_subspaces(assemble_B(scalar(pp), scalar(qp), scalar(rp), lambda));
    CHECK(slope(sp.minus) == doctest::Approx(qp - std::sqrt(pp * (rp + lambda))));
    const auto sm = spectral_subspaces(assemble_B(scalar(pm), scalar(qm), scalar(rm), lambda));
    CHECK(slope(sm.plus) == doctest::Approx(qm + std::sqrt(pm * (rm + lambda))));
  }
  // P = I, Q = 0, R = I: eigenvectors of JB from an independent eigensolve.
  const auto h = assemble_B(scalar(1), scalar(0), scalar(1), 0.0);
  Eigen::EigenSolver<Mat> es(h.JB);
  for (int k = 0; k < 2; ++k) {
    const Vec v = es.eigenvectors().col(k).real();
    const auto sp = spectral_subspaces(h);
    const auto& target = es.eigenvalues()(k).real() > 0 ? sp.plus : sp.minus;
    CHECK(std::abs(v(0) / v(1) - slope(target)) < 1e-12);
  }
  CHECK_THROWS_AS(spectral_subspaces(assemble_B(scalar(1), scalar(0), scalar(-1), 0.0)), NumericError);
}

TEST_CASE("graph matrices M and N") {
  const auto sys = scalar_system([](double) { return 1.0; }, [](double t) { return 2.0 * std::tanh(t); },
                                 [](double) { return 1.0; }, 1.0, 2.0, 1.0);
  for (double lambda : {0.0, 2.0, 9.0}) {
    const auto mn = graph_matrices_MN(sys, lambda);
    CHECK(mn.M(0, 0) == doctest::Approx(2.0 - std::sqrt(1.0 + lambda)));
    CHECK(mn.N(0, 0) == doctest::Approx(-2.0 + std::sqrt(1.0 + lambda)));
  }
  const auto at_threshold = graph_matrices_MN(sys, threshold_nondegeneracy(sys));
  CHECK(at_threshold.M(0, 0) < 0.0);
  CHECK(at_threshold.N(0, 0) > 0.0);
  const auto pt = poschl_teller(2);
  CHECK(h2_holds(pt));
  const auto mn = graph_matrices_MN(pt, 0.0);
  CHECK(mn.M(0, 0) < 0.0);
  CHECK(mn.N(0, 0) > 0.0);
}

TEST_CASE("property: spectral subspaces are transversal to L_D when P is positive definite") {
  const props::Outcome o = props::transversality_to_dirichlet();
  CHECK_MESSAGE(o.failures == 0, o.first);
  CHECK(o.cases >= 200);
}

TEST_CASE("autonomous bundle stays at the spectral subspace") {
  const auto sys = scalar_system([](double) { return 1.5; }, [](double) { return 0.4; },
                                 [](double) { return 2.0; }, 1.5, 0.4, 2.0);
  const auto tau = tau_grid(5.0, 0.05);
  const auto es = bundle(sys, 0.3, BundleKind::stable, tau);
  const double m = 0.4 - std::sqrt(1.5 * 2.3);
  for (const auto& f : es.path.frames) CHECK(std::abs(slope(f) - m) < 1e-10);
  const auto eu = bundle(sys, 0.3, BundleKind::unstable, tau);
  for (const auto& f : eu.path.frames) CHECK(std::abs(slope(f) - (0.4 + std::sqrt(1.5 * 2.3))) < 1e-10);
}

TEST_CASE("Poschl-Teller bundles carry the zero mode at tau = 0") {
  // Kernel sech(t) tanh(t) for depth 2 and sech(t) for depth 1; z = (u', u).
  const auto tau = tau_grid(20.0, 0.025);
  {
    const auto pt = poschl_teller(2);
    const auto es = bundle(pt, 0.0, BundleKind::stable, tau);
    const auto eu = bundle(pt, 0.0, BundleKind::unstable, tau);
    const auto ld = dirichlet_frame(1);
    CHECK(subspace_gap(es.path.frames.front(), ld) < 1e-10);
    CHECK(subspace_gap(eu.path.frames.front(), ld) < 1e-10);
    CHECK(es.limit_gap < 1e-6);
    // At tau = 1: u'/u for u = sech tanh is (sech^2 - tanh^2)/tanh.
    const double t1 = tau[40];
    const double ratio = (sech(t1) * sech(t1) - std::tanh(t1) * std::tanh(t1)) / std::tanh(t1);
    CHECK(std::abs(slope(es.path.frames[40]) - ratio) < 1e-9);
  }
  {
    const auto pt = poschl_teller(1);
    const auto es = bundle(pt, 0.0, BundleKind::stable, tau);
    CHECK(subspace_gap(es.path.frames.front(), neumann_frame(1)) < 1e-10);
  }
}

TEST_CASE("truncation time") {
  const auto pt = poschl_teller(2);
  const auto tr = truncation_time(pt, 0.0);
  CHECK(tr.tail <= 1e-10);
  CHECK(tr.T > 10.0);
  CHECK(tr.T < 16.0);
  CHECK(tail_bound(pt, 0.0, tr.T - 0.25) > 1e-10);
}

TEST_CASE("system validation") {
  auto pt = poschl_teller(2);
  CHECK_NOTHROW(require_valid(validate_system(pt, 20.0)));
  pt.C3 = 4.0;
  CHECK_THROWS_WITH_AS(require_valid(validate_system(pt, 20.0)), doctest::Contains("C3"), ValidationError);
  CHECK_THROWS_AS(scalar_system([](double) { return 1.0; }, [](double t) { return std::sin(t); },
                                [](double) { return 1.0; }, 1, 1, 1),
                  ValidationError);
}
