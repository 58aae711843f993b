#pragma once

// Seeded property suites shared by the unit tests and the acceptance binary. Each returns
// how many cases ran and how many violated the property.

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symmorse/hamiltonian.hpp"
#include "symmorse/index_algebra.hpp"
#include "symmorse/maslov.hpp"
#include "symmorse/sturm_liouville.hpp"
#include "systems.hpp"
#include "test_support.hpp"

namespace props {

using namespace symmorse;

struct Outcome {
  int cases = 0;
  int failures = 0;
  std::string first;  // description of the first failing case

  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
  bool ok(int min_cases = 200) const { return failures == 0 && cases >= min_cases; }
};

inline std::vector<double> grid(double a, double b, int count) {
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = a + (b - a) * k / (count - 1);
  t.back() = b;
  return t;
}

// t -> exp(t J S) L for symmetric S.
inline LagrangianPath flow_path(const std::vector<double>& t, const Mat& generator, const Mat& start) {
  LagrangianPath p;
  p.t = t;
  for (double s : t) p.frames.emplace_back(testsupport::expm(s * generator) * start);
  return p;
}

inline std::string at(const char* what, int k) {
  std::ostringstream s;
  s << what << " (case " << k << ")";
  return s.str();
}

inline Outcome triple_index_oracle() {
  std::mt19937_64 rng(2024);
  std::mt19937_64 oracle_rng(99);
  Outcome o;
  for (int k = 0; k < 300; ++k, ++o.cases) {
    const int n = 1 + k % 3;
    const auto t = testsupport::structured_triple(rng, n);
    const LagrangianFrame a(t.a), b(t.b), c(t.c);
    const int lib = triple_index(a, b, c);
    const int oracle = testsupport::triple_index_oracle(a.basis(), b.basis(), c.basis(), oracle_rng);
    if (lib != oracle) o.fail(at("library and oracle differ", k));
    if (lib < 0 || lib > n) o.fail(at("index outside [0, n]", k));
  }
  return o;
}

inline Outcome hormander_agreement() {
  std::mt19937_64 rng(31337);
  Outcome o;
  for (int k = 0; k < 200; ++k, ++o.cases) {
    const int n = 1 + k % 3;
    const auto t1 = testsupport::structured_triple(rng, n);
    const auto t2 = testsupport::structured_triple(rng, n);
    const LagrangianFrame l0(t1.a), l1(t1.b), v0(t2.a), v1(t2.c);
    if (hormander_index(l0, l1, v0, v1) != hormander_index_alt(l0, l1, v0, v1)) o.fail(at("expressions differ", k));
  }
  return o;
}

// Reversal and symplectic invariance, with refinement and additivity checked on the same draws.
inline Outcome maslov_reversal_invariance() {
  std::mt19937_64 rng(4242);
  Outcome o;
  for (int k = 0; k < 200; ++k, ++o.cases) {
    const int n = 1 + k % 3;
    const Mat j = testsupport::jmat(n);
    const Mat g1 = j * testsupport::sym(rng, 2 * n, 1.0);
    const Mat g2 = j * testsupport::sym(rng, 2 * n, 0.5);
    const auto tri = testsupport::structured_triple(rng, n);
    const int count = 161;
    const auto t = grid(0, 2, count);
    const auto p1 = flow_path(t, g1, tri.a);
    const auto p2 = flow_path(t, g2, tri.b);
    MaslovOptions opt;
    opt.seed = 17 + k;
    const auto res = maslov_pair(p1, p2, opt);
    const Mat phi = testsupport::symplectic_exp(rng, n, 0.3);
    if (!res.certified) {
      o.fail(at("not certified", k));
      continue;
    }
    int total = 0;
    for (const auto& s : res.segments) total += s.contribution;
    if (total != res.index) o.fail(at("segments do not sum to the index", k));
    if (maslov_pair(p1.reversed(), p2.reversed(), opt).index != -res.index) o.fail(at("reversal", k));
    if (maslov_pair(p1.transformed(phi), p2.transformed(phi), opt).index != res.index) {
      o.fail(at("symplectic invariance", k));
    }
    const auto fine = grid(0, 2, 2 * count - 1);
    if (maslov_pair(flow_path(fine, g1, tri.a), flow_path(fine, g2, tri.b), opt).index != res.index) {
      o.fail(at("refinement", k));
    }
    const std::size_t mid = count / 3;
    const int left = maslov_pair(p1.slice(0, mid), p2.slice(0, mid), opt).index;
    const int right = maslov_pair(p1.slice(mid, count - 1), p2.slice(mid, count - 1), opt).index;
    if (left + right != res.index) o.fail(at("additivity", k));
  }
  return o;
}

inline Outcome transversality_to_dirichlet() {
  std::mt19937_64 rng(60);
  std::normal_distribution<double> g(0.0, 1.0);
  Outcome o;
  for (int k = 0; k < 3000 && o.cases < 220; ++k) {
    const int n = 1 + k % 3;
    const Mat a = testsupport::sym(rng, n);
    const Mat p = a * a + 0.1 * Mat::Identity(n, n);
    Mat q(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q(i, j) = g(rng);
    const Mat r = testsupport::sym(rng, n, 2.0);
    if (!is_hyperbolic(assemble_B(p, q, r, 0.0)).hyperbolic) continue;
    ++o.cases;
    for (double lambda : {0.0, 0.5, 4.0}) {
      const auto h = assemble_B(p, q, r, lambda);
      const auto sp = spectral_subspaces(h);
      if (transversality_margin(sp.plus, dirichlet_frame(n)) <= 1e-8) o.fail(at("V+ meets L_D", k));
      if (transversality_margin(sp.minus, dirichlet_frame(n)) <= 1e-8) o.fail(at("V- meets L_D", k));
      if (!is_hyperbolic(h).hyperbolic) o.fail(at("hyperbolicity lost as lambda grows", k));
    }
  }
  return o;
}

inline Outcome morse_monotone() {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> depth(0.0, 12.0);
  std::uniform_real_distribution<double> base(0.2, 2.0);
  Outcome o;
  for (int k = 0; k < 200; ++k, ++o.cases) {
    const double a = depth(rng), c = base(rng);
    const auto sys = testsystems::scalar_system(
        [](double) { return 1.0; }, [](double) { return 0.0; },
        [a, c](double t) { return c - a * testsystems::sech(t) * testsystems::sech(t); }, 1.0, 0.0,
        std::max(c, a - c));
    int prev = 1 << 30;
    for (int i = 0; i <= 8; ++i) {
      const double lambda = 1.5 * i;
      const int m = morse_index(discretize(sys, BoundarySpec{}, 8.0, 200, lambda)).morse;
      if (m > prev) o.fail(at("Morse count increased", k));
      prev = m;
    }
  }
  return o;
}

inline Outcome det_criterion_agreement() {
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> g(0.0, 1.0);
  Outcome o;
  int hyperbolic = 0;
  for (int k = 0; k < 300; ++k, ++o.cases) {
    const int n = 1 + k % 3;
    const Mat a = testsupport::sym(rng, n);
    const Mat p = a * a + 0.2 * Mat::Identity(n, n);
    Mat q(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q(i, j) = g(rng);
    const Mat r = testsupport::sym(rng, n, 1.5);
    const auto lhs = det_criterion(p, q, r);
    const auto rhs = is_hyperbolic(assemble_B(p, q, r, 0.0));
    if (lhs.hyperbolic != rhs.hyperbolic) o.fail(at("criteria disagree", k));
    hyperbolic += rhs.hyperbolic;
  }
  // Both outcomes must be well represented for the comparison to mean anything.
  if (hyperbolic <= 30 || hyperbolic >= 270) o.fail("draws not mixed: " + std::to_string(hyperbolic) + " hyperbolic");
  return o;
}

struct Suite {
  const char* name;
  std::function<Outcome()> run;
};

inline std::vector<Suite> suites() {
  return {{"triple index vs common-transversal oracle", triple_index_oracle},
          {"Hormander expressions agree", hormander_agreement},
          {"Maslov reversal and symplectic invariance", maslov_reversal_invariance},
          {"spectral subspaces transversal to L_D", transversality_to_dirichlet},
          {"Morse counts monotone in lambda", morse_monotone},
          {"det criterion matches hyperbolicity", det_criterion_agreement}};
}

}  // namespace props
