// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "properties.hpp"
#include "symmorse/problem.hpp"
#include "symmorse/verify.hpp"

using namespace symmorse;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

CoefficientSystem catalog(const std::string& name) { return build_system(parse_problem(builtin_problem(name))); }

long long integer(const IndexReport& r, const std::string& name) {
  for (const auto& [k, v] : r.integers)
    if (k == name) return v;
  return -999;
}

double metric(const IndexReport& r, const std::string& name) {
  for (const auto& [k, v] : r.metrics)
    if (k == name) return v;
  return NAN;
}

std::string failed_flags(const IndexReport& r) {
  std::string out;
  for (const auto& f : r.flags)
    if (!f.ok) out += (out.empty() ? "" : "; ") + f.name + (f.detail.empty() ? "" : " " + f.detail);
  return out;
}

void require_clean(Verdict& v, const IndexReport& r) {
  v.require(r.certified, r.problem + " " + r.check + " certified (" + failed_flags(r) + ")");
  v.require(r.residual == 0, r.problem + " " + r.check + " residual " + std::to_string(r.residual));
}

// Lowest eigenvalues of -u'' + (1 - 6 sech^2 t) u by dense second differences on [-L, L],
// independent of the finite element code.
std::vector<double> poschl_teller_fd(double L, int m) {
  const double h = 2 * L / (m + 1);
  Mat a = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const double t = -L + (i + 1) * h;
    const double s = 1 / std::cosh(t);
    a(i, i) = 2 / (h * h) + 1 - 6 * s * s;
    if (i + 1 < m) a(i, i + 1) = a(i + 1, i) = -1 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
}

std::uint64_t seed() {
  if (const char* s = std::getenv("SYMMORSE_SEED")) return std::strtoull(s, nullptr, 0);
  return 20240601;
}

int report(int number, const Verdict& v, double seconds) {
  std::cout << "criterion " << number << ": " << (v.pass ? "PASS" : "FAIL") << " " << v.detail.str() << " ("
            << std::fixed << std::setprecision(2) << seconds << " s)" << std::defaultfloat << std::setprecision(6)
            << std::endl;
  return v.pass ? 0 : 1;
}

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Verdict criterion1() {
  Verdict v;
  const auto t0 = Clock::now();
  const IndexReport r = verify_theorem_C(catalog("poschl-teller-2"), RunConfig{});
  const double secs = since(t0);
  const auto ev = poschl_teller_fd(12.0, 1199);
  const int fd_morse = (ev[0] < -1e-2) + (ev[1] < -1e-2);
  const int fd_null = (std::abs(ev[0]) < 1e-2) + (std::abs(ev[1]) < 1e-2);
  v.detail << "Poschl-Teller N=2: morse " << r.morse << " nullity " << r.nullity << " geo " << r.geo << " correction "
           << r.correction << " residual " << r.residual << "; difference-scheme eigenvalues " << ev[0] << ", "
           << ev[1] << "; theorem C in " << secs << " s";
  v.require(std::abs(ev[0] + 3) < 1e-2 && std::abs(ev[1]) < 1e-2 && ev[2] > 0.5, "oracle spectrum");
  v.require(r.morse == fd_morse && r.nullity == fd_null, "morse/nullity vs oracle");
  v.require(r.morse == 1 && r.nullity == 1 && r.geo == 1 && r.correction == 0, "indices");
  require_clean(v, r);
  v.require(secs < 30, "runtime");
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto t0 = Clock::now();
  const IndexReport r = verify_theorem_C(catalog("poschl-teller-1"), RunConfig{});
  const double secs = since(t0);
  v.detail << "Poschl-Teller N=1: morse " << r.morse << " nullity " << r.nullity << " geo " << r.geo << " residual "
           << r.residual << "; " << secs << " s";
  v.require(r.morse == 0 && r.nullity == 1 && r.geo == 0, "indices");
  require_clean(v, r);
  v.require(secs < 10, "runtime");
  return v;
}

Verdict criterion3() {
  Verdict v;
  const IndexReport r = verify_theorem_C(catalog("scalar-case-1"), RunConfig{});
  v.detail << "scalar case 1: morse " << r.morse << " geo " << r.geo << " correction " << r.correction;
  v.require(r.correction == 0, "correction 0");
  v.require(r.morse == r.geo, "morse = geo");
  require_clean(v, r);
  return v;
}

Verdict criterion4() {
  Verdict v;
  const CoefficientSystem sys = catalog("scalar-case-2");
  const IndexReport c = verify_theorem_C(sys, RunConfig{});
  const IndexReport b = verify_theorem_B(sys, BoundarySpec{}, RunConfig{});
  v.detail << "scalar case 2: morse " << c.morse << " geo " << c.geo << " correction " << c.correction
           << "; limit-path Maslov index " << integer(b, "Y");
  v.require(c.correction == 1, "correction 1");
  v.require(integer(b, "Y") == -1, "limit-path index -1");
  v.require(c.morse == c.geo + 1, "morse = geo + 1");
  require_clean(v, c);
  require_clean(v, b);
  return v;
}

Verdict criterion5() {
  Verdict v;
  const IndexReport pt = verify_theorem_B(catalog("poschl-teller-2"), BoundarySpec{}, RunConfig{});
  const IndexReport c2 = verify_theorem_B(catalog("scalar-case-2"), BoundarySpec{}, RunConfig{});
  const double at = metric(pt, "crossing 0 lambda");
  v.detail << "spectral flow vs Maslov side: Poschl-Teller " << pt.lhs << " = " << pt.rhs << ", crossing at " << at
           << "; scalar case 2 " << c2.lhs << " = " << c2.rhs;
  require_clean(v, pt);
  require_clean(v, c2);
  v.require(integer(pt, "crossings") == 1 && std::abs(at - 3) <= 1e-3, "crossing at 3");
  return v;
}

Verdict criterion6() {
  Verdict v;
  std::mt19937_64 rng(seed());
  std::uniform_real_distribution<double> angle(0.25, M_PI - 0.25);
  RunConfig cfg;
  cfg.threads = 2;
  int runs = 0, certified = 0, residual_failures = 0;
  for (const char* name : {"poschl-teller-1", "poschl-teller-2", "scalar-case-1", "scalar-case-2"}) {
    const CoefficientSystem sys = catalog(name);
    for (Side side : {Side::plus, Side::minus}) {
      for (int k = 0; k < 10; ++k) {
        const double a = angle(rng);
        Mat f(2, 1);
        f << std::cos(a), std::sin(a);
        const LagrangianFrame l0(f);
        for (const IndexReport& r : {verify_theorem_D(sys, l0, side, cfg), verify_dirichlet_difference(sys, l0, side, cfg)}) {
          ++runs;
          if (!r.certified) {
            std::cerr << "  uncertified: " << name << " " << r.check << " " << r.side << " angle " << a << ": "
                      << failed_flags(r) << "\n";
            continue;
          }
          ++certified;
          if (r.residual != 0) {
            ++residual_failures;
            std::cerr << "  residual " << r.residual << ": " << name << " " << r.check << " " << r.side << " angle "
                      << a << "\n";
          }
        }
      }
    }
  }
  v.detail << "random L0: " << runs << " runs, " << certified << " certified, " << residual_failures
           << " with nonzero residual";
  v.require(residual_failures == 0, "residuals");
  v.require(certified > 0, "no certified run");
  return v;
}

Verdict criterion7() {
  Verdict v;
  v.detail << "property suites:";
  for (const auto& s : props::suites()) {
    const props::Outcome o = s.run();
    v.detail << " " << s.name << " " << o.cases - o.failures << "/" << o.cases << ";";
    v.require(o.ok(), std::string(s.name) + (o.first.empty() ? "" : ": " + o.first));
  }
  return v;
}

Verdict criterion8() {
  Verdict v;
  RunConfig cfg;
  cfg.threads = 2;
  v.detail << "doubling T and nodes:";
  auto check = [&](const std::string& label, const std::function<IndexReport(const RunConfig&)>& run) {
    const ConvergenceCheck c = check_convergence(run, cfg);
    v.detail << " " << label << (c.stable ? " stable;" : " CHANGED;");
    std::string diffs;
    for (const auto& d : c.differences) diffs += d + " ";
    v.require(c.stable, label + ": " + diffs);
    require_clean(v, c.base);
    require_clean(v, c.doubled);
  };
  for (const char* name : {"poschl-teller-2", "poschl-teller-1", "scalar-case-1", "scalar-case-2"}) {
    const CoefficientSystem sys = catalog(name);
    check(std::string(name) + " C", [sys](const RunConfig& c) { return verify_theorem_C(sys, c); });
  }
  const CoefficientSystem c2 = catalog("scalar-case-2");
  check("scalar-case-2 B", [c2](const RunConfig& c) { return verify_theorem_B(c2, BoundarySpec{}, c); });
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                          criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failed += report(static_cast<int>(i + 1), v, since(t0));
  }
  std::cout << (failed ? "FAILED " : "ALL PASS ") << criteria.size() - failed << "/" << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
