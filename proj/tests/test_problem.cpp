#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "symmorse/error.hpp"
#include "symmorse/expr.hpp"
#include "symmorse/problem.hpp"
#include "test_support.hpp"

using namespace symmorse;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

// Random expression text paired with its value at t, built bottom-up so the oracle never
// goes through the parser. Divisors and exponent bases are kept away from zero.
struct Gen {
  std::mt19937_64 rng;
  double t;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::pair<std::string, double> leaf() {
    if (pick(2) == 0) return {"t", t};
    const double c = std::round(std::uniform_real_distribution<double>(0.0, 9.0)(rng) * 100) / 100;
    std::ostringstream s;
    s << c;
    return {s.str(), std::stod(s.str())};
  }

  std::pair<std::string, double> expr(int depth) {
    if (depth == 0) return leaf();
    auto [a, va] = expr(depth - 1);
    switch (pick(9)) {
      case 0: {
        auto [b, vb] = expr(depth - 1);
        return {a + " + " + b, va + vb};
      }
      case 1: {
        auto [b, vb] = expr(depth - 1);
        return {"(" + a + ") - (" + b + ")", va - vb};
      }
      case 2: {
        auto [b, vb] = expr(depth - 1);
        return {"(" + a + ")*(" + b + ")", va * vb};
      }
      case 3: {
        auto [b, vb] = expr(depth - 1);
        return {"(" + a + ")/(2 + abs(" + b + "))", va / (2 + std::abs(vb))};
      }
      case 4: return {"tanh(" + a + ")", std::tanh(va)};
      case 5: return {"sech(" + a + ")", sech(va)};
      case 6: return {"sin(" + a + ") - cos(" + a + ")", std::sin(va) - std::cos(va)};
      case 7: return {"-(" + a + ")", -va};
      default: {
        const int k = pick(4);
        return {"(1 + sech(" + a + "))^" + std::to_string(k), std::pow(1 + sech(va), k)};
      }
    }
  }
};

int parse_column(const std::string& text) {
  try {
    Expression::parse(text);
  } catch (const ParseError& e) {
    return e.column();
  }
  return 0;
}

ProblemSpec random_spec(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.0, 3.0);
  Gen g{std::mt19937_64(rng()), 0.0};
  ProblemSpec s;
  s.name = "random-" + std::to_string(k);
  s.n = 1 + static_cast<int>(rng() % 3);
  for (auto* m : {&s.P, &s.Q, &s.R}) {
    m->assign(s.n, std::vector<std::string>(s.n));
    for (auto& row : *m)
      for (auto& e : row) e = g.expr(static_cast<int>(rng() % 3)).first;
  }
  s.C1 = 0.1 + u(rng);
  s.C2 = u(rng);
  s.C3 = u(rng);
  s.f2_declared = rng() % 2;
  s.side = static_cast<Side>(rng() % 3);
  if (s.side != Side::line || rng() % 2) s.l0 = testsupport::graph(testsupport::sym(rng, s.n));
  if (rng() % 2) s.T = 5 + u(rng);
  if (rng() % 2) s.nodes = 101 + static_cast<int>(rng() % 5000);
  if (rng() % 2) s.lambda_max = u(rng);
  if (rng() % 2) s.threads = 1 + static_cast<int>(rng() % 8);
  if (rng() % 2) s.tau_spacing = 0.01 + u(rng);
  if (rng() % 2) s.sweep_points = 2 + static_cast<int>(rng() % 100);
  if (rng() % 2) s.tolerances["rank_tol"] = 1e-9 * (1 + u(rng));
  if (rng() % 2) s.tolerances["margin_min"] = 1e-4 * (1 + u(rng));
  return s;
}

}  // namespace

TEST_CASE("profile entries evaluate to their closed forms") {
  const Expression r = Expression::parse("1 - 6*sech(t)^2");
  const Expression q = Expression::parse("2*tanh(t)");
  const Expression c = Expression::parse("1");
  for (double t : {-7.5, -1.0, 0.0, 0.3, 2.0, 11.0}) {
    CHECK(r(t) == doctest::Approx(1 - 6 * sech(t) * sech(t)).epsilon(1e-14));
    CHECK(q(t) == doctest::Approx(2 * std::tanh(t)).epsilon(1e-14));
    CHECK(c(t) == 1.0);
  }
}

TEST_CASE("precedence and associativity") {
  CHECK(Expression::parse("-t^2")(3) == -9);
  CHECK_THROWS_AS(Expression::parse("2^3^0"), ParseError);  // caret takes one integer
  CHECK(Expression::parse("8/4/2")(0) == 1);
  CHECK(Expression::parse("10 - 4 - 3")(0) == 3);
  CHECK(Expression::parse("1 + 2*3")(0) == 7);
  CHECK(Expression::parse("(1 + 2)*3")(0) == 9);
  CHECK(Expression::parse("t^-2")(2) == 0.25);
  CHECK(Expression::parse("exp(abs(-t))")(-1) == doctest::Approx(std::exp(1.0)));
  CHECK(Expression::parse("1.5e1 + .5")(0) == 15.5);
}

TEST_CASE("random expressions match a direct evaluation (300 draws)") {
  std::mt19937_64 rng(4101);
  int failures = 0;
  for (int k = 0; k < 300; ++k) {
    const double t = std::uniform_real_distribution<double>(-4, 4)(rng);
    Gen g{std::mt19937_64(rng()), t};
    const auto [text, expected] = g.expr(1 + k % 4);
    const Expression e = Expression::parse(text);
    if (std::abs(e(t) - expected) > 1e-12 * (1 + std::abs(expected))) {
      ++failures;
      MESSAGE(text << " at t = " << t << ": " << e(t) << " vs " << expected);
    }
    // The canonical rendering is itself parseable and means the same thing.
    const Expression again = Expression::parse(e.canonical());
    if (std::abs(again(t) - e(t)) > 1e-12 * (1 + std::abs(expected))) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("parse errors carry a column") {
  CHECK(parse_column("1 + * t") == 5);
  CHECK(parse_column("tanhh(t)") == 1);
  CHECK(parse_column("sech(t") == 7);
  CHECK(parse_column("t^1.5") == 4);
  CHECK(parse_column("x") == 1);
  CHECK(parse_column("") == 1);
  CHECK(parse_column("t t") == 3);
  CHECK_THROWS_AS(Expression::parse("1/"), ParseError);
}

TEST_CASE("problem files report line and column") {
  const std::string text =
      "# comment\n[problem]\nname = bad\nn = 1\n\n[coefficients]\nP = 1\nQ = 0\nR = 1 - 6*sech(t^2\n"
      "[constants]\nC1 = 1\nC2 = 0\nC3 = 1\n";
  try {
    parse_problem(text);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 9);
    CHECK(e.column() == 19);
  }

  const std::string base = "[problem]\nname = p\nn = 1\n[coefficients]\nP = 1\nQ = 0\nR = 1\n"
                           "[constants]\nC1 = 1\nC2 = 0\nC3 = 1\n";
  CHECK_NOTHROW(parse_problem(base));
  CHECK_THROWS_AS(parse_problem(base + "[extras]\n"), ParseError);
  CHECK_THROWS_AS(parse_problem(base + "[numerics]\nT = 3\nT = 4\n"), ParseError);
  CHECK_THROWS_AS(parse_problem(base + "[numerics]\nspeed = 3\n"), ParseError);
  CHECK_THROWS_AS(parse_problem(base + "[tolerances]\nnot_a_tol = 1e-3\n"), ParseError);
  CHECK_THROWS_AS(parse_problem("name = p\n"), ParseError);
  CHECK_THROWS_AS(parse_problem("[problem]\nname = p\n"), ValidationError);
  CHECK_THROWS_AS(parse_problem(base + "[boundary]\nL0 = 1; 1; 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_problem(base + "[numerics]\nnodes = 3\n"), ValidationError);

  std::string half = base;
  half.replace(half.find("n = 1"), 5, "n = 1\nside = plus");
  CHECK_THROWS_AS(parse_problem(half), ValidationError);
  CHECK_NOTHROW(parse_problem(half + "[boundary]\nL0 = 0; 1\n"));

  std::string wide = base;
  wide.replace(wide.find("R = 1"), 5, "R = 1, 0; 0, 1");
  CHECK_THROWS_AS(parse_problem(wide), ValidationError);
}

TEST_CASE("parse, serialize, parse is the identity (250 draws)") {
  std::mt19937_64 rng(77);
  int failures = 0;
  for (int k = 0; k < 250; ++k) {
    const ProblemSpec s = random_spec(rng, k);
    const std::string text = serialize_problem(s);
    const ProblemSpec back = parse_problem(text);
    if (!(back == s)) {
      ++failures;
      MESSAGE(text);
    }
    if (serialize_problem(back) != text) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("catalog problems parse, round-trip and validate") {
  const auto& names = builtin_names();
  REQUIRE(names.size() >= 5);
  for (const char* must : {"poschl-teller-1", "poschl-teller-2", "scalar-case-1", "scalar-case-2"}) {
    CHECK(std::find(names.begin(), names.end(), must) != names.end());
  }
  bool coupled = false;
  for (const auto& name : names) {
    CAPTURE(name);
    const ProblemSpec s = parse_problem(builtin_problem(name));
    CHECK(s.name == name);
    CHECK(parse_problem(serialize_problem(s)) == s);
    coupled = coupled || s.n == 2;
    const CoefficientSystem sys = build_system(s);
    for (const auto& item : validate_system(sys, 20.0)) {
      CAPTURE(item.name);
      CHECK(item.ok);
    }
  }
  CHECK(coupled);
  CHECK_THROWS_AS(builtin_problem("nope"), ArgumentError);
}

TEST_CASE("scalar case 2 builds the intended coefficients") {
  const CoefficientSystem sys = build_system(parse_problem(builtin_problem("scalar-case-2")));
  CHECK(sys.Q(0.7)(0, 0) == doctest::Approx(2 * std::tanh(0.7)));
  CHECK(sys.Q_plus(0, 0) == doctest::Approx(2).epsilon(1e-12));
  CHECK(sys.Q_minus(0, 0) == doctest::Approx(-2).epsilon(1e-12));
  CHECK(sys.R_plus(0, 0) == doctest::Approx(1));
}

TEST_CASE("overrides flow into the run configuration") {
  ProblemSpec s = parse_problem(builtin_problem("poschl-teller-2"));
  s.T = 12;
  s.nodes = 801;
  s.tolerances["margin_min"] = 0.25;
  const RunConfig cfg = run_config(s);
  CHECK(cfg.T == 12);
  CHECK(cfg.nodes == 801);
  CHECK(cfg.tol.margin_min == 0.25);
  CHECK(cfg.tol.rank_tol == Tolerances{}.rank_tol);
  s.tolerances["bogus"] = 1;
  CHECK_THROWS_AS(run_config(s), ValidationError);

  CHECK(boundary_of(s).side == Side::line);
  const BoundarySpec plus = boundary_of(s, Side::plus);
  CHECK(plus.side == Side::plus);
  REQUIRE(plus.l0);
  s.l0.reset();
  CHECK_THROWS_AS(boundary_of(s, Side::minus), ArgumentError);
}
