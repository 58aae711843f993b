#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symmorse/coefficients.hpp"
#include "symmorse/sturm_liouville.hpp"
#include "symmorse/verify.hpp"

namespace symmorse {

/// One problem file. Expression entries are kept as source text; build_system compiles them.
struct ProblemSpec {
  std::string name;
  int n = 1;
  std::vector<std::vector<std::string>> P, Q, R;
  double C1 = 1, C2 = 0, C3 = 0;
  bool f2_declared = true;
  Side side = Side::line;
  std::optional<Mat> l0;  // 2n x n

  std::optional<double> T;
  std::optional<int> nodes;
  std::optional<double> lambda_max;
  std::optional<int> threads;
  std::optional<double> tau_spacing;
  std::optional<int> sweep_points;
  std::map<std::string, double> tolerances;  // overrides by Tolerances field name

  bool operator==(const ProblemSpec&) const;
};

/// Parses the sectioned key = value format. Throws ParseError (with line and column) for
/// syntax errors and ValidationError for well-formed but inconsistent content.
ProblemSpec parse_problem(const std::string& text);

/// Writes a spec back in the same format; parse_problem(serialize_problem(s)) == s.
std::string serialize_problem(const ProblemSpec& spec);

/// Compiles the expressions and computes the limits. Throws ValidationError if a limit is missing.
CoefficientSystem build_system(const ProblemSpec& spec, const Tolerances& tol = {});

/// Tolerances with the spec's overrides applied; unknown names throw ValidationError.
Tolerances apply_tolerances(const ProblemSpec& spec, Tolerances tol = {});
RunConfig run_config(const ProblemSpec& spec, RunConfig base = {});
BoundarySpec boundary_of(const ProblemSpec& spec, std::optional<Side> override_side = std::nullopt);

const std::vector<std::string>& builtin_names();
/// Source text of a catalog problem; throws ArgumentError for unknown names.
std::string builtin_problem(const std::string& name);

}  // namespace symmorse
