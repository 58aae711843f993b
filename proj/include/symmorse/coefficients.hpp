#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symmorse/linalg.hpp"
#include "symmorse/tolerances.hpp"

namespace symmorse {

using MatrixFunction = std::function<Mat(double)>;

/// Coefficients P, Q, R of the Sturm-Liouville operator
///   A w = -(P w' + Q w)' + Q^T w' + R w
/// with their limits at -inf and +inf and the bound constants C1, C2, C3.
struct CoefficientSystem {
  std::string name;
  int n = 1;
  MatrixFunction P;
  MatrixFunction Q;
  MatrixFunction R;
  double C1 = 1.0;
  double C2 = 0.0;
  double C3 = 0.0;
  bool f2_declared = true;
  Mat P_minus, P_plus, Q_minus, Q_plus, R_minus, R_plus;

  // Evaluation accepts t = +-infinity and returns the stored limits there.
  Mat P_at(double t) const;
  Mat Q_at(double t) const;
  Mat R_at(double t) const;
};

/// Builds a system and computes the limits. Each limit is first evaluated at t = +-inf
/// (IEEE arithmetic resolves tanh, sech and exp profiles); if that is not finite the
/// function is sampled at growing |t| until consecutive values agree within limit_tol.
/// Throws ValidationError when a limit does not exist.
CoefficientSystem make_system(std::string name, int n, MatrixFunction P, MatrixFunction Q, MatrixFunction R,
                              double C1, double C2, double C3, bool f2_declared, const Tolerances& tol = {});

struct CheckItem {
  std::string name;
  bool ok = true;
  std::string detail;
};

/// Symmetry of P and R, invertibility of P, the (F1) bounds and, when declared, (F2),
/// on a uniform grid of [-T, T].
std::vector<CheckItem> validate_system(const CoefficientSystem& sys, double T, int samples = 2001,
                                       const Tolerances& tol = {});

/// Throws ValidationError naming the first failed check.
void require_valid(const std::vector<CheckItem>& checks);

/// (H2): both limit block matrices [P, Q; Q^T, R] positive definite.
bool h2_holds(const CoefficientSystem& sys);

}  // namespace symmorse
