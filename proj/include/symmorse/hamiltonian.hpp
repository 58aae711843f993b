#pragma once

#include <vector>

#include "symmorse/coefficients.hpp"
#include "symmorse/maslov.hpp"
#include "symmorse/symplectic.hpp"

namespace symmorse {

/// B_lambda(t) = [P^-1, -P^-1 Q; -Q^T P^-1, Q^T P^-1 Q - R - lambda I] and JB.
struct HamiltonianAt {
  Mat B;
  Mat JB;
  double t = 0;  // may be +-infinity
  double lambda = 0;
};

HamiltonianAt assemble_B(const Mat& P, const Mat& Q, const Mat& R, double lambda, double t = 0.0);
HamiltonianAt assemble_B(const CoefficientSystem& sys, double t, double lambda);

struct Hyperbolicity {
  bool hyperbolic = false;
  double margin = 0;  // min |Re mu| over the spectrum of JB
};

Hyperbolicity is_hyperbolic(const HamiltonianAt& h, const Tolerances& tol = {});

/// det[a^2 P + i a (Q^T - Q) + R] != 0 for all real a, decided on the companion
/// linearization of mu^2 P - mu (Q^T - Q) - R (mu = i a) rather than on JB.
Hyperbolicity det_criterion(const Mat& P, const Mat& Q, const Mat& R, const Tolerances& tol = {});

double threshold_identity_shift(const CoefficientSystem& sys);   // C2^2/C1 + C3
double threshold_nondegeneracy(const CoefficientSystem& sys);    // 2 C2^2/C1 + C3
double threshold_boundary(const CoefficientSystem& sys, double C0);  // 2 (C2 + C0)^2/C1 + C3

/// V(L0) = (L0 + L_D) ∩ L_N, identified with a subspace of R^n, and the symmetric A on it
/// with y1 = A x for (y, x) in L0.
struct BoundaryData {
  Mat V;  // n x k orthonormal basis
  Mat A;  // k x k symmetric, in the basis V
  double C0 = 0;
};

BoundaryData boundary_constant(const LagrangianFrame& l0, const Tolerances& tol = {});

/// Invariant subspaces of JB for Re mu > 0 (plus) and Re mu < 0 (minus), from an
/// ordered real Schur form.
struct SpectralSubspaces {
  LagrangianFrame plus;
  LagrangianFrame minus;
};

SpectralSubspaces spectral_subspaces(const HamiltonianAt& h, const Tolerances& tol = {});

enum class BundleKind { stable, unstable };

/// stable: path[k] = E^s(tau_k); unstable: path[k] = E^u(-tau_k).
struct InvariantBundle {
  BundleKind kind = BundleKind::stable;
  double lambda = 0;
  double T = 0;
  LagrangianPath path;
  LagrangianFrame limit;  // E^s(+inf) or E^u(-inf)
  double limit_gap = 0;   // gap between the spectral subspace of JB(+-T) and the limit
  double max_isotropy = 0;
  long steps = 0;
};

InvariantBundle bundle(const CoefficientSystem& sys, double lambda, BundleKind kind, const std::vector<double>& tau,
                       const Tolerances& tol = {});

/// Carries span(start) along z' = JB_lambda(t) z from t_start through `times`, which must
/// move monotonically away from t_start. Returns one orthonormal frame per time.
std::vector<Mat> transport_frames(const CoefficientSystem& sys, double lambda, const Mat& start, double t_start,
                                  const std::vector<double>& times, const Tolerances& tol = {}, long* steps = nullptr);

/// Uniform grid on [0, T] with spacing at most max_spacing.
std::vector<double> tau_grid(double T, double max_spacing);

struct GraphMatrices {
  Mat M;  // E^s_lambda(+inf) = span [M; I]
  Mat N;  // E^u_lambda(-inf) = span [N; I]
};

GraphMatrices graph_matrices_MN(const CoefficientSystem& sys, double lambda, const Tolerances& tol = {});

LagrangianFrame stable_limit(const CoefficientSystem& sys, double lambda, const Tolerances& tol = {});
LagrangianFrame unstable_limit(const CoefficientSystem& sys, double lambda, const Tolerances& tol = {});

/// Smallest time T on a 0.25 grid with |B(+-t) - B(+-inf)|_F <= limit_tol for all
/// T <= |t| <= t_max. Throws NumericError if no such T exists below t_max.
struct Truncation {
  double T = 0;
  double tail = 0;  // achieved sup of the tail bound over [T, t_max]
};

Truncation truncation_time(const CoefficientSystem& sys, double lambda, const Tolerances& tol = {},
                           double t_max = 200.0);

/// The tail bound max(|B(T) - B(+inf)|_F, |B(-T) - B(-inf)|_F).
double tail_bound(const CoefficientSystem& sys, double lambda, double T);

}  // namespace symmorse
