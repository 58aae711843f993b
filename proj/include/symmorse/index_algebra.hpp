#pragma once

#include "symmorse/symplectic.hpp"

namespace symmorse {

/// The form Q(alpha, beta; delta)(x1, x2) = omega(y1, z2) on alpha ∩ (beta + delta),
/// where x = y + z with y in beta and z in delta.
struct QForm {
  Mat domain_basis;     // 2n x m, orthonormal
  Mat gram;             // m x m, symmetrized
  double asymmetry = 0;  // max |G - G^T| before symmetrization
  double max_residual = 0;
};

struct InertiaTriple {
  int pos = 0;
  int neg = 0;
  int null = 0;
};

QForm q_form(const LagrangianFrame& alpha, const LagrangianFrame& beta, const LagrangianFrame& delta,
             const Tolerances& tol = {});

/// Inertia with the zero band eig_zero_tol * (spectral radius + 1).
InertiaTriple inertia(const Mat& symmetric, const Tolerances& tol = {});

/// iota(alpha, beta, kappa) = m+(Q(alpha, beta; kappa)) + dim(alpha ∩ kappa) - dim(alpha ∩ beta ∩ kappa).
int triple_index(const LagrangianFrame& alpha, const LagrangianFrame& beta, const LagrangianFrame& kappa,
                 const Tolerances& tol = {});

/// s(l0, l1; v0, v1) = iota(l0, l1, v1) - iota(l0, l1, v0).
int hormander_index(const LagrangianFrame& l0, const LagrangianFrame& l1, const LagrangianFrame& v0,
                    const LagrangianFrame& v1, const Tolerances& tol = {});

/// The second expression iota(l0, v0, v1) - iota(l1, v0, v1).
int hormander_index_alt(const LagrangianFrame& l0, const LagrangianFrame& l1, const LagrangianFrame& v0,
                        const LagrangianFrame& v1, const Tolerances& tol = {});

}  // namespace symmorse
