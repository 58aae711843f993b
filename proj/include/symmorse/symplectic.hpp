#pragma once

#include <random>

#include "symmorse/linalg.hpp"
#include "symmorse/tolerances.hpp"

namespace symmorse {

// Points of R^{2n} are ordered (p, q): the momentum block comes first, so the
// Dirichlet subspace L_D = R^n x 0 is spanned by the first n unit vectors.

/// The standard symplectic matrix J = [0, -I; I, 0].
Mat standard_j(int n);

/// omega(u, v) = <J u, v>.
double omega(const Vec& u, const Vec& v);

/// A Lagrangian subspace of (R^{2n}, omega), stored as an orthonormal 2n x n frame.
class LagrangianFrame {
 public:
  /// Validates rank, conditioning and isotropy, then re-orthonormalizes the columns.
  /// Throws ValidationError naming the failed invariant.
  explicit LagrangianFrame(const Mat& columns, const Tolerances& tol = {});

  int n() const noexcept { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const noexcept { return basis_; }

  /// max |F^T J F| of the stored orthonormal frame.
  double isotropy_defect() const;

 private:
  struct Trusted {};
  LagrangianFrame(Trusted, Mat basis) : basis_(std::move(basis)) {}
  friend LagrangianFrame frame_from_orthonormal(Mat basis);

  Mat basis_;
};

/// Internal fast path for frames produced by validated computations (already orthonormal).
LagrangianFrame frame_from_orthonormal(Mat basis);

LagrangianFrame dirichlet_frame(int n);
LagrangianFrame neumann_frame(int n);
/// span [S; I] for symmetric S.
LagrangianFrame graph_frame(const Mat& s, const Tolerances& tol = {});

struct SubspaceIntersection {
  int dim = 0;
  Mat basis;  // 2n x dim, orthonormal
};

SubspaceIntersection intersect(const LagrangianFrame& a, const LagrangianFrame& b,
                               const Tolerances& tol = {});
bool is_transversal(const LagrangianFrame& a, const LagrangianFrame& b, const Tolerances& tol = {});

/// Symmetric M with span [M; I] = span(a). Requires a transversal to L_D.
Mat graph_matrix(const LagrangianFrame& a, const Tolerances& tol = {});

/// Sine of the smallest principal angle between a and b (0 when they intersect).
double transversality_margin(const LagrangianFrame& a, const LagrangianFrame& b);

/// Sine of the largest principal angle between a and b (0 when they coincide).
double subspace_gap(const LagrangianFrame& a, const LagrangianFrame& b);

/// Principal angles in radians, ascending.
Vec principal_angles(const LagrangianFrame& a, const LagrangianFrame& b);

/// Image of a Lagrangian frame under a symplectic matrix.
LagrangianFrame apply(const Mat& symplectic, const LagrangianFrame& a, const Tolerances& tol = {});

Mat random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0);
/// Random element of Sp(2n, R) built from shears and a block-diagonal factor.
Mat random_symplectic(std::mt19937_64& rng, int n);
/// Random Lagrangian subspace, uniformly oriented via a random orthogonal symplectic map.
LagrangianFrame random_lagrangian(std::mt19937_64& rng, int n);

}  // namespace symmorse
