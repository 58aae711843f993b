#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symmorse/coefficients.hpp"
#include "symmorse/hamiltonian.hpp"
#include "symmorse/symplectic.hpp"

namespace symmorse {

enum class Side { line, plus, minus };

const char* side_name(Side side);

/// line: [-T, T], both ends clamped. plus: [0, T] with the L0 condition at 0.
/// minus: [-T, 0] with the L0 condition at 0.
struct BoundarySpec {
  Side side = Side::line;
  std::optional<LagrangianFrame> l0;
};

/// Symmetric band matrix, lower band stored row by row.
class BandedSym {
 public:
  BandedSym() = default;
  BandedSym(int size, int bandwidth);

  int size() const noexcept { return size_; }
  int bandwidth() const noexcept { return bw_; }
  /// Entry (i, j) with |i - j| <= bandwidth; either triangle.
  double& at(int i, int j);
  double get(int i, int j) const;
  Mat dense() const;
  double norm_inf() const;

 private:
  int size_ = 0;
  int bw_ = 0;
  std::vector<double> data_;
};

/// Finite-element discretization of A + lambda on a truncated interval with P1 elements.
struct DiscreteOperator {
  BandedSym stiffness;
  BandedSym mass;
  double t_lo = 0;
  double t_hi = 0;
  int nodes = 0;
  Side side = Side::line;
  double lambda = 0;
  double T = 0;
  int boundary_dofs = 0;  // dim V(L0) for half-line problems
  double C0 = 0;
};

DiscreteOperator discretize(const CoefficientSystem& sys, const BoundarySpec& boundary, double T, int nodes,
                            double lambda, const Tolerances& tol = {});

/// Number of generalized eigenvalues of (stiffness, mass) below sigma, from the inertia of
/// stiffness - sigma * mass (banded LDL^T; dense eigensolve if the factorization breaks down).
int count_below(const DiscreteOperator& op, double sigma);

struct MorseResult {
  int morse = 0;
  int nullity = 0;
  double zero_tol = 0;
  bool certified = true;  // false if an eigenvalue sits in the ambiguity band (tol, 10 tol)
  std::string note;
};

/// Counts below -zero_tol and within [-zero_tol, zero_tol], zero_tol = fem_zero_rel |K| / |M|.
MorseResult morse_index(const DiscreteOperator& op, const Tolerances& tol = {});

struct Crossing {
  double lambda = 0;
  int dim = 0;
};

struct SpectralFlowTrace {
  std::vector<double> lambdas;
  std::vector<int> morse_counts;
  std::vector<int> nullities;
  std::vector<Crossing> crossings;  // located to 1e-6 in lambda
  int sf = 0;                       // morse(0) - morse(lambda_max)
  int sf_partition = 0;             // partition sum of dim E_[0, a_i] differences
  int crossing_sum = 0;
  int start_nullity = 0;
  bool monotone = true;
  bool end_positive = true;
  bool certified = true;
  std::string note;
};

struct SweepOptions {
  int grid_points = 64;
  double locate_tol = 1e-6;
  int threads = 1;
};

SpectralFlowTrace spectral_flow_positive(const CoefficientSystem& sys, const BoundarySpec& boundary, double T,
                                         int nodes, double lambda_max, const Tolerances& tol = {},
                                         const SweepOptions& opt = {});

}  // namespace symmorse
