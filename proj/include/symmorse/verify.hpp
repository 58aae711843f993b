#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symmorse/hamiltonian.hpp"
#include "symmorse/maslov.hpp"
#include "symmorse/sturm_liouville.hpp"

namespace symmorse {

struct RunConfig {
  double T = 20.0;
  int nodes = 4001;
  double lambda_max = 0.0;      // <= 0 selects the applicable threshold
  double tau_spacing = 0.025;   // upper bound on the bundle sample spacing
  int threads = 1;
  std::uint64_t seed = 0x5eed;
  Tolerances tol;
  int sweep_points = 64;
};

/// One verification run. Integers are exact; metrics carry the floating diagnostics.
struct IndexReport {
  std::string problem;
  std::string check;
  std::string side = "line";
  int morse = 0;
  int nullity = 0;
  int geo = 0;
  int correction = 0;
  int lhs = 0;
  int rhs = 0;
  int residual = 0;
  bool certified = true;
  std::vector<CheckItem> flags;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, long long>> integers;
  std::vector<std::string> notes;
  double seconds = 0;

  void flag(const std::string& name, bool ok, const std::string& detail = "");
  void metric(const std::string& name, double value) { metrics.emplace_back(name, value); }
  void integer(const std::string& name, long long value) { integers.emplace_back(name, value); }
};

struct GeometricIndex {
  int value = 0;
  MaslovResult maslov;
  double limit_gap = 0;
  double max_isotropy = 0;
  // The pair at tau = 0; its intersection is the kernel of the operator.
  int kernel_dim = 0;
  double kernel_margin = 0;
};

/// Bundle sample grid on [0, T] fine enough for Maslov charts at this lambda.
std::vector<double> bundle_grid(const CoefficientSystem& sys, double lambda, double T, double max_spacing);

/// igeo = -iota_CLM(E^s(tau), E^u(-tau); tau in [0, T]).
GeometricIndex geometric_index_line(const CoefficientSystem& sys, double lambda, const RunConfig& cfg);

/// plus: -iota_CLM(E^s(tau), L0); minus: -iota_CLM(L0, E^u(-tau)).
GeometricIndex geometric_index_half(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side,
                                    double lambda, const RunConfig& cfg);

/// iota(E^u(-inf), E^s(+inf); L_D) at lambda.
int correction_line(const CoefficientSystem& sys, double lambda = 0.0, const Tolerances& tol = {});

/// m+(M - N) + dim(E^u(-inf) ∩ L_D) - dim(E^u(-inf) ∩ E^s(+inf) ∩ L_D).
int correction_line_shortcut(const CoefficientSystem& sys, double lambda = 0.0, const Tolerances& tol = {});

/// plus: iota(L_D, L0, E^s(+inf)); minus: iota(E^u(-inf), L0; L_D).
int correction_half(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side, double lambda = 0.0,
                    const Tolerances& tol = {});

IndexReport verify_theorem_C(const CoefficientSystem& sys, const RunConfig& cfg);
IndexReport verify_theorem_D(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side, const RunConfig& cfg);
IndexReport verify_dirichlet_difference(const CoefficientSystem& sys, const LagrangianFrame& l0, Side side,
                                        const RunConfig& cfg);
IndexReport verify_theorem_B(const CoefficientSystem& sys, const BoundarySpec& boundary, const RunConfig& cfg);

/// Reruns `run` with T and nodes doubled and compares every integer of the two reports.
struct ConvergenceCheck {
  IndexReport base;
  IndexReport doubled;
  bool stable = true;
  std::vector<std::string> differences;
};

ConvergenceCheck check_convergence(const std::function<IndexReport(const RunConfig&)>& run, const RunConfig& cfg);

/// Coefficient validation, hyperbolicity of the limits, thresholds and, given L0, the boundary
/// constant. No index is computed; certified is false when any check fails.
IndexReport check_problem(const CoefficientSystem& sys, const std::optional<LagrangianFrame>& l0,
                          const RunConfig& cfg);

/// Morse counts along lambda plus the principal angles of the tau-path that carries the
/// geometric index at lambda = 0.
struct SweepResult {
  std::string problem;
  std::string side;
  double lambda_max = 0;
  SpectralFlowTrace trace;
  std::vector<double> tau;
  std::vector<Vec> angles;
  std::string angle_pair;
  bool certified = true;
  double seconds = 0;
};

SweepResult sweep(const CoefficientSystem& sys, const BoundarySpec& boundary, const RunConfig& cfg);

/// Whole-line indices plus, for half-line sides, the indices with boundary L0.
IndexReport compute_indices(const CoefficientSystem& sys, const BoundarySpec& boundary, const RunConfig& cfg);

}  // namespace symmorse
