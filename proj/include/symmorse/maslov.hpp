#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symmorse/symplectic.hpp"

namespace symmorse {

/// A sampled continuous path of Lagrangian subspaces.
struct LagrangianPath {
  std::vector<double> t;
  std::vector<LagrangianFrame> frames;

  std::size_t size() const noexcept { return t.size(); }
  int n() const { return frames.empty() ? 0 : frames.front().n(); }

  /// Throws ValidationError unless t is strictly increasing, all frames share n,
  /// and consecutive samples are closer than seg_angle_max in gap.
  void validate(const Tolerances& tol = {}) const;

  /// Same subspaces traversed on [-b, -a].
  LagrangianPath reversed() const;
  LagrangianPath transformed(const Mat& symplectic) const;
  /// Samples with index in [first, last].
  LagrangianPath slice(std::size_t first, std::size_t last) const;
};

LagrangianPath constant_path(const LagrangianFrame& frame, const std::vector<double>& t);

struct MaslovSegment {
  double t_lo = 0;
  double t_hi = 0;
  Mat chart;          // 2n x n orthonormal frame of the chart L
  int contribution = 0;
  double min_margin = 0;  // smallest transversality margin to L over the segment samples
};

struct MaslovResult {
  int index = 0;
  std::vector<MaslovSegment> segments;
  bool certified = true;
  std::string note;
};

struct MaslovOptions {
  Tolerances tol;
  std::uint64_t seed = 0x5eed;
  int random_charts = 16;
  int extra_rounds = 20;
  // Threads for the per-segment triple indices; results do not depend on it.
  int threads = 1;
};

/// iota_CLM(L1, L2) over the common grid. Each segment [t_lo, t_hi] uses a chart L
/// transversal to both paths and contributes iota(L2(t_hi), L1(t_hi); L) - iota(L2(t_lo), L1(t_lo); L).
MaslovResult maslov_pair(const LagrangianPath& path1, const LagrangianPath& path2, const MaslovOptions& opt = {});

/// iota_CLM(L0, L(t)).
MaslovResult maslov_fixed(const LagrangianFrame& l0, const LagrangianPath& path, const MaslovOptions& opt = {});

using FrameFunction = std::function<LagrangianFrame(double)>;

/// Samples both paths on [a, b], bisecting intervals until consecutive samples are
/// closer than seg_angle_max and charts can be certified (at most max_depth halvings).
MaslovResult maslov_pair_adaptive(const FrameFunction& f1, const FrameFunction& f2, double a, double b,
                                  int initial_samples, const MaslovOptions& opt = {}, int max_depth = 20);

}  // namespace symmorse
