#pragma once

namespace symmorse {

// Numerical thresholds shared by every module. Each report echoes the values it used.
struct Tolerances {
  // Frames: relative rank threshold and isotropy bound on |F^T J F| (max norm).
  double rank_tol = 1e-10;
  double iso_tol = 1e-8;
  // Relative singular-value threshold deciding subspace intersections.
  double int_tol = 1e-8;
  // Frames whose (pre-orthonormalization) condition number exceeds this are rejected.
  double cond_max = 1e12;
  // Least-squares residual bound for x = y + z splittings in the Q form.
  double decomp_tol = 1e-8;
  // m+ counts eigenvalues above eig_zero_tol * (spectral radius + 1).
  double eig_zero_tol = 1e-8;
  // Absolute bound on |Re mu| for hyperbolicity.
  double hyp_tol = 1e-9;
  // Tail bound |B(t) - B(+-inf)|_F used to pick the truncation time.
  double limit_tol = 1e-10;
  // Maslov charts must keep this transversality margin at every sample.
  double margin_min = 1e-6;
  // Largest allowed principal-angle sine between consecutive path samples.
  double seg_angle_max = 0.2;
  // Bundle frames near tau = T must agree with the spectral limit to this gap.
  double bundle_tol = 1e-6;
  // RK4 step control: |JB| * h <= rk4_step_factor.
  double rk4_step_factor = 0.01;
  // Discrete zero band: |mu| <= fem_zero_rel * |K| / |M|.
  double fem_zero_rel = 1e-7;
};

}  // namespace symmorse
