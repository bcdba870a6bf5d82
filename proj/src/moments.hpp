#pragma once

#include "model.hpp"

namespace wavemle {

struct ModeMoments {
  double e_uu = 0.0;  // E u_k^2(t)
  double e_vv = 0.0;  // E v_k^2(t)
  double e_uv = 0.0;  // E u_k(t) v_k(t)
};

// Second moments of mode k at time t, by the Ito isometry applied to the
// variation-of-parameters kernels.  Everything reduces to
//   int_0^t e^{-2bs} {1, cos(2 ell s), sin(2 ell s)} ds,
// evaluated in closed form; the removable singularity at b = 0 goes through
// expm1, so no small-parameter branch is needed here.
ModeMoments mode_second_moments(int k, const ModelParams& params, double t);

// The same three quantities integrated in time over [0, horizon].
ModeMoments mode_integrated_moments(int k, const ModelParams& params, double horizon);

struct ExpectedStats {
  double ej1 = 0.0;   // E J_{1,N} = sum k^4 int_0^T E u_k^2 dt
  double ej2 = 0.0;   // E J_{2,N} = sum int_0^T E v_k^2 dt
  double ej12 = 0.0;  // E J_{12,N} = (1/2) sum k^2 E u_k^2(T)
};

ExpectedStats expected_suff_stats(const ModelParams& params, int n_modes, double horizon);

// Cross-route value of E J_{12,N} as sum k^2 int_0^T E u_k v_k dt; equal to
// the terminal-value route up to round-off.
double expected_j12_time_integral(const ModelParams& params, int n_modes, double horizon);

struct PerModeLimit {
  double ku2_integral = 0.0;  // k^2 E int_0^T u_k^2 dt
  double v2_integral = 0.0;   // E int_0^T v_k^2 dt
  double limit_u = 0.0;       // C(theta2, T) / theta1
  double limit_v = 0.0;       // C(theta2, T)
};

PerModeLimit per_mode_limits(const ModelParams& params, double horizon, int k);

// Truncated expected squared Sobolev norm sum_{k<=N} k^{2 gamma} E u_k^2(t).
double sobolev_norm_sq(const ModelParams& params, double t, double gamma, int n_modes);

}  // namespace wavemle
