#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "modes.hpp"

namespace wavemle {

// Route for J12: the terminal-value identity J12 = (1/2) sum k^2 u_k^2(T)
// holds pathwise and has no time-discretization error; the Riemann route is
// the literal trapezoid of sum k^2 u_k v_k.
enum class J12Route { kIdentity, kRiemann };

// Route for B2: Ito's formula gives int v dv = (v^2(T) - T)/2 per mode
// exactly; the Riemann route is the left-point sum.
enum class B2Route { kItoIdentity, kRiemann };

struct SufficientStats {
  double j1 = 0.0;
  double j2 = 0.0;
  double j12 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  int n_modes = 0;
  double dt = 0.0;
  J12Route route_j12 = J12Route::kIdentity;
  B2Route route_b2 = B2Route::kItoIdentity;
};

struct Estimate {
  double theta1_hat = 0.0;
  double theta2_hat = 0.0;
  double det = 0.0;  // J1 J2 - J12^2
  double d_n = 0.0;  // J12^2 / (J1 J2)
  int n_modes = 0;
};

// Raw per-mode functionals of one (u, v) path; the building blocks every
// route is assembled from.  Time integrals use the trapezoid rule, stochastic
// integrals left-point sums (any other rule estimates a Stratonovich-shifted
// quantity).
struct ModeStatTerms {
  double u2_time_integral = 0.0;
  double v2_time_integral = 0.0;
  double uv_time_integral = 0.0;
  double u_dv_ito = 0.0;
  double v_dv_ito = 0.0;
  double terminal_u_sq = 0.0;
  double terminal_v_sq = 0.0;
};

ModeStatTerms mode_stat_terms(std::span<const double> u, std::span<const double> v,
                              double dt, std::int64_t stride = 1);

void accumulate_stats(SufficientStats& stats, int k, const ModeStatTerms& terms,
                      double horizon);

SufficientStats sufficient_stats(const FieldTrajectory& field,
                                 J12Route route_j12 = J12Route::kIdentity,
                                 B2Route route_b2 = B2Route::kItoIdentity);

// Closed-form joint MLE from the normal equations
//   theta1 J1 - theta2 J12 = B1,  -theta1 J12 + theta2 J2 = B2.
// Verifies the residuals of the solved system to 1e-8 relative and rejects
// near-collinear statistics (det <= 1e-12 J1 J2).
Estimate mle(const SufficientStats& stats);

struct XiDiagnostics {
  double xi1 = 0.0;  // sum k^2 int u_k dw_k (left-point, reconstructed dw)
  double xi2 = 0.0;  // sum int v_k dw_k
};

// Simulation-only diagnostics: they consume the reconstructed noise
// increments, which real observations do not provide, and inherit the O(dt)
// reconstruction bias.
XiDiagnostics xi_diagnostics(const FieldTrajectory& field);

struct RouteLevel {
  std::int64_t num_steps = 0;
  double j12_riemann = 0.0;
  double j12_identity = 0.0;
  double b2_riemann = 0.0;
  double b2_identity = 0.0;
  double j12_discrepancy = 0.0;
  double b2_discrepancy = 0.0;
};

struct RouteReport {
  std::array<RouteLevel, 3> levels;  // M, M/2, M/4
  double j12_order = 0.0;            // log2 slope of the discrepancy decay
  double b2_order = 0.0;
};

// Evaluates both J12 and B2 routes on the field's grid and on its 2x and 4x
// coarsenings (requires M divisible by 4) and reports how fast the
// discrepancies shrink.
RouteReport route_consistency(const FieldTrajectory& field);

}  // namespace wavemle
