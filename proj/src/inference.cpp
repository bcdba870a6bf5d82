#include "inference.hpp"

#include <cmath>
#include <sstream>

namespace wavemle {

namespace {
constexpr double kSingularTol = 1e-12;
constexpr double kResidualTol = 1e-8;
}  // namespace

ModeStatTerms mode_stat_terms(std::span<const double> u, std::span<const double> v,
                              double dt, std::int64_t stride) {
  const std::int64_t len = static_cast<std::int64_t>(u.size());
  if (len != static_cast<std::int64_t>(v.size()))
    throw domain_error("mode_stat_terms: u and v lengths differ");
  if (stride < 1 || (len - 1) % stride != 0)
    throw domain_error("mode_stat_terms: invalid stride");
  const std::int64_t steps = (len - 1) / stride;
  if (steps < 2) throw domain_error("mode_stat_terms: need at least 2 steps");

  ModeStatTerms t;
  double sum_u2 = 0.5 * u[0] * u[0];
  double sum_v2 = 0.5 * v[0] * v[0];
  double sum_uv = 0.5 * u[0] * v[0];
  for (std::int64_t i = 1; i < steps; ++i) {
    const std::int64_t idx = i * stride;
    sum_u2 += u[idx] * u[idx];
    sum_v2 += v[idx] * v[idx];
    sum_uv += u[idx] * v[idx];
  }
  const std::int64_t last = steps * stride;
  sum_u2 += 0.5 * u[last] * u[last];
  sum_v2 += 0.5 * v[last] * v[last];
  sum_uv += 0.5 * u[last] * v[last];
  t.u2_time_integral = dt * sum_u2;
  t.v2_time_integral = dt * sum_v2;
  t.uv_time_integral = dt * sum_uv;

  double u_dv = 0.0, v_dv = 0.0;
  for (std::int64_t i = 0; i < steps; ++i) {
    const std::int64_t idx = i * stride;
    const double dv = v[idx + stride] - v[idx];
    u_dv += u[idx] * dv;
    v_dv += v[idx] * dv;
  }
  t.u_dv_ito = u_dv;
  t.v_dv_ito = v_dv;
  t.terminal_u_sq = u[last] * u[last];
  t.terminal_v_sq = v[last] * v[last];
  return t;
}

void accumulate_stats(SufficientStats& stats, int k, const ModeStatTerms& terms,
                      double horizon) {
  const double k2 = static_cast<double>(k) * static_cast<double>(k);
  stats.j1 += k2 * k2 * terms.u2_time_integral;
  stats.j2 += terms.v2_time_integral;
  stats.j12 += stats.route_j12 == J12Route::kIdentity ? 0.5 * k2 * terms.terminal_u_sq
                                                      : k2 * terms.uv_time_integral;
  stats.b1 += -k2 * terms.u_dv_ito;
  stats.b2 += stats.route_b2 == B2Route::kItoIdentity
                  ? 0.5 * (terms.terminal_v_sq - horizon)
                  : terms.v_dv_ito;
}

SufficientStats sufficient_stats(const FieldTrajectory& field, J12Route route_j12,
                                 B2Route route_b2) {
  if (field.num_modes() < 1) throw domain_error("sufficient_stats: empty field");
  if (field.grid.num_steps < 2)
    throw domain_error("sufficient_stats: degenerate grid, need at least 2 steps");
  SufficientStats stats;
  stats.n_modes = field.num_modes();
  stats.dt = field.grid.dt();
  stats.route_j12 = route_j12;
  stats.route_b2 = route_b2;
  // fixed k-ascending order so the reduction is bit-reproducible
  for (const ModeTrajectory& mode : field.modes)
    accumulate_stats(stats, mode.k, mode_stat_terms(mode.u, mode.v, stats.dt),
                     field.grid.horizon);
  return stats;
}

Estimate mle(const SufficientStats& stats) {
  if (!std::isfinite(stats.j1) || !std::isfinite(stats.j2) || !std::isfinite(stats.j12) ||
      !std::isfinite(stats.b1) || !std::isfinite(stats.b2))
    throw domain_error("mle: statistics must be finite");
  const double det = stats.j1 * stats.j2 - stats.j12 * stats.j12;
  if (!(det > kSingularTol * stats.j1 * stats.j2)) {
    std::ostringstream os;
    os << "mle: singular normal equations, det = " << det << " with J1*J2 = "
       << stats.j1 * stats.j2;
    throw singular_error(os.str());
  }

  Estimate est;
  est.n_modes = stats.n_modes;
  est.det = det;
  est.d_n = stats.j12 * stats.j12 / (stats.j1 * stats.j2);
  est.theta1_hat = (stats.b1 * stats.j2 + stats.b2 * stats.j12) / det;
  est.theta2_hat = (stats.b1 * stats.j12 + stats.b2 * stats.j1) / det;

  const double r1 = est.theta1_hat * stats.j1 - est.theta2_hat * stats.j12 - stats.b1;
  const double r2 = -est.theta1_hat * stats.j12 + est.theta2_hat * stats.j2 - stats.b2;
  const double scale1 = std::max({std::abs(est.theta1_hat) * stats.j1,
                                  std::abs(est.theta2_hat) * std::abs(stats.j12),
                                  std::abs(stats.b1)});
  const double scale2 = std::max({std::abs(est.theta1_hat) * std::abs(stats.j12),
                                  std::abs(est.theta2_hat) * stats.j2,
                                  std::abs(stats.b2)});
  if (std::abs(r1) > kResidualTol * scale1 || std::abs(r2) > kResidualTol * scale2)
    throw singular_error("mle: normal-equation residual check failed");
  return est;
}

XiDiagnostics xi_diagnostics(const FieldTrajectory& field) {
  XiDiagnostics xi;
  for (const ModeTrajectory& mode : field.modes) {
    if (static_cast<std::int64_t>(mode.dw.size()) != mode.grid.num_steps)
      throw domain_error("xi_diagnostics: trajectory carries no dw increments");
    const double k2 = static_cast<double>(mode.k) * static_cast<double>(mode.k);
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t i = 0; i < mode.grid.num_steps; ++i) {
      s1 += mode.u[i] * mode.dw[i];
      s2 += mode.v[i] * mode.dw[i];
    }
    xi.xi1 += k2 * s1;
    xi.xi2 += s2;
  }
  return xi;
}

RouteReport route_consistency(const FieldTrajectory& field) {
  const std::int64_t m = field.grid.num_steps;
  if (m % 4 != 0 || m < 8)
    throw domain_error("route_consistency: num_steps must be a multiple of 4 (>= 8)");

  RouteReport report;
  const std::int64_t strides[3] = {1, 2, 4};
  for (int level = 0; level < 3; ++level) {
    const std::int64_t stride = strides[level];
    const double dt = field.grid.dt() * static_cast<double>(stride);
    RouteLevel& row = report.levels[level];
    row.num_steps = m / stride;
    for (const ModeTrajectory& mode : field.modes) {
      const ModeStatTerms terms = mode_stat_terms(mode.u, mode.v, dt, stride);
      const double k2 = static_cast<double>(mode.k) * static_cast<double>(mode.k);
      row.j12_riemann += k2 * terms.uv_time_integral;
      row.j12_identity += 0.5 * k2 * terms.terminal_u_sq;
      row.b2_riemann += terms.v_dv_ito;
      row.b2_identity += 0.5 * (terms.terminal_v_sq - field.grid.horizon);
    }
    row.j12_discrepancy = std::abs(row.j12_riemann - row.j12_identity);
    row.b2_discrepancy = std::abs(row.b2_riemann - row.b2_identity);
  }
  const auto order = [](double coarse, double fine) {
    if (!(coarse > 0.0) || !(fine > 0.0)) return 0.0;
    return 0.5 * std::log2(coarse / fine);
  };
  report.j12_order =
      order(report.levels[2].j12_discrepancy, report.levels[0].j12_discrepancy);
  report.b2_order =
      order(report.levels[2].b2_discrepancy, report.levels[0].b2_discrepancy);
  return report;
}

}  // namespace wavemle
