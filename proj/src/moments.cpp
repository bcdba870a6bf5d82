#include "moments.hpp"

#include <cmath>

namespace wavemle {

namespace {

// E1 = int_0^d e^{-2bs} ds, Ec/Es the same against cos(2 ell s) / sin(2 ell s).
struct KernelIntegrals {
  double e1 = 0.0;
  double ec = 0.0;
  double es = 0.0;
};

KernelIntegrals kernel_integrals(double b, double l, double d) {
  const double beta = 2.0 * b;
  const double omega = 2.0 * l;
  const double den = beta * beta + omega * omega;
  const double decay = std::exp(-beta * d);
  const double c = std::cos(omega * d);
  const double s = std::sin(omega * d);
  KernelIntegrals k;
  k.e1 = beta == 0.0 ? d : -std::expm1(-beta * d) / beta;
  k.ec = (beta - decay * (beta * c - omega * s)) / den;
  k.es = (omega - decay * (beta * s + omega * c)) / den;
  return k;
}

// sin^2 = (1 - cos)/2, cos^2 = (1 + cos)/2, sin*cos = sin/2 against the
// squared kernels of u and v.
ModeMoments combine(double b, double l, const KernelIntegrals& k) {
  const double iss = 0.5 * (k.e1 - k.ec);
  const double icc = 0.5 * (k.e1 + k.ec);
  const double isc = 0.5 * k.es;
  ModeMoments m;
  m.e_uu = iss / (l * l);
  m.e_uv = isc / l - b * iss / (l * l);
  m.e_vv = icc - 2.0 * b * isc / l + b * b * iss / (l * l);
  return m;
}

}  // namespace

ModeMoments mode_second_moments(int k, const ModelParams& params, double t) {
  if (!(t >= 0.0)) throw domain_error("mode_second_moments: t must be >= 0");
  const double l = ell(k, params);
  return combine(params.b(), l, kernel_integrals(params.b(), l, t));
}

ModeMoments mode_integrated_moments(int k, const ModelParams& params, double horizon) {
  if (!(horizon > 0.0))
    throw domain_error("mode_integrated_moments: horizon must be > 0");
  const double l = ell(k, params);
  const double b = params.b();
  const double beta = 2.0 * b;
  const double omega = 2.0 * l;
  const double den = beta * beta + omega * omega;
  const KernelIntegrals at_t = kernel_integrals(b, l, horizon);
  // int_0^T E1(t) dt = 2 C(theta2, T); the Ec/Es integrals fold back onto the
  // single-time values.
  KernelIntegrals integrated;
  integrated.e1 = 2.0 * c_factor(params.theta2, horizon);
  integrated.ec = (beta * horizon - beta * at_t.ec + omega * at_t.es) / den;
  integrated.es = (omega * horizon - beta * at_t.es - omega * at_t.ec) / den;
  return combine(b, l, integrated);
}

ExpectedStats expected_suff_stats(const ModelParams& params, int n_modes, double horizon) {
  if (n_modes < 1) throw domain_error("expected_suff_stats: n_modes must be >= 1");
  require_valid(params, n_modes);
  ExpectedStats out;
  for (int k = 1; k <= n_modes; ++k) {
    const double kk = static_cast<double>(k);
    const ModeMoments time_integral = mode_integrated_moments(k, params, horizon);
    const ModeMoments terminal = mode_second_moments(k, params, horizon);
    out.ej1 += kk * kk * kk * kk * time_integral.e_uu;
    out.ej2 += time_integral.e_vv;
    out.ej12 += 0.5 * kk * kk * terminal.e_uu;
  }
  return out;
}

double expected_j12_time_integral(const ModelParams& params, int n_modes, double horizon) {
  if (n_modes < 1)
    throw domain_error("expected_j12_time_integral: n_modes must be >= 1");
  require_valid(params, n_modes);
  double sum = 0.0;
  for (int k = 1; k <= n_modes; ++k) {
    const double kk = static_cast<double>(k);
    sum += kk * kk * mode_integrated_moments(k, params, horizon).e_uv;
  }
  return sum;
}

PerModeLimit per_mode_limits(const ModelParams& params, double horizon, int k) {
  const ModeMoments time_integral = mode_integrated_moments(k, params, horizon);
  const double c = c_factor(params.theta2, horizon);
  PerModeLimit out;
  out.ku2_integral = static_cast<double>(k) * static_cast<double>(k) * time_integral.e_uu;
  out.v2_integral = time_integral.e_vv;
  out.limit_u = c / params.theta1;
  out.limit_v = c;
  return out;
}

double sobolev_norm_sq(const ModelParams& params, double t, double gamma, int n_modes) {
  if (n_modes < 1) throw domain_error("sobolev_norm_sq: n_modes must be >= 1");
  require_valid(params, n_modes);
  double sum = 0.0;
  for (int k = 1; k <= n_modes; ++k) {
    sum += std::pow(static_cast<double>(k), 2.0 * gamma) *
           mode_second_moments(k, params, t).e_uu;
  }
  return sum;
}

}  // namespace wavemle
