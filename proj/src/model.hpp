#pragma once

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace wavemle {

// Parameters of the damped wave equation
//   u_tt = theta1 * u_xx + theta2 * u_t + white noise
// on (0, pi) with zero initial and Dirichlet boundary conditions.
// theta1 = a^2 is the squared wave speed; theta2 = -2b where b is the damping
// coefficient (b > 0 damps, b < 0 amplifies).
struct ModelParams {
  double theta1 = 1.0;
  double theta2 = 0.0;

  double a() const;
  double b() const { return -0.5 * theta2; }
};

// Uniform grid 0 = t_0 < t_1 < ... < t_M = T.
struct TimeGrid {
  double horizon = 1.0;        // T
  std::int64_t num_steps = 1;  // M

  double dt() const { return horizon / static_cast<double>(num_steps); }
  double time_at(std::int64_t i) const {
    return horizon * static_cast<double>(i) / static_cast<double>(num_steps);
  }
};

void check_grid(const TimeGrid& grid);

struct Validity {
  bool ok = false;
  int violating_k = 0;           // smallest violating mode, 0 when accepted
  bool strict_condition = false;  // a >= 1 and 2|b| <= 1
  std::string message;           // set when rejected

  explicit operator bool() const { return ok; }
};

// Hard gate: theta1 > 0 and theta1 * k^2 > theta2^2 / 4 for k = 1..k_max
// (k = 1 is the binding case).  strict_condition reports the stricter
// assumption a >= 1, 2|b| <= 1 as an informational flag only.
Validity validate_params(const ModelParams& params, int k_max);

// Throws domain_error with the validity message on rejection.
void require_valid(const ModelParams& params, int k_max);

// Effective angular frequency ell_k = sqrt(theta1 k^2 - theta2^2/4) of mode k.
double ell(int k, const ModelParams& params);

// C(theta2, T) = (e^{theta2 T} - theta2 T - 1) / (2 theta2^2), = T^2/4 at
// theta2 = 0.  Continuous across theta2 -> 0 (series branch near zero).
double c_factor(double theta2, double horizon);

// Ctilde(theta2, T) = (e^{theta2 T} - 1) / (2 theta2), = T/2 at theta2 = 0.
double c_tilde(double theta2, double horizon);

struct AsymptoticVariances {
  double var_theta1 = 0.0;  // 3 theta1 / C(theta2, T)
  double var_theta2 = 0.0;  // 1 / C(theta2, T)
};

AsymptoticVariances asymptotic_variances(const ModelParams& params, double horizon);

}  // namespace wavemle
