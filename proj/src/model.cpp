#include "model.hpp"

#include <cmath>
#include <sstream>

namespace wavemle {

double ModelParams::a() const {
  if (!(theta1 > 0.0)) throw domain_error("ModelParams: theta1 must be > 0");
  return std::sqrt(theta1);
}

void check_grid(const TimeGrid& grid) {
  if (!(grid.horizon > 0.0)) throw domain_error("TimeGrid: horizon must be > 0");
  if (grid.num_steps < 1) throw domain_error("TimeGrid: num_steps must be >= 1");
}

Validity validate_params(const ModelParams& params, int k_max) {
  if (k_max < 1) throw domain_error("validate_params: k_max must be >= 1");
  Validity v;
  v.strict_condition =
      params.theta1 >= 1.0 && std::abs(params.theta2) <= 1.0;
  if (!(params.theta1 > 0.0)) {
    v.ok = false;
    v.violating_k = 1;
    std::ostringstream os;
    os << "theta1 = " << params.theta1 << " violates theta1 > 0";
    v.message = os.str();
    return v;
  }
  // theta1 k^2 grows in k, so k = 1 is the only mode that can bind.
  const double lhs = params.theta1;
  const double rhs = 0.25 * params.theta2 * params.theta2;
  if (!(lhs > rhs)) {
    v.ok = false;
    v.violating_k = 1;
    std::ostringstream os;
    os << "oscillation condition theta1*k^2 > theta2^2/4 fails at k = 1 ("
       << lhs << " <= " << rhs << ")";
    v.message = os.str();
    return v;
  }
  v.ok = true;
  return v;
}

void require_valid(const ModelParams& params, int k_max) {
  const Validity v = validate_params(params, k_max);
  if (!v.ok) throw domain_error(v.message);
}

double ell(int k, const ModelParams& params) {
  if (k < 1) throw domain_error("ell: mode index must be >= 1");
  const double kk = static_cast<double>(k);
  const double radicand = params.theta1 * kk * kk - 0.25 * params.theta2 * params.theta2;
  if (!(radicand > 0.0)) {
    std::ostringstream os;
    os << "ell: theta1*k^2 - theta2^2/4 = " << radicand << " <= 0 at k = " << k;
    throw domain_error(os.str());
  }
  return std::sqrt(radicand);
}

double c_factor(double theta2, double horizon) {
  if (!(horizon > 0.0)) throw domain_error("c_factor: horizon must be > 0");
  const double x = theta2 * horizon;
  if (std::abs(x) < 1e-4) {
    // (e^x - x - 1)/x^2 cancels catastrophically near x = 0; six Maclaurin
    // terms give full double precision for |x| < 1e-4.
    const double g =
        0.5 + x * (1.0 / 6 + x * (1.0 / 24 + x * (1.0 / 120 + x * (1.0 / 720 + x * (1.0 / 5040)))));
    return 0.5 * horizon * horizon * g;
  }
  return (std::expm1(x) - x) / (2.0 * theta2 * theta2);
}

double c_tilde(double theta2, double horizon) {
  if (!(horizon > 0.0)) throw domain_error("c_tilde: horizon must be > 0");
  if (theta2 == 0.0) return 0.5 * horizon;
  return std::expm1(theta2 * horizon) / (2.0 * theta2);
}

AsymptoticVariances asymptotic_variances(const ModelParams& params, double horizon) {
  require_valid(params, 1);
  const double c = c_factor(params.theta2, horizon);
  return {3.0 * params.theta1 / c, 1.0 / c};
}

}  // namespace wavemle
