#include "mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "model.hpp"
#include "parallel.hpp"

namespace wavemle {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double kolmogorov_sf(double lambda) {
  // 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2); below ~0.04 the survival
  // function is 1 to far beyond double precision.
  if (lambda < 0.04) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  const double a = -2.0 * lambda * lambda;
  for (int j = 1; j <= 256; ++j) {
    const double term = std::exp(a * j * j);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

void validate_study_config(const StudyConfig& cfg) {
  if (cfg.n_list.empty()) throw domain_error("run_study: N_list must be nonempty");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    if (cfg.n_list[i] < 1) throw domain_error("run_study: N_list entries must be >= 1");
    if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])
      throw domain_error("run_study: N_list must be strictly ascending");
  }
  if (cfg.replications < 1) throw domain_error("run_study: replications must be >= 1");
  check_grid(TimeGrid{cfg.horizon, cfg.num_steps});
  if (cfg.num_steps < 2) throw domain_error("run_study: need at least 2 time steps");
  require_valid(cfg.params, cfg.n_list.back());
}

double median_of(std::vector<double> values) {
  if (values.empty()) return kNaN;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) {
    const double lo = *std::max_element(values.begin(), values.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("normal_quantile: p must be in (0, 1)");
  // Acklam's rational approximation (~1e-9), then two Newton corrections.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int it = 0; it < 2; ++it) {
    const double err = normal_cdf(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (pdf > 0.0) x -= err / pdf;
  }
  return x;
}

KsResult ks_test(std::span<const double> samples) {
  const std::int64_t n = static_cast<std::int64_t>(samples.size());
  if (n < 8) throw domain_error("ks_test: need at least 8 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double s : sorted)
    if (!std::isfinite(s)) throw domain_error("ks_test: samples must be finite");
  std::sort(sorted.begin(), sorted.end());
  double d = 0.0;
  const double nd = static_cast<double>(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double f = normal_cdf(sorted[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / nd - f,
                             f - static_cast<double>(i) / nd));
  }
  const double sqrt_n = std::sqrt(nd);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  return {d, kolmogorov_sf(lambda)};
}

StudyResult run_study(const StudyConfig& cfg, int threads) {
  validate_study_config(cfg);
  StudyResult result;
  result.config = cfg;

  const std::int64_t levels = static_cast<std::int64_t>(cfg.n_list.size());
  const std::int64_t reps = cfg.replications;
  const std::int64_t total = levels * reps;
  if (total > 0xFFFFFFFFll) throw domain_error("run_study: too many replications");
  result.rows.resize(total);

  const TimeGrid grid{cfg.horizon, cfg.num_steps};
  const double c_true = c_factor(cfg.params.theta2, cfg.horizon);
  const double sigma1_true = std::sqrt(3.0 * cfg.params.theta1 / c_true);
  const double sigma2_true = std::sqrt(1.0 / c_true);

  parallel_for(total, threads, [&](std::int64_t task) {
    const std::int64_t level = task / reps;
    const int n = cfg.n_list[level];
    StudyRow& row = result.rows[task];
    row.n = n;
    row.rep = static_cast<int>(task % reps);

    // streaming accumulation: one scratch pair of paths, stats built mode by
    // mode in ascending k exactly like sufficient_stats would
    std::vector<double> u(cfg.num_steps + 1), v(cfg.num_steps + 1);
    SufficientStats stats;
    stats.n_modes = n;
    stats.dt = grid.dt();
    stats.route_j12 = cfg.route_j12;
    stats.route_b2 = cfg.route_b2;
    const auto rep_id = static_cast<std::uint32_t>(task);
    for (int k = 1; k <= n; ++k) {
      if (cfg.scheme == Scheme::kExactTransition)
        detail::exact_path(k, cfg.params, grid, cfg.seed, rep_id, cfg.zero_noise, u, v);
      else
        detail::euler_path(k, cfg.params, grid, cfg.seed, rep_id, cfg.zero_noise, u, v,
                           {});
      accumulate_stats(stats, k, mode_stat_terms(u, v, stats.dt), cfg.horizon);
    }

    try {
      const Estimate est = mle(stats);
      row.theta1_hat = est.theta1_hat;
      row.theta2_hat = est.theta2_hat;
      row.d_n = est.d_n;
      double sigma1 = sigma1_true, sigma2 = sigma2_true;
      if (cfg.normalization == Normalization::kPlugIn) {
        const double c_hat = c_factor(est.theta2_hat, cfg.horizon);
        sigma1 = std::sqrt(std::abs(3.0 * est.theta1_hat) / c_hat);
        sigma2 = std::sqrt(1.0 / c_hat);
      }
      const double nd = static_cast<double>(n);
      row.z1 = std::pow(nd, 1.5) * (est.theta1_hat - cfg.params.theta1) / sigma1;
      row.z2 = std::sqrt(nd) * (est.theta2_hat - cfg.params.theta2) / sigma2;
    } catch (const error&) {
      row.failed = true;
      row.theta1_hat = row.theta2_hat = row.z1 = row.z2 = row.d_n = kNaN;
    }
  });

  // single-threaded aggregation pass in row order
  result.per_n.resize(levels);
  for (std::int64_t level = 0; level < levels; ++level) {
    StudyAggregate& agg = result.per_n[level];
    agg.n = cfg.n_list[level];
    agg.replications = cfg.replications;
    std::vector<double> z1s, z2s, dns;
    std::int64_t successes = 0;
    double se1 = 0.0, se2 = 0.0, ae1 = 0.0, ae2 = 0.0;
    for (std::int64_t r = 0; r < reps; ++r) {
      const StudyRow& row = result.rows[level * reps + r];
      if (row.failed) {
        ++agg.failures;
        continue;
      }
      ++successes;
      // plug-in normalization can blow a z-score up even when the estimate is
      // finite; keep such rows out of the distributional aggregates only
      if (std::isfinite(row.z1)) z1s.push_back(row.z1);
      if (std::isfinite(row.z2)) z2s.push_back(row.z2);
      dns.push_back(row.d_n);
      const double e1 = row.theta1_hat - cfg.params.theta1;
      const double e2 = row.theta2_hat - cfg.params.theta2;
      se1 += e1 * e1;
      se2 += e2 * e2;
      ae1 += std::abs(e1);
      ae2 += std::abs(e2);
    }
    if (successes == 0) {
      agg.mean_z1 = agg.var_z1 = agg.mean_z2 = agg.var_z2 = kNaN;
      agg.rmse_theta1 = agg.rmse_theta2 = agg.mean_abs_err1 = agg.mean_abs_err2 = kNaN;
      agg.median_d_n = kNaN;
      agg.ks_z1 = agg.ks_z2 = {kNaN, kNaN};
      continue;
    }
    const auto mean_var = [](const std::vector<double>& xs) {
      if (xs.empty()) return std::pair<double, double>{kNaN, kNaN};
      const double n = static_cast<double>(xs.size());
      double m = 0.0;
      for (double x : xs) m += x;
      m /= n;
      double v = kNaN;
      if (xs.size() > 1) {
        v = 0.0;
        for (double x : xs) v += (x - m) * (x - m);
        v /= (n - 1.0);
      }
      return std::pair<double, double>{m, v};
    };
    std::tie(agg.mean_z1, agg.var_z1) = mean_var(z1s);
    std::tie(agg.mean_z2, agg.var_z2) = mean_var(z2s);
    const double nd = static_cast<double>(successes);
    agg.rmse_theta1 = std::sqrt(se1 / nd);
    agg.rmse_theta2 = std::sqrt(se2 / nd);
    agg.mean_abs_err1 = ae1 / nd;
    agg.mean_abs_err2 = ae2 / nd;
    agg.median_d_n = median_of(dns);
    agg.ks_z1 = z1s.size() >= 8 ? ks_test(z1s) : KsResult{kNaN, kNaN};
    agg.ks_z2 = z2s.size() >= 8 ? ks_test(z2s) : KsResult{kNaN, kNaN};
  }

  // empirical rate exponents whenever two usable levels exist
  std::vector<double> log_n, log_r1, log_r2;
  for (const StudyAggregate& agg : result.per_n) {
    if (!(agg.rmse_theta1 > 0.0) || !(agg.rmse_theta2 > 0.0)) continue;
    log_n.push_back(std::log(static_cast<double>(agg.n)));
    log_r1.push_back(std::log(agg.rmse_theta1));
    log_r2.push_back(std::log(agg.rmse_theta2));
  }
  if (log_n.size() >= 2) {
    const auto slope = [&](const std::vector<double>& y) {
      const double n = static_cast<double>(log_n.size());
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < log_n.size(); ++i) {
        mx += log_n[i];
        my += y[i];
      }
      mx /= n;
      my /= n;
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < log_n.size(); ++i) {
        sxy += (log_n[i] - mx) * (y[i] - my);
        sxx += (log_n[i] - mx) * (log_n[i] - mx);
      }
      return sxy / sxx;
    };
    result.slopes = RateSlopes{slope(log_r1), slope(log_r2)};
  }
  return result;
}

RateSlopes rate_slopes(const StudyResult& result) {
  if (result.config.n_list.size() < 4)
    throw domain_error("rate_sweep: need at least 4 truncation levels");
  if (result.config.replications < 100)
    throw domain_error("rate_sweep: need at least 100 replications per level");
  if (!result.slopes)
    throw domain_error("rate_sweep: RMSE undefined (no successful replications)");
  return *result.slopes;
}

RateSlopes rate_sweep(const StudyConfig& cfg, int threads) {
  if (cfg.n_list.size() < 4)
    throw domain_error("rate_sweep: need at least 4 truncation levels");
  if (cfg.replications < 100)
    throw domain_error("rate_sweep: need at least 100 replications per level");
  return rate_slopes(run_study(cfg, threads));
}

}  // namespace wavemle
