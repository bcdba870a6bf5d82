#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "inference.hpp"
#include "modes.hpp"

namespace wavemle {

// How z-scores are normalized: with the true parameters (the limit theorems
// are stated with them) or with per-replication plug-in estimates.
enum class Normalization { kTrueParams, kPlugIn };

struct StudyConfig {
  ModelParams params;
  double horizon = 2.0;
  std::int64_t num_steps = 1000;
  std::vector<int> n_list;
  int replications = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::kExactTransition;
  Normalization normalization = Normalization::kTrueParams;
  J12Route route_j12 = J12Route::kIdentity;
  B2Route route_b2 = B2Route::kItoIdentity;
  bool zero_noise = false;
};

struct StudyRow {
  int n = 0;
  int rep = 0;
  double theta1_hat = 0.0;
  double theta2_hat = 0.0;
  double z1 = 0.0;  // N^{3/2} (th1_hat - th1) / sqrt(3 th1 / C)
  double z2 = 0.0;  // N^{1/2} (th2_hat - th2) / sqrt(1 / C)
  double d_n = 0.0;
  bool failed = false;
};

struct KsResult {
  double d = 0.0;
  double p_value = 0.0;
};

struct StudyAggregate {
  int n = 0;
  int replications = 0;
  int failures = 0;
  double mean_z1 = 0.0, var_z1 = 0.0;
  double mean_z2 = 0.0, var_z2 = 0.0;
  KsResult ks_z1, ks_z2;
  double rmse_theta1 = 0.0, rmse_theta2 = 0.0;
  double mean_abs_err1 = 0.0, mean_abs_err2 = 0.0;
  double median_d_n = 0.0;
};

struct RateSlopes {
  double slope_theta1 = 0.0;  // theory: -3/2
  double slope_theta2 = 0.0;  // theory: -1/2
};

struct StudyResult {
  StudyConfig config;
  std::vector<StudyRow> rows;  // ordered by (n index, rep)
  std::vector<StudyAggregate> per_n;
  std::optional<RateSlopes> slopes;  // present when >= 2 usable levels
};

// For each N in n_list and each replication r, simulates the field with the
// substream (seed, N, r), estimates, and normalizes.  Deterministic given the
// config; a singular replication is recorded as failed, never dropped.
StudyResult run_study(const StudyConfig& config, int threads = 0);

// log RMSE vs log N regression; requires >= 4 levels and R >= 100.
RateSlopes rate_sweep(const StudyConfig& config, int threads = 0);
RateSlopes rate_slopes(const StudyResult& result);  // same check on a finished study

// One-sample Kolmogorov-Smirnov statistic against the standard normal CDF.
// The p-value uses the asymptotic Kolmogorov series with Stephens' small-n
// correction sqrt(n) + 0.12 + 0.11/sqrt(n); good to a few percent absolute
// for n >= 35.  Requires >= 8 finite samples.
KsResult ks_test(std::span<const double> samples);

// Phi(x) via erfc, absolute error well under 1e-10.
double normal_cdf(double x);

// Inverse of normal_cdf on (0, 1); rational initial guess polished by two
// Newton steps.
double normal_quantile(double p);

}  // namespace wavemle
