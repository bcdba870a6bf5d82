#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "mc.hpp"
#include "moments.hpp"
#include "rng.hpp"
#include "trajectory_io.hpp"

using namespace wavemle;

TEST_CASE("normal_cdf known values and symmetry") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.959964) - 0.975) < 1e-6);
  CHECK(std::abs(normal_cdf(-1.959964) - 0.025) < 1e-6);
  for (double x = 0.0; x <= 8.0; x += 0.25)
    CHECK(std::abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) < 1e-12);
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.125) {
    const double value = normal_cdf(x);
    CHECK(value > prev);
    prev = value;
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  CHECK(std::abs(normal_quantile(0.975) - 1.959964) < 1e-5);
  CHECK(std::abs(normal_quantile(0.5)) < 1e-14);
  for (double p : {1e-8, 1e-4, 0.02425, 0.1, 0.3, 0.5, 0.77, 0.97575, 0.9999, 1 - 1e-8})
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-12);
  CHECK_THROWS_AS(normal_quantile(0.0), domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), domain_error);
}

TEST_CASE("ks statistic on an ideal normal grid is tiny") {
  const int n = 100;
  std::vector<double> samples;
  for (int i = 1; i <= n; ++i)
    samples.push_back(normal_quantile((i - 0.5) / n));
  const KsResult r = ks_test(samples);
  CHECK(r.d < 0.01);
  CHECK(r.d == doctest::Approx(0.005).epsilon(1e-6));
  CHECK(r.p_value > 0.99);
}

TEST_CASE("ks detects a point mass at zero") {
  const std::vector<double> zeros(100, 0.0);
  const KsResult r = ks_test(zeros);
  CHECK(r.d == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.p_value < 1e-10);
}

TEST_CASE("ks has power against a location shift") {
  const int n = 1000;
  std::vector<double> samples;
  for (int i = 1; i <= n; ++i)
    samples.push_back(normal_quantile((i - 0.5) / n) + 1.0);
  CHECK(ks_test(samples).p_value < 1e-6);
}

TEST_CASE("ks accepts genuine normal draws") {
  std::vector<double> samples;
  const StreamId id{stream_domain::kTest, 3, 1};
  for (int i = 0; i < 250; ++i) {
    const auto [z0, z1] = normal_pair(987, id, static_cast<std::uint64_t>(i));
    samples.push_back(z0);
    samples.push_back(z1);
  }
  CHECK(ks_test(samples).p_value > 0.01);
}

TEST_CASE("ks input validation") {
  CHECK_THROWS_AS(ks_test(std::vector<double>(7, 0.1)), domain_error);
  std::vector<double> bad(10, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(ks_test(bad), domain_error);
}

TEST_CASE("studies are deterministic and thread-count independent") {
  StudyConfig cfg;
  cfg.params = {1.0, 0.0};
  cfg.horizon = 1.0;
  cfg.num_steps = 64;
  cfg.n_list = {5};
  cfg.replications = 2;
  cfg.seed = 7;
  const StudyResult a = run_study(cfg, 1);
  const StudyResult b = run_study(cfg, 1);
  const StudyResult c = run_study(cfg, 4);
  REQUIRE(a.rows.size() == 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(std::memcmp(&a.rows[i], &b.rows[i], sizeof(StudyRow)) == 0);
    CHECK(std::memcmp(&a.rows[i], &c.rows[i], sizeof(StudyRow)) == 0);
  }
  CHECK(summary_json(a, false) == summary_json(c, false));
}

TEST_CASE("failed replications are recorded, never dropped") {
  StudyConfig cfg;
  cfg.params = {1.0, 0.0};
  cfg.horizon = 1.0;
  cfg.num_steps = 32;
  cfg.n_list = {1, 2};
  cfg.replications = 3;
  cfg.seed = 9;
  cfg.zero_noise = true;  // forces singular statistics everywhere
  const StudyResult result = run_study(cfg);
  REQUIRE(result.rows.size() == 6);
  int failures = 0;
  for (const StudyRow& row : result.rows) {
    if (row.failed) {
      ++failures;
      CHECK(std::isnan(row.theta1_hat));
    }
  }
  CHECK(failures == 6);
  for (const StudyAggregate& agg : result.per_n)
    CHECK(agg.failures + (agg.replications - agg.failures) == cfg.replications);
}

TEST_CASE("rate_sweep preconditions") {
  StudyConfig cfg;
  cfg.params = {1.0, 0.0};
  cfg.horizon = 1.0;
  cfg.num_steps = 64;
  cfg.n_list = {8, 16, 32, 64};
  cfg.replications = 1;
  cfg.seed = 3;
  CHECK_THROWS_AS(rate_sweep(cfg), domain_error);  // R too small
  cfg.replications = 100;
  cfg.n_list = {8, 16, 32};
  CHECK_THROWS_AS(rate_sweep(cfg), domain_error);  // too few levels
}

TEST_CASE("rate sweep recovers the theoretical exponents approximately") {
  StudyConfig cfg;
  cfg.params = {1.0, 0.0};
  cfg.horizon = 2.0;
  cfg.num_steps = 1600;
  cfg.n_list = {8, 16, 32, 64};
  cfg.replications = 100;
  cfg.seed = 1001;
  const RateSlopes slopes = rate_sweep(cfg, 0);
  CHECK(slopes.slope_theta1 > -1.9);
  CHECK(slopes.slope_theta1 < -1.1);
  CHECK(slopes.slope_theta2 > -0.9);
  CHECK(slopes.slope_theta2 < -0.1);
}

TEST_CASE("SLLN: single-replication ratios tighten as N grows") {
  const ModelParams params{1.0, 0.0};
  const double horizon = 2.0;
  StudyConfig cfg;
  cfg.params = params;
  cfg.horizon = horizon;
  cfg.num_steps = 4000;
  cfg.seed = 33;

  // single replication at N = 200: each ratio inside [0.85, 1.15]
  {
    const FieldTrajectory field = simulate_field(params, 200, {horizon, 4000}, 33);
    const SufficientStats stats = sufficient_stats(field);
    const ExpectedStats expected = expected_suff_stats(params, 200, horizon);
    CHECK(stats.j1 / expected.ej1 > 0.85);
    CHECK(stats.j1 / expected.ej1 < 1.15);
    CHECK(stats.j2 / expected.ej2 > 0.85);
    CHECK(stats.j2 / expected.ej2 < 1.15);
    CHECK(stats.j12 / expected.ej12 > 0.85);
    CHECK(stats.j12 / expected.ej12 < 1.15);
  }

  // dispersion across 100 replications shrinks from N = 20 to N = 200
  const auto ratio_sd = [&](int n_modes) {
    const ExpectedStats expected = expected_suff_stats(params, n_modes, horizon);
    double sum = 0.0, sum_sq = 0.0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
      const FieldTrajectory field = simulate_field(
          params, n_modes, {horizon, 4000}, 34, Scheme::kExactTransition,
          static_cast<std::uint32_t>(rep));
      const double ratio = sufficient_stats(field).j1 / expected.ej1;
      sum += ratio;
      sum_sq += ratio * ratio;
    }
    const double mean = sum / reps;
    return std::sqrt((sum_sq / reps - mean * mean) * reps / (reps - 1.0));
  };
  CHECK(ratio_sd(200) < ratio_sd(20));
}

TEST_CASE("D_N drains toward zero as N grows") {
  StudyConfig cfg;
  cfg.params = {1.0, 0.0};
  cfg.horizon = 2.0;
  cfg.num_steps = 2000;
  cfg.n_list = {10, 100};
  cfg.replications = 20;
  cfg.seed = 55;
  const StudyResult result = run_study(cfg, 0);
  CHECK(result.per_n[1].median_d_n < result.per_n[0].median_d_n);
}

TEST_CASE("J12/J2 approaches Ctilde / (2 theta1 C)") {
  const ModelParams params{1.0, 0.0};  // limit = 1 / (2 * 1 * 1) = 0.5
  const double horizon = 2.0;
  const int n_modes = 200;
  const int reps = 200;
  double sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const FieldTrajectory field =
        simulate_field(params, n_modes, {horizon, 4000}, 4242,
                       Scheme::kExactTransition, static_cast<std::uint32_t>(rep));
    const SufficientStats stats = sufficient_stats(field);
    sum += stats.j12 / stats.j2;
  }
  CHECK(std::abs(sum / reps - 0.5) < 0.05);
}

TEST_CASE("plug-in normalization stays close to the true-parameter mode") {
  StudyConfig cfg;
  cfg.params = {1.0, 0.0};
  cfg.horizon = 2.0;
  cfg.num_steps = 1000;
  cfg.n_list = {40};
  cfg.replications = 50;
  cfg.seed = 77;
  const StudyResult truth = run_study(cfg, 0);
  cfg.normalization = Normalization::kPlugIn;
  const StudyResult plugin = run_study(cfg, 0);
  for (std::size_t i = 0; i < truth.rows.size(); ++i) {
    CHECK(truth.rows[i].theta1_hat == plugin.rows[i].theta1_hat);
    CHECK(std::abs(truth.rows[i].z1 - plugin.rows[i].z1) <
          0.5 * std::max(1.0, std::abs(truth.rows[i].z1)));
  }
}
