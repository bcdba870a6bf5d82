#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "inference.hpp"
#include "mc.hpp"
#include "modes.hpp"
#include "moments.hpp"
#include "wavemle.h"

namespace fs = std::filesystem;

namespace {
fs::path temp_dir() {
  const fs::path dir =
      fs::temp_directory_path() / ("wavemle_capi_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

const char* kStudyConfig =
    R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":64,"N_list":[4,8],"R":3,"seed":7})";
}  // namespace

TEST_CASE("model lifecycle, validation and error reporting") {
  wavemle_model* model = nullptr;
  REQUIRE(wavemle_model_create(1.0, 0.0, &model) == WAVEMLE_OK);
  int32_t strict = 0;
  CHECK(wavemle_model_validate(model, 10, &strict) == WAVEMLE_OK);
  CHECK(strict == 1);
  double l = 0.0;
  CHECK(wavemle_ell(model, 5, &l) == WAVEMLE_OK);
  CHECK(l == doctest::Approx(5.0));
  wavemle_model_free(model);

  wavemle_model* bad = nullptr;
  REQUIRE(wavemle_model_create(0.01, 4.0, &bad) == WAVEMLE_OK);
  CHECK(wavemle_model_validate(bad, 10, &strict) == WAVEMLE_ERR_DOMAIN);
  CHECK(std::strlen(wavemle_last_error()) > 0);
  CHECK(std::string(wavemle_last_error()).find("k = 1") != std::string::npos);
  CHECK(wavemle_ell(bad, 1, &l) == WAVEMLE_ERR_DOMAIN);
  wavemle_model_free(bad);

  CHECK(wavemle_model_create(std::nan(""), 0.0, &bad) == WAVEMLE_ERR_INVALID_ARGUMENT);
  CHECK(wavemle_model_create(1.0, 0.0, nullptr) == WAVEMLE_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scalar helpers mirror the core") {
  double value = 0.0;
  CHECK(wavemle_c_factor(0.0, 2.0, &value) == WAVEMLE_OK);
  CHECK(value == doctest::Approx(1.0));
  CHECK(wavemle_c_tilde(1.0, 1.0, &value) == WAVEMLE_OK);
  CHECK(value == doctest::Approx(0.85914091422952261));
  CHECK(wavemle_c_factor(1.0, -2.0, &value) == WAVEMLE_ERR_DOMAIN);
  CHECK(wavemle_normal_cdf(0.0) == 0.5);
  CHECK(wavemle_normal_quantile(0.975, &value) == WAVEMLE_OK);
  CHECK(value == doctest::Approx(1.959964).epsilon(1e-5));
  CHECK(wavemle_normal_quantile(2.0, &value) == WAVEMLE_ERR_DOMAIN);

  wavemle_model* model = nullptr;
  REQUIRE(wavemle_model_create(1.0, 0.0, &model) == WAVEMLE_OK);
  double var1 = 0.0, var2 = 0.0;
  CHECK(wavemle_asymptotic_variances(model, 2.0, &var1, &var2) == WAVEMLE_OK);
  CHECK(var1 == doctest::Approx(3.0));
  CHECK(var2 == doctest::Approx(1.0));

  double e_uu = 0.0, e_vv = 0.0, e_uv = 0.0;
  CHECK(wavemle_mode_moments(model, 1, 1.0, &e_uu, &e_vv, &e_uv) == WAVEMLE_OK);
  const wavemle::ModeMoments expected = wavemle::mode_second_moments(1, {1.0, 0.0}, 1.0);
  CHECK(e_uu == expected.e_uu);
  CHECK(e_vv == expected.e_vv);
  CHECK(e_uv == expected.e_uv);

  double ej1 = 0.0, ej2 = 0.0, ej12 = 0.0;
  CHECK(wavemle_expected_stats(model, 10, 2.0, &ej1, &ej2, &ej12) == WAVEMLE_OK);
  const wavemle::ExpectedStats es = wavemle::expected_suff_stats({1.0, 0.0}, 10, 2.0);
  CHECK(ej1 == es.ej1);

  double sob = 0.0;
  CHECK(wavemle_sobolev_norm_sq(model, 1.0, 0.25, 50, &sob) == WAVEMLE_OK);
  CHECK(sob == wavemle::sobolev_norm_sq({1.0, 0.0}, 1.0, 0.25, 50));
  wavemle_model_free(model);
}

TEST_CASE("simulation, statistics and estimation through the C surface") {
  wavemle_model* model = nullptr;
  REQUIRE(wavemle_model_create(1.0, -0.5, &model) == WAVEMLE_OK);
  wavemle_field* field = nullptr;
  REQUIRE(wavemle_field_simulate(model, 6, 1.0, 128, 99, 0, WAVEMLE_SCHEME_EXACT, 0, 2,
                                 &field) == WAVEMLE_OK);
  CHECK(wavemle_field_num_modes(field) == 6);
  CHECK(wavemle_field_num_steps(field) == 128);
  CHECK(wavemle_field_dt(field) == doctest::Approx(1.0 / 128));

  const double* u = nullptr;
  const double* v = nullptr;
  REQUIRE(wavemle_field_mode_series(field, 1, &u, &v) == WAVEMLE_OK);
  CHECK(u[0] == 0.0);
  CHECK(v[0] == 0.0);
  CHECK(wavemle_field_mode_series(field, 7, &u, &v) == WAVEMLE_ERR_DOMAIN);

  double value = 0.0;
  CHECK(wavemle_field_value(field, 0, 1.0, &value) == WAVEMLE_OK);
  CHECK(value == 0.0);
  CHECK(wavemle_field_value(field, 200, 1.0, &value) == WAVEMLE_ERR_DOMAIN);

  // must agree with the C++ path bit for bit
  const wavemle::FieldTrajectory direct =
      wavemle::simulate_field({1.0, -0.5}, 6, {1.0, 128}, 99);
  const wavemle::SufficientStats direct_stats = wavemle::sufficient_stats(direct);

  wavemle_stats stats{};
  REQUIRE(wavemle_field_stats(field, WAVEMLE_J12_IDENTITY, WAVEMLE_B2_ITO, &stats) ==
          WAVEMLE_OK);
  CHECK(stats.j1 == direct_stats.j1);
  CHECK(stats.j2 == direct_stats.j2);
  CHECK(stats.j12 == direct_stats.j12);
  CHECK(stats.b1 == direct_stats.b1);
  CHECK(stats.b2 == direct_stats.b2);

  wavemle_estimate est{};
  REQUIRE(wavemle_mle(&stats, &est) == WAVEMLE_OK);
  const wavemle::Estimate direct_est = wavemle::mle(direct_stats);
  CHECK(est.theta1_hat == direct_est.theta1_hat);
  CHECK(est.theta2_hat == direct_est.theta2_hat);

  double xi1 = 0.0, xi2 = 0.0;
  CHECK(wavemle_xi_diagnostics(field, &xi1, &xi2) == WAVEMLE_OK);
  const wavemle::XiDiagnostics xi = wavemle::xi_diagnostics(direct);
  CHECK(xi1 == xi.xi1);
  CHECK(xi2 == xi.xi2);

  wavemle_field_free(field);
  wavemle_model_free(model);
}

TEST_CASE("singular statistics surface as WAVEMLE_ERR_SINGULAR") {
  wavemle_stats stats{};
  stats.j1 = 1.0;
  stats.j2 = 1.0;
  stats.j12 = 1.0;
  stats.n_modes = 1;
  stats.route_j12 = WAVEMLE_J12_IDENTITY;
  stats.route_b2 = WAVEMLE_B2_ITO;
  wavemle_estimate est{};
  CHECK(wavemle_mle(&stats, &est) == WAVEMLE_ERR_SINGULAR);
  CHECK(std::string(wavemle_last_error()).find("singular") != std::string::npos);
}

TEST_CASE("trajectory CSV round-trips bit-exactly") {
  const fs::path dir = temp_dir();
  wavemle_model* model = nullptr;
  REQUIRE(wavemle_model_create(1.0, 0.2, &model) == WAVEMLE_OK);
  wavemle_field* field = nullptr;
  REQUIRE(wavemle_field_simulate(model, 3, 2.0, 50, 1234, 5, WAVEMLE_SCHEME_EXACT, 0, 1,
                                 &field) == WAVEMLE_OK);
  const std::string csv = (dir / "traj.csv").string();
  const std::string sidecar = (dir / "traj.json").string();
  REQUIRE(wavemle_field_write_csv(field, csv.c_str(), sidecar.c_str()) == WAVEMLE_OK);

  wavemle_field* loaded = nullptr;
  REQUIRE(wavemle_field_read_csv(csv.c_str(), sidecar.c_str(), &loaded) == WAVEMLE_OK);
  CHECK(wavemle_field_num_modes(loaded) == 3);
  CHECK(wavemle_field_num_steps(loaded) == 50);
  for (int k = 1; k <= 3; ++k) {
    const double *u0 = nullptr, *v0 = nullptr, *u1 = nullptr, *v1 = nullptr;
    REQUIRE(wavemle_field_mode_series(field, k, &u0, &v0) == WAVEMLE_OK);
    REQUIRE(wavemle_field_mode_series(loaded, k, &u1, &v1) == WAVEMLE_OK);
    for (int i = 0; i <= 50; ++i) {
      CHECK(u0[i] == u1[i]);
      CHECK(v0[i] == v1[i]);
    }
  }

  // hence the estimate survives the round trip bit-exactly
  wavemle_stats stats_mem{}, stats_csv{};
  REQUIRE(wavemle_field_stats(field, WAVEMLE_J12_IDENTITY, WAVEMLE_B2_ITO, &stats_mem) ==
          WAVEMLE_OK);
  REQUIRE(wavemle_field_stats(loaded, WAVEMLE_J12_IDENTITY, WAVEMLE_B2_ITO, &stats_csv) ==
          WAVEMLE_OK);
  wavemle_estimate est_mem{}, est_csv{};
  REQUIRE(wavemle_mle(&stats_mem, &est_mem) == WAVEMLE_OK);
  REQUIRE(wavemle_mle(&stats_csv, &est_csv) == WAVEMLE_OK);
  CHECK(est_mem.theta1_hat == est_csv.theta1_hat);
  CHECK(est_mem.theta2_hat == est_csv.theta2_hat);
  CHECK(est_mem.d_n == est_csv.d_n);
  wavemle_field_free(loaded);
  CHECK(wavemle_field_read_csv("/nonexistent.csv", sidecar.c_str(), &loaded) ==
        WAVEMLE_ERR_IO);
  wavemle_field_free(field);
  wavemle_model_free(model);
  fs::remove_all(dir);
}

TEST_CASE("config parse reports violations as JSON") {
  char* violations = nullptr;
  wavemle_config* config = nullptr;
  CHECK(wavemle_config_parse(R"({"theta1":-1.0})", &violations, &config) ==
        WAVEMLE_ERR_INVALID_ARGUMENT);
  REQUIRE(violations != nullptr);
  const auto arr = nlohmann::json::parse(violations);
  CHECK(arr.is_array());
  CHECK(arr.size() >= 6);
  wavemle_string_free(violations);

  REQUIRE(wavemle_config_parse(kStudyConfig, &violations, &config) == WAVEMLE_OK);
  CHECK(wavemle_config_n_modes(config) == 8);
  CHECK(wavemle_config_seed(config) == 7);
  const int32_t* n_list = nullptr;
  size_t len = 0;
  REQUIRE(wavemle_config_n_list(config, &n_list, &len) == WAVEMLE_OK);
  REQUIRE(len == 2);
  CHECK(n_list[0] == 4);
  CHECK(n_list[1] == 8);
  wavemle_config_free(config);
}

TEST_CASE("study through the C surface") {
  const fs::path dir = temp_dir();
  wavemle_config* config = nullptr;
  REQUIRE(wavemle_config_parse(kStudyConfig, nullptr, &config) == WAVEMLE_OK);
  wavemle_study* study = nullptr;
  REQUIRE(wavemle_study_run(config, 2, &study) == WAVEMLE_OK);
  CHECK(wavemle_study_row_count(study) == 6);
  CHECK(wavemle_study_failure_count(study) == 0);

  wavemle_study_row row{};
  REQUIRE(wavemle_study_get_row(study, 5, &row) == WAVEMLE_OK);
  CHECK(row.n == 8);
  CHECK(row.rep == 2);
  CHECK(row.failed == 0);
  CHECK(wavemle_study_get_row(study, 6, &row) == WAVEMLE_ERR_DOMAIN);

  const std::string csv = (dir / "study.csv").string();
  REQUIRE(wavemle_study_write_csv(study, csv.c_str()) == WAVEMLE_OK);
  CHECK(fs::file_size(csv) > 0);

  char* summary = nullptr;
  REQUIRE(wavemle_study_summary_json(study, 0, &summary) == WAVEMLE_OK);
  const auto doc = nlohmann::json::parse(summary);
  CHECK(doc["config"]["R"] == 3);
  CHECK(doc["per_N"].size() == 2);
  CHECK_FALSE(doc["metadata"].contains("generated_at"));
  wavemle_string_free(summary);

  double s1 = 0.0, s2 = 0.0;
  CHECK(wavemle_study_slopes(study, &s1, &s2) == WAVEMLE_ERR_DOMAIN);  // 2 levels only

  wavemle_study_free(study);
  wavemle_config_free(config);
  fs::remove_all(dir);
}

TEST_CASE("all-singular study returns WAVEMLE_ERR_SINGULAR") {
  wavemle_config* config = nullptr;
  const char* text =
      R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":32,"N_list":[1],"R":1,"seed":3,
          "debug_zero_noise":true})";
  REQUIRE(wavemle_config_parse(text, nullptr, &config) == WAVEMLE_OK);
  wavemle_study* study = nullptr;
  CHECK(wavemle_study_run(config, 1, &study) == WAVEMLE_ERR_SINGULAR);
  wavemle_config_free(config);
}

TEST_CASE("ks test through the C surface") {
  std::vector<double> samples(100);
  for (int i = 0; i < 100; ++i) {
    double q = 0.0;
    REQUIRE(wavemle_normal_quantile((i + 0.5) / 100, &q) == WAVEMLE_OK);
    samples[i] = q;
  }
  double d = 0.0, p = 0.0;
  REQUIRE(wavemle_ks_test(samples.data(), 100, &d, &p) == WAVEMLE_OK);
  CHECK(d < 0.01);
  CHECK(p > 0.99);
  CHECK(wavemle_ks_test(samples.data(), 4, &d, &p) == WAVEMLE_ERR_DOMAIN);
}
