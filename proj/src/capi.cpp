#include "wavemle.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <span>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "inference.hpp"
#include "mc.hpp"
#include "model.hpp"
#include "modes.hpp"
#include "moments.hpp"
#include "trajectory_io.hpp"

struct wavemle_model {
  wavemle::ModelParams params;
};
struct wavemle_field {
  wavemle::FieldTrajectory field;
};
struct wavemle_config {
  wavemle::RunConfig config;
  std::vector<std::int32_t> n_list32;
  std::vector<std::int32_t> k_list32;
};
struct wavemle_study {
  wavemle::StudyResult result;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <class Fn>
wavemle_status guarded(Fn&& fn) {
  try {
    fn();
    return WAVEMLE_OK;
  } catch (const wavemle::config_error& e) {
    std::string msg = e.what();
    for (const std::string& v : e.violations()) msg += "; " + v;
    set_error(msg);
    return WAVEMLE_ERR_INVALID_ARGUMENT;
  } catch (const wavemle::singular_error& e) {
    set_error(e.what());
    return WAVEMLE_ERR_SINGULAR;
  } catch (const wavemle::domain_error& e) {
    set_error(e.what());
    return WAVEMLE_ERR_DOMAIN;
  } catch (const wavemle::io_error& e) {
    set_error(e.what());
    return WAVEMLE_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return WAVEMLE_ERR_INTERNAL;
  }
}

wavemle_status invalid(const char* message) {
  set_error(message);
  return WAVEMLE_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

wavemle::Scheme to_scheme(std::int32_t scheme) {
  if (scheme != WAVEMLE_SCHEME_EXACT && scheme != WAVEMLE_SCHEME_EULER)
    throw wavemle::domain_error("scheme must be WAVEMLE_SCHEME_EXACT or _EULER");
  return scheme == WAVEMLE_SCHEME_EXACT ? wavemle::Scheme::kExactTransition
                                        : wavemle::Scheme::kEulerMaruyama;
}

wavemle::J12Route to_j12_route(std::int32_t route) {
  if (route != WAVEMLE_J12_IDENTITY && route != WAVEMLE_J12_RIEMANN)
    throw wavemle::domain_error("route_j12 must be WAVEMLE_J12_IDENTITY or _RIEMANN");
  return route == WAVEMLE_J12_IDENTITY ? wavemle::J12Route::kIdentity
                                       : wavemle::J12Route::kRiemann;
}

wavemle::B2Route to_b2_route(std::int32_t route) {
  if (route != WAVEMLE_B2_ITO && route != WAVEMLE_B2_RIEMANN)
    throw wavemle::domain_error("route_b2 must be WAVEMLE_B2_ITO or _RIEMANN");
  return route == WAVEMLE_B2_ITO ? wavemle::B2Route::kItoIdentity
                                 : wavemle::B2Route::kRiemann;
}

}  // namespace

extern "C" {

const char* wavemle_status_name(wavemle_status status) {
  switch (status) {
    case WAVEMLE_OK:
      return "ok";
    case WAVEMLE_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case WAVEMLE_ERR_DOMAIN:
      return "domain";
    case WAVEMLE_ERR_SINGULAR:
      return "singular";
    case WAVEMLE_ERR_IO:
      return "io";
    case WAVEMLE_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* wavemle_last_error(void) { return g_last_error.c_str(); }

const char* wavemle_version(void) { return "0.1.0"; }

void wavemle_string_free(char* s) { delete[] s; }

/* ---------- model ---------- */

wavemle_status wavemle_model_create(double theta1, double theta2, wavemle_model** out) {
  if (!out) return invalid("model_create: out is NULL");
  if (!std::isfinite(theta1) || !std::isfinite(theta2))
    return invalid("model_create: parameters must be finite");
  *out = new wavemle_model{{theta1, theta2}};
  return WAVEMLE_OK;
}

void wavemle_model_free(wavemle_model* model) { delete model; }

wavemle_status wavemle_model_validate(const wavemle_model* model, int32_t k_max,
                                      int32_t* strict_condition) {
  if (!model) return invalid("model_validate: model is NULL");
  return guarded([&] {
    const wavemle::Validity v = wavemle::validate_params(model->params, k_max);
    if (strict_condition) *strict_condition = v.strict_condition ? 1 : 0;
    if (!v.ok) throw wavemle::domain_error(v.message);
  });
}

wavemle_status wavemle_ell(const wavemle_model* model, int32_t k, double* out) {
  if (!model || !out) return invalid("ell: NULL argument");
  return guarded([&] { *out = wavemle::ell(k, model->params); });
}

wavemle_status wavemle_c_factor(double theta2, double horizon, double* out) {
  if (!out) return invalid("c_factor: out is NULL");
  return guarded([&] { *out = wavemle::c_factor(theta2, horizon); });
}

wavemle_status wavemle_c_tilde(double theta2, double horizon, double* out) {
  if (!out) return invalid("c_tilde: out is NULL");
  return guarded([&] { *out = wavemle::c_tilde(theta2, horizon); });
}

wavemle_status wavemle_asymptotic_variances(const wavemle_model* model, double horizon,
                                            double* var_theta1, double* var_theta2) {
  if (!model || !var_theta1 || !var_theta2)
    return invalid("asymptotic_variances: NULL argument");
  return guarded([&] {
    const auto v = wavemle::asymptotic_variances(model->params, horizon);
    *var_theta1 = v.var_theta1;
    *var_theta2 = v.var_theta2;
  });
}

/* ---------- moments ---------- */

wavemle_status wavemle_mode_moments(const wavemle_model* model, int32_t k, double t,
                                    double* e_uu, double* e_vv, double* e_uv) {
  if (!model || !e_uu || !e_vv || !e_uv) return invalid("mode_moments: NULL argument");
  return guarded([&] {
    const auto m = wavemle::mode_second_moments(k, model->params, t);
    *e_uu = m.e_uu;
    *e_vv = m.e_vv;
    *e_uv = m.e_uv;
  });
}

wavemle_status wavemle_expected_stats(const wavemle_model* model, int32_t n_modes,
                                      double horizon, double* ej1, double* ej2,
                                      double* ej12) {
  if (!model || !ej1 || !ej2 || !ej12) return invalid("expected_stats: NULL argument");
  return guarded([&] {
    const auto s = wavemle::expected_suff_stats(model->params, n_modes, horizon);
    *ej1 = s.ej1;
    *ej2 = s.ej2;
    *ej12 = s.ej12;
  });
}

wavemle_status wavemle_sobolev_norm_sq(const wavemle_model* model, double t, double gamma,
                                       int32_t n_modes, double* out) {
  if (!model || !out) return invalid("sobolev_norm_sq: NULL argument");
  return guarded([&] { *out = wavemle::sobolev_norm_sq(model->params, t, gamma, n_modes); });
}

/* ---------- simulation ---------- */

wavemle_status wavemle_field_simulate(const wavemle_model* model, int32_t n_modes,
                                      double horizon, int64_t num_steps, uint64_t seed,
                                      uint64_t replication, int32_t scheme,
                                      int32_t zero_noise, int32_t threads,
                                      wavemle_field** out) {
  if (!model || !out) return invalid("field_simulate: NULL argument");
  return guarded([&] {
    auto field = std::make_unique<wavemle_field>();
    field->field = wavemle::simulate_field(model->params, n_modes,
                                           wavemle::TimeGrid{horizon, num_steps}, seed,
                                           to_scheme(scheme), replication,
                                           zero_noise != 0, threads);
    *out = field.release();
  });
}

void wavemle_field_free(wavemle_field* field) { delete field; }

int32_t wavemle_field_num_modes(const wavemle_field* field) {
  return field ? field->field.num_modes() : 0;
}

int64_t wavemle_field_num_steps(const wavemle_field* field) {
  return field ? field->field.grid.num_steps : 0;
}

double wavemle_field_horizon(const wavemle_field* field) {
  return field ? field->field.grid.horizon : 0.0;
}

double wavemle_field_dt(const wavemle_field* field) {
  return field ? field->field.grid.dt() : 0.0;
}

wavemle_status wavemle_field_value(const wavemle_field* field, int64_t t_index, double x,
                                   double* out) {
  if (!field || !out) return invalid("field_value: NULL argument");
  return guarded([&] { *out = wavemle::field_value(field->field, t_index, x); });
}

wavemle_status wavemle_field_mode_series(const wavemle_field* field, int32_t k,
                                         const double** u, const double** v) {
  if (!field || !u || !v) return invalid("field_mode_series: NULL argument");
  if (k < 1 || k > field->field.num_modes()) {
    set_error("field_mode_series: mode index out of range");
    return WAVEMLE_ERR_DOMAIN;
  }
  *u = field->field.modes[k - 1].u.data();
  *v = field->field.modes[k - 1].v.data();
  return WAVEMLE_OK;
}

wavemle_status wavemle_field_write_csv(const wavemle_field* field, const char* csv_path,
                                       const char* sidecar_path) {
  if (!field || !csv_path || !sidecar_path)
    return invalid("field_write_csv: NULL argument");
  return guarded([&] {
    wavemle::write_field_csv(field->field, csv_path);
    wavemle::write_field_sidecar(field->field, sidecar_path);
  });
}

wavemle_status wavemle_field_read_csv(const char* csv_path, const char* sidecar_path,
                                      wavemle_field** out) {
  if (!csv_path || !sidecar_path || !out) return invalid("field_read_csv: NULL argument");
  return guarded([&] {
    auto field = std::make_unique<wavemle_field>();
    field->field = wavemle::read_field(csv_path, sidecar_path);
    *out = field.release();
  });
}

/* ---------- inference ---------- */

wavemle_status wavemle_field_stats(const wavemle_field* field, int32_t route_j12,
                                   int32_t route_b2, wavemle_stats* out) {
  if (!field || !out) return invalid("field_stats: NULL argument");
  return guarded([&] {
    const auto s = wavemle::sufficient_stats(field->field, to_j12_route(route_j12),
                                             to_b2_route(route_b2));
    *out = {s.j1, s.j2, s.j12, s.b1, s.b2, s.n_modes, s.dt, route_j12, route_b2};
  });
}

wavemle_status wavemle_mle(const wavemle_stats* stats, wavemle_estimate* out) {
  if (!stats || !out) return invalid("mle: NULL argument");
  return guarded([&] {
    wavemle::SufficientStats s;
    s.j1 = stats->j1;
    s.j2 = stats->j2;
    s.j12 = stats->j12;
    s.b1 = stats->b1;
    s.b2 = stats->b2;
    s.n_modes = stats->n_modes;
    s.dt = stats->dt;
    s.route_j12 = to_j12_route(stats->route_j12);
    s.route_b2 = to_b2_route(stats->route_b2);
    const auto est = wavemle::mle(s);
    *out = {est.theta1_hat, est.theta2_hat, est.det, est.d_n, est.n_modes};
  });
}

wavemle_status wavemle_xi_diagnostics(const wavemle_field* field, double* xi1,
                                      double* xi2) {
  if (!field || !xi1 || !xi2) return invalid("xi_diagnostics: NULL argument");
  return guarded([&] {
    const auto xi = wavemle::xi_diagnostics(field->field);
    *xi1 = xi.xi1;
    *xi2 = xi.xi2;
  });
}

/* ---------- configuration ---------- */

wavemle_status wavemle_config_parse(const char* json_text, char** violations_json,
                                    wavemle_config** out) {
  if (!json_text || !out) return invalid("config_parse: NULL argument");
  try {
    auto config = std::make_unique<wavemle_config>();
    config->config = wavemle::parse_run_config(json_text);
    config->n_list32.assign(config->config.n_list.begin(), config->config.n_list.end());
    config->k_list32.assign(config->config.k_list.begin(), config->config.k_list.end());
    *out = config.release();
    return WAVEMLE_OK;
  } catch (const wavemle::config_error& e) {
    if (violations_json) {
      nlohmann::json arr = e.violations();
      *violations_json = dup_string(arr.dump());
    }
    std::string msg = e.what();
    for (const std::string& v : e.violations()) msg += "; " + v;
    set_error(msg);
    return WAVEMLE_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return WAVEMLE_ERR_INTERNAL;
  }
}

void wavemle_config_free(wavemle_config* config) { delete config; }

wavemle_status wavemle_config_model(const wavemle_config* config, wavemle_model** out) {
  if (!config || !out) return invalid("config_model: NULL argument");
  *out = new wavemle_model{config->config.params};
  return WAVEMLE_OK;
}

double wavemle_config_horizon(const wavemle_config* config) {
  return config ? config->config.horizon : 0.0;
}
int64_t wavemle_config_num_steps(const wavemle_config* config) {
  return config ? config->config.num_steps : 0;
}
int32_t wavemle_config_n_modes(const wavemle_config* config) {
  return config ? config->config.n_modes : 0;
}
uint64_t wavemle_config_seed(const wavemle_config* config) {
  return config ? config->config.seed : 0;
}
uint64_t wavemle_config_replication(const wavemle_config* config) {
  return config ? config->config.replication : 0;
}
int32_t wavemle_config_scheme(const wavemle_config* config) {
  if (!config) return WAVEMLE_SCHEME_EXACT;
  return config->config.scheme == wavemle::Scheme::kExactTransition
             ? WAVEMLE_SCHEME_EXACT
             : WAVEMLE_SCHEME_EULER;
}
int32_t wavemle_config_threads(const wavemle_config* config) {
  return config ? config->config.threads : 0;
}
int32_t wavemle_config_route_j12(const wavemle_config* config) {
  if (!config) return WAVEMLE_J12_IDENTITY;
  return config->config.route_j12 == wavemle::J12Route::kIdentity ? WAVEMLE_J12_IDENTITY
                                                                  : WAVEMLE_J12_RIEMANN;
}
int32_t wavemle_config_route_b2(const wavemle_config* config) {
  if (!config) return WAVEMLE_B2_ITO;
  return config->config.route_b2 == wavemle::B2Route::kItoIdentity ? WAVEMLE_B2_ITO
                                                                   : WAVEMLE_B2_RIEMANN;
}
int32_t wavemle_config_normalization(const wavemle_config* config) {
  if (!config) return WAVEMLE_NORMALIZE_TRUE_PARAMS;
  return config->config.normalization == wavemle::Normalization::kTrueParams
             ? WAVEMLE_NORMALIZE_TRUE_PARAMS
             : WAVEMLE_NORMALIZE_PLUGIN;
}
int32_t wavemle_config_zero_noise(const wavemle_config* config) {
  return config && config->config.zero_noise ? 1 : 0;
}
const char* wavemle_config_out_dir(const wavemle_config* config) {
  return config ? config->config.out_dir.c_str() : "";
}

wavemle_status wavemle_config_n_list(const wavemle_config* config, const int32_t** data,
                                     size_t* len) {
  if (!config || !data || !len) return invalid("config_n_list: NULL argument");
  *data = config->n_list32.data();
  *len = config->n_list32.size();
  return WAVEMLE_OK;
}
wavemle_status wavemle_config_x_grid(const wavemle_config* config, const double** data,
                                     size_t* len) {
  if (!config || !data || !len) return invalid("config_x_grid: NULL argument");
  *data = config->config.x_grid.data();
  *len = config->config.x_grid.size();
  return WAVEMLE_OK;
}
wavemle_status wavemle_config_t_grid(const wavemle_config* config, const double** data,
                                     size_t* len) {
  if (!config || !data || !len) return invalid("config_t_grid: NULL argument");
  *data = config->config.t_grid.data();
  *len = config->config.t_grid.size();
  return WAVEMLE_OK;
}
wavemle_status wavemle_config_gamma_list(const wavemle_config* config, const double** data,
                                         size_t* len) {
  if (!config || !data || !len) return invalid("config_gamma_list: NULL argument");
  *data = config->config.gamma_list.data();
  *len = config->config.gamma_list.size();
  return WAVEMLE_OK;
}
wavemle_status wavemle_config_k_list(const wavemle_config* config, const int32_t** data,
                                     size_t* len) {
  if (!config || !data || !len) return invalid("config_k_list: NULL argument");
  *data = config->k_list32.data();
  *len = config->k_list32.size();
  return WAVEMLE_OK;
}

/* ---------- Monte Carlo study ---------- */

wavemle_status wavemle_study_run(const wavemle_config* config, int32_t threads,
                                 wavemle_study** out) {
  if (!config || !out) return invalid("study_run: NULL argument");
  return guarded([&] {
    const int effective_threads = threads < 0 ? config->config.threads : threads;
    auto study = std::make_unique<wavemle_study>();
    study->result = wavemle::run_study(config->config.study(), effective_threads);
    bool any_success = false;
    for (const auto& row : study->result.rows)
      if (!row.failed) any_success = true;
    if (!any_success)
      throw wavemle::singular_error(
          "study: every replication failed with singular normal equations");
    *out = study.release();
  });
}

void wavemle_study_free(wavemle_study* study) { delete study; }

int64_t wavemle_study_row_count(const wavemle_study* study) {
  return study ? static_cast<int64_t>(study->result.rows.size()) : 0;
}

wavemle_status wavemle_study_get_row(const wavemle_study* study, int64_t index,
                                     wavemle_study_row* out) {
  if (!study || !out) return invalid("study_get_row: NULL argument");
  if (index < 0 || index >= static_cast<int64_t>(study->result.rows.size())) {
    set_error("study_get_row: index out of range");
    return WAVEMLE_ERR_DOMAIN;
  }
  const auto& row = study->result.rows[index];
  *out = {row.n,  row.rep, row.theta1_hat,          row.theta2_hat,
          row.z1, row.z2,  row.d_n, row.failed ? 1 : 0};
  return WAVEMLE_OK;
}

int64_t wavemle_study_failure_count(const wavemle_study* study) {
  if (!study) return 0;
  int64_t failures = 0;
  for (const auto& row : study->result.rows)
    if (row.failed) ++failures;
  return failures;
}

wavemle_status wavemle_study_write_csv(const wavemle_study* study, const char* path) {
  if (!study || !path) return invalid("study_write_csv: NULL argument");
  return guarded([&] { wavemle::write_study_csv(study->result, path); });
}

wavemle_status wavemle_study_summary_json(const wavemle_study* study,
                                          int32_t with_timestamp, char** out) {
  if (!study || !out) return invalid("study_summary_json: NULL argument");
  return guarded(
      [&] { *out = dup_string(wavemle::summary_json(study->result, with_timestamp != 0)); });
}

wavemle_status wavemle_study_slopes(const wavemle_study* study, double* slope_theta1,
                                    double* slope_theta2) {
  if (!study || !slope_theta1 || !slope_theta2)
    return invalid("study_slopes: NULL argument");
  return guarded([&] {
    const auto slopes = wavemle::rate_slopes(study->result);
    *slope_theta1 = slopes.slope_theta1;
    *slope_theta2 = slopes.slope_theta2;
  });
}

/* ---------- statistics utilities ---------- */

wavemle_status wavemle_ks_test(const double* samples, int64_t len, double* d,
                               double* p_value) {
  if (!samples || !d || !p_value) return invalid("ks_test: NULL argument");
  return guarded([&] {
    const auto r = wavemle::ks_test(std::span<const double>(samples, len));
    *d = r.d;
    *p_value = r.p_value;
  });
}

double wavemle_normal_cdf(double x) { return wavemle::normal_cdf(x); }

wavemle_status wavemle_normal_quantile(double p, double* out) {
  if (!out) return invalid("normal_quantile: out is NULL");
  return guarded([&] { *out = wavemle::normal_quantile(p); });
}

}  // extern "C"
