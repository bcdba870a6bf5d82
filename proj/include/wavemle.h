/* wave-mle: spectral simulation and maximum-likelihood estimation for the
 * one-dimensional damped stochastic wave equation driven by space-time white
 * noise.
 *
 * C API over the C++ core.  All handles are opaque; functions return a status
 * code and report details through wavemle_last_error(), which is thread
 * local.  Unless documented otherwise, out-parameters are written only on
 * WAVEMLE_OK.
 */
#ifndef WAVEMLE_H
#define WAVEMLE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wavemle_status {
  WAVEMLE_OK = 0,
  WAVEMLE_ERR_INVALID_ARGUMENT = 1, /* bad call or rejected configuration */
  WAVEMLE_ERR_DOMAIN = 2,           /* argument outside mathematical domain */
  WAVEMLE_ERR_SINGULAR = 3,         /* normal equations numerically singular */
  WAVEMLE_ERR_IO = 4,               /* file could not be read or written */
  WAVEMLE_ERR_INTERNAL = 5
} wavemle_status;

const char* wavemle_status_name(wavemle_status status);

/* Message for the most recent failure on the calling thread; empty string when
 * no failure has occurred. */
const char* wavemle_last_error(void);

const char* wavemle_version(void);

/* Frees strings returned through char** out-parameters. */
void wavemle_string_free(char* s);

typedef struct wavemle_model wavemle_model;
typedef struct wavemle_field wavemle_field;
typedef struct wavemle_config wavemle_config;
typedef struct wavemle_study wavemle_study;

enum { WAVEMLE_SCHEME_EXACT = 0, WAVEMLE_SCHEME_EULER = 1 };
enum { WAVEMLE_J12_IDENTITY = 0, WAVEMLE_J12_RIEMANN = 1 };
enum { WAVEMLE_B2_ITO = 0, WAVEMLE_B2_RIEMANN = 1 };
enum { WAVEMLE_NORMALIZE_TRUE_PARAMS = 0, WAVEMLE_NORMALIZE_PLUGIN = 1 };

/* ---------- model ---------- */

/* theta1 = squared wave speed (> 0 required for downstream use), theta2 =
 * -2 * damping.  Both must be finite. */
wavemle_status wavemle_model_create(double theta1, double theta2, wavemle_model** out);
void wavemle_model_free(wavemle_model* model);

/* Oscillation gate theta1 k^2 > theta2^2/4 for k = 1..k_max.  Returns
 * WAVEMLE_ERR_DOMAIN with a message naming the smallest violating mode when
 * rejected.  strict_condition (nullable) receives 1 when the stricter
 * assumption a >= 1, 2|b| <= 1 also holds. */
wavemle_status wavemle_model_validate(const wavemle_model* model, int32_t k_max,
                                      int32_t* strict_condition);

/* ell_k = sqrt(theta1 k^2 - theta2^2/4) */
wavemle_status wavemle_ell(const wavemle_model* model, int32_t k, double* out);

/* C(theta2, T) and Ctilde(theta2, T); continuous across theta2 -> 0. */
wavemle_status wavemle_c_factor(double theta2, double horizon, double* out);
wavemle_status wavemle_c_tilde(double theta2, double horizon, double* out);

/* Limit variances (3 theta1 / C, 1 / C) of the normalized estimator errors. */
wavemle_status wavemle_asymptotic_variances(const wavemle_model* model, double horizon,
                                            double* var_theta1, double* var_theta2);

/* ---------- moments ---------- */

wavemle_status wavemle_mode_moments(const wavemle_model* model, int32_t k, double t,
                                    double* e_uu, double* e_vv, double* e_uv);
wavemle_status wavemle_expected_stats(const wavemle_model* model, int32_t n_modes,
                                      double horizon, double* ej1, double* ej2,
                                      double* ej12);
wavemle_status wavemle_sobolev_norm_sq(const wavemle_model* model, double t, double gamma,
                                       int32_t n_modes, double* out);

/* ---------- simulation ---------- */

/* Simulates n_modes Fourier modes on the uniform grid with num_steps steps
 * over [0, horizon].  Mode k draws from the substream (seed, k, replication),
 * so results are bit-reproducible for any thread count.  threads = 0 uses the
 * hardware concurrency. */
wavemle_status wavemle_field_simulate(const wavemle_model* model, int32_t n_modes,
                                      double horizon, int64_t num_steps, uint64_t seed,
                                      uint64_t replication, int32_t scheme,
                                      int32_t zero_noise, int32_t threads,
                                      wavemle_field** out);
void wavemle_field_free(wavemle_field* field);

int32_t wavemle_field_num_modes(const wavemle_field* field);
int64_t wavemle_field_num_steps(const wavemle_field* field);
double wavemle_field_horizon(const wavemle_field* field);
double wavemle_field_dt(const wavemle_field* field);

/* sqrt(2/pi) sum_k u_k(t_index) sin(k x) for x in [0, pi]. */
wavemle_status wavemle_field_value(const wavemle_field* field, int64_t t_index, double x,
                                   double* out);

/* Borrowed views of the sampled paths of mode k (1-based); each array has
 * num_steps + 1 entries and stays valid until the field is freed. */
wavemle_status wavemle_field_mode_series(const wavemle_field* field, int32_t k,
                                         const double** u, const double** v);

/* Trajectory CSV ("t,k,u,v", 17 significant digits) plus JSON sidecar. */
wavemle_status wavemle_field_write_csv(const wavemle_field* field, const char* csv_path,
                                       const char* sidecar_path);
wavemle_status wavemle_field_read_csv(const char* csv_path, const char* sidecar_path,
                                      wavemle_field** out);

/* ---------- inference ---------- */

typedef struct wavemle_stats {
  double j1, j2, j12, b1, b2;
  int32_t n_modes;
  double dt;
  int32_t route_j12;
  int32_t route_b2;
} wavemle_stats;

typedef struct wavemle_estimate {
  double theta1_hat;
  double theta2_hat;
  double det;
  double d_n;
  int32_t n_modes;
} wavemle_estimate;

wavemle_status wavemle_field_stats(const wavemle_field* field, int32_t route_j12,
                                   int32_t route_b2, wavemle_stats* out);

/* Joint MLE; WAVEMLE_ERR_SINGULAR when J1 J2 - J12^2 <= 1e-12 J1 J2. */
wavemle_status wavemle_mle(const wavemle_stats* stats, wavemle_estimate* out);

/* Simulation-only diagnostics against the reconstructed noise increments. */
wavemle_status wavemle_xi_diagnostics(const wavemle_field* field, double* xi1,
                                      double* xi2);

/* ---------- configuration ---------- */

/* Parses and validates a JSON run configuration.  On rejection returns
 * WAVEMLE_ERR_INVALID_ARGUMENT and, when violations_json is non-NULL, stores a
 * JSON array listing every violation (free with wavemle_string_free). */
wavemle_status wavemle_config_parse(const char* json_text, char** violations_json,
                                    wavemle_config** out);
void wavemle_config_free(wavemle_config* config);

wavemle_status wavemle_config_model(const wavemle_config* config, wavemle_model** out);
double wavemle_config_horizon(const wavemle_config* config);
int64_t wavemle_config_num_steps(const wavemle_config* config);
int32_t wavemle_config_n_modes(const wavemle_config* config);
uint64_t wavemle_config_seed(const wavemle_config* config);
uint64_t wavemle_config_replication(const wavemle_config* config);
int32_t wavemle_config_scheme(const wavemle_config* config);
int32_t wavemle_config_threads(const wavemle_config* config);
int32_t wavemle_config_route_j12(const wavemle_config* config);
int32_t wavemle_config_route_b2(const wavemle_config* config);
int32_t wavemle_config_normalization(const wavemle_config* config);
int32_t wavemle_config_zero_noise(const wavemle_config* config);
const char* wavemle_config_out_dir(const wavemle_config* config); /* "" when unset */

/* Borrowed array views, valid until the config is freed. */
wavemle_status wavemle_config_n_list(const wavemle_config* config, const int32_t** data,
                                     size_t* len);
wavemle_status wavemle_config_x_grid(const wavemle_config* config, const double** data,
                                     size_t* len);
wavemle_status wavemle_config_t_grid(const wavemle_config* config, const double** data,
                                     size_t* len);
wavemle_status wavemle_config_gamma_list(const wavemle_config* config, const double** data,
                                         size_t* len);
wavemle_status wavemle_config_k_list(const wavemle_config* config, const int32_t** data,
                                     size_t* len);

/* ---------- Monte Carlo study ---------- */

typedef struct wavemle_study_row {
  int32_t n;
  int32_t rep;
  double theta1_hat;
  double theta2_hat;
  double z1;
  double z2;
  double d_n;
  int32_t failed;
} wavemle_study_row;

/* Runs the study described by the config (N_list x R replications).  Every
 * replication is deterministic given the config; singular replications are
 * recorded as failed.  Returns WAVEMLE_ERR_SINGULAR when no replication at
 * all succeeded.  threads < 0 takes the thread count from the config. */
wavemle_status wavemle_study_run(const wavemle_config* config, int32_t threads,
                                 wavemle_study** out);
void wavemle_study_free(wavemle_study* study);

int64_t wavemle_study_row_count(const wavemle_study* study);
wavemle_status wavemle_study_get_row(const wavemle_study* study, int64_t index,
                                     wavemle_study_row* out);
int64_t wavemle_study_failure_count(const wavemle_study* study);

wavemle_status wavemle_study_write_csv(const wavemle_study* study, const char* path);

/* Summary document (config echo, per-N aggregates, KS verdicts, slopes).
 * with_timestamp = 0 omits the only non-reproducible field.  Free the result
 * with wavemle_string_free. */
wavemle_status wavemle_study_summary_json(const wavemle_study* study,
                                          int32_t with_timestamp, char** out);

/* log RMSE vs log N slopes under the sweep preconditions (>= 4 levels,
 * R >= 100). */
wavemle_status wavemle_study_slopes(const wavemle_study* study, double* slope_theta1,
                                    double* slope_theta2);

/* ---------- statistics utilities ---------- */

/* One-sample Kolmogorov-Smirnov test against the standard normal; needs >= 8
 * finite samples. */
wavemle_status wavemle_ks_test(const double* samples, int64_t len, double* d,
                               double* p_value);

double wavemle_normal_cdf(double x);
wavemle_status wavemle_normal_quantile(double p, double* out);

#ifdef __cplusplus
}
#endif

#endif /* WAVEMLE_H */
