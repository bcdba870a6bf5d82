// wave-mle: command-line front end over the wavemle C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavemle.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliError {
  int exit_code;
  std::string code;
  std::string message;
  json violations;  // optional array
};

int status_exit_code(wavemle_status status) {
  switch (status) {
    case WAVEMLE_OK:
      return 0;
    case WAVEMLE_ERR_INVALID_ARGUMENT:
      return 1;
    case WAVEMLE_ERR_IO:
      return 3;
    default:
      return 2;  // domain, singular, internal: runtime numerical errors
  }
}

void check(wavemle_status status) {
  if (status == WAVEMLE_OK) return;
  throw CliError{status_exit_code(status), wavemle_status_name(status),
                 wavemle_last_error(), json()};
}

struct ModelDeleter {
  void operator()(wavemle_model* m) const { wavemle_model_free(m); }
};
struct FieldDeleter {
  void operator()(wavemle_field* f) const { wavemle_field_free(f); }
};
struct ConfigDeleter {
  void operator()(wavemle_config* c) const { wavemle_config_free(c); }
};
struct StudyDeleter {
  void operator()(wavemle_study* s) const { wavemle_study_free(s); }
};
using ModelPtr = std::unique_ptr<wavemle_model, ModelDeleter>;
using FieldPtr = std::unique_ptr<wavemle_field, FieldDeleter>;
using ConfigPtr = std::unique_ptr<wavemle_config, ConfigDeleter>;
using StudyPtr = std::unique_ptr<wavemle_study, StudyDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{3, "io", "cannot open: " + path, json()};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{3, "io", "cannot open for writing: " + path, json()};
  out << text;
  if (!out) throw CliError{3, "io", "write failed: " + path, json()};
}

// every subcommand shares these
struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int threads = -1;       // -1: not given on the command line
  std::string scheme;     // "", "exact", "euler"
  std::string route_j12;  // "", "identity", "riemann"
  std::string route_b2;   // "", "ito", "riemann"
};

void add_common(CLI::App* cmd, CommonOpts* opts, bool with_config = true) {
  if (with_config)
    cmd->add_option("--config", opts->config_path, "JSON run configuration")->required();
  cmd->add_option("--out", opts->out_dir, "output directory (created if missing)");
  cmd->add_option("--threads", opts->threads,
                  "worker threads (0 = hardware; overrides WAVE_MLE_THREADS and config)");
  cmd->add_option("--scheme", opts->scheme, "sampling scheme: exact|euler")
      ->check(CLI::IsMember({"exact", "euler"}));
  cmd->add_option("--route-j12", opts->route_j12, "J12 route: identity|riemann")
      ->check(CLI::IsMember({"identity", "riemann"}));
  cmd->add_option("--route-b2", opts->route_b2, "B2 route: ito|riemann")
      ->check(CLI::IsMember({"ito", "riemann"}));
}

ConfigPtr parse_config_file(const std::string& path) {
  const std::string text = read_file(path);
  char* violations = nullptr;
  wavemle_config* raw = nullptr;
  const wavemle_status status = wavemle_config_parse(text.c_str(), &violations, &raw);
  if (status != WAVEMLE_OK) {
    json arr = json::array();
    if (violations) {
      arr = json::parse(violations, nullptr, false);
      wavemle_string_free(violations);
      if (arr.is_discarded()) arr = json::array();
    }
    throw CliError{1, "config", "configuration rejected", arr};
  }
  return ConfigPtr(raw);
}

int resolve_threads(const CommonOpts& opts, const wavemle_config* config) {
  if (opts.threads >= 0) return opts.threads;
  if (const char* env = std::getenv("WAVE_MLE_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 0 && value <= 4096)
      return static_cast<int>(value);
  }
  return config ? wavemle_config_threads(config) : 0;
}

int32_t resolve_scheme(const CommonOpts& opts, const wavemle_config* config) {
  if (opts.scheme == "exact") return WAVEMLE_SCHEME_EXACT;
  if (opts.scheme == "euler") return WAVEMLE_SCHEME_EULER;
  return config ? wavemle_config_scheme(config) : WAVEMLE_SCHEME_EXACT;
}

int32_t resolve_route_j12(const CommonOpts& opts, const wavemle_config* config) {
  if (opts.route_j12 == "identity") return WAVEMLE_J12_IDENTITY;
  if (opts.route_j12 == "riemann") return WAVEMLE_J12_RIEMANN;
  return config ? wavemle_config_route_j12(config) : WAVEMLE_J12_IDENTITY;
}

int32_t resolve_route_b2(const CommonOpts& opts, const wavemle_config* config) {
  if (opts.route_b2 == "ito") return WAVEMLE_B2_ITO;
  if (opts.route_b2 == "riemann") return WAVEMLE_B2_RIEMANN;
  return config ? wavemle_config_route_b2(config) : WAVEMLE_B2_ITO;
}

fs::path resolve_out_dir(const CommonOpts& opts, const wavemle_config* config) {
  std::string dir = opts.out_dir;
  if (dir.empty() && config) dir = wavemle_config_out_dir(config);
  if (dir.empty()) dir = ".";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError{3, "io", "cannot create output directory: " + dir, json()};
  return fs::path(dir);
}

void run_simulate(const CommonOpts& opts) {
  ConfigPtr config = parse_config_file(opts.config_path);
  const fs::path out = resolve_out_dir(opts, config.get());
  wavemle_model* model_raw = nullptr;
  check(wavemle_config_model(config.get(), &model_raw));
  ModelPtr model(model_raw);

  wavemle_field* field_raw = nullptr;
  check(wavemle_field_simulate(
      model.get(), wavemle_config_n_modes(config.get()),
      wavemle_config_horizon(config.get()), wavemle_config_num_steps(config.get()),
      wavemle_config_seed(config.get()), wavemle_config_replication(config.get()),
      resolve_scheme(opts, config.get()), wavemle_config_zero_noise(config.get()),
      resolve_threads(opts, config.get()), &field_raw));
  FieldPtr field(field_raw);

  const std::string csv = (out / "trajectory.csv").string();
  const std::string sidecar = (out / "trajectory.json").string();
  check(wavemle_field_write_csv(field.get(), csv.c_str(), sidecar.c_str()));

  const double* x_grid = nullptr;
  size_t n_x = 0;
  check(wavemle_config_x_grid(config.get(), &x_grid, &n_x));
  if (n_x > 0) {
    std::ostringstream os;
    os << "t,x,u\n";
    const int64_t steps = wavemle_field_num_steps(field.get());
    const double horizon = wavemle_field_horizon(field.get());
    char buf[96];
    for (int64_t i = 0; i <= steps; ++i) {
      const double t = horizon * static_cast<double>(i) / static_cast<double>(steps);
      for (size_t j = 0; j < n_x; ++j) {
        double value = 0.0;
        check(wavemle_field_value(field.get(), i, x_grid[j], &value));
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, x_grid[j], value);
        os << buf;
      }
    }
    write_file((out / "field_values.csv").string(), os.str());
  }
  std::printf("wrote %s\n", csv.c_str());
}

void run_moments(const CommonOpts& opts) {
  ConfigPtr config = parse_config_file(opts.config_path);
  const fs::path out = resolve_out_dir(opts, config.get());
  wavemle_model* model_raw = nullptr;
  check(wavemle_config_model(config.get(), &model_raw));
  ModelPtr model(model_raw);

  const int32_t* k_list = nullptr;
  size_t n_k = 0;
  check(wavemle_config_k_list(config.get(), &k_list, &n_k));
  const double* t_grid = nullptr;
  size_t n_t = 0;
  check(wavemle_config_t_grid(config.get(), &t_grid, &n_t));

  std::ostringstream os;
  os << "k,t,e_uu,e_vv,e_uv\n";
  char buf[128];
  for (size_t i = 0; i < n_k; ++i) {
    for (size_t j = 0; j < n_t; ++j) {
      double e_uu = 0.0, e_vv = 0.0, e_uv = 0.0;
      check(wavemle_mode_moments(model.get(), k_list[i], t_grid[j], &e_uu, &e_vv, &e_uv));
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", k_list[i], t_grid[j],
                    e_uu, e_vv, e_uv);
      os << buf;
    }
  }
  const std::string moments_path = (out / "moments.csv").string();
  write_file(moments_path, os.str());

  const double* gammas = nullptr;
  size_t n_g = 0;
  check(wavemle_config_gamma_list(config.get(), &gammas, &n_g));
  if (n_g > 0) {
    const int32_t n_modes = wavemle_config_n_modes(config.get());
    std::ostringstream sob;
    sob << "gamma,t,N,value\n";
    for (size_t g = 0; g < n_g; ++g) {
      for (size_t j = 0; j < n_t; ++j) {
        double value = 0.0;
        check(wavemle_sobolev_norm_sq(model.get(), t_grid[j], gammas[g], n_modes, &value));
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%.17g\n", gammas[g], t_grid[j],
                      n_modes, value);
        sob << buf;
      }
    }
    write_file((out / "sobolev.csv").string(), sob.str());
  }
  std::printf("wrote %s\n", moments_path.c_str());
}

void run_estimate(const CommonOpts& opts, const std::string& traj_path,
                  const std::string& sidecar_path) {
  const fs::path out = resolve_out_dir(opts, nullptr);
  wavemle_field* field_raw = nullptr;
  check(wavemle_field_read_csv(traj_path.c_str(), sidecar_path.c_str(), &field_raw));
  FieldPtr field(field_raw);

  wavemle_stats stats{};
  check(wavemle_field_stats(field.get(), resolve_route_j12(opts, nullptr),
                            resolve_route_b2(opts, nullptr), &stats));
  wavemle_estimate est{};
  check(wavemle_mle(&stats, &est));

  json doc;
  doc["theta1_hat"] = est.theta1_hat;
  doc["theta2_hat"] = est.theta2_hat;
  doc["det"] = est.det;
  doc["D_N"] = est.d_n;
  doc["N"] = est.n_modes;
  doc["dt"] = stats.dt;
  doc["routes"] = {
      {"j12", stats.route_j12 == WAVEMLE_J12_IDENTITY ? "identity" : "riemann"},
      {"b2", stats.route_b2 == WAVEMLE_B2_ITO ? "ito" : "riemann"}};
  doc["stats"] = {{"J1", stats.j1},
                  {"J2", stats.j2},
                  {"J12", stats.j12},
                  {"B1", stats.b1},
                  {"B2", stats.b2}};
  const std::string text = doc.dump(2) + "\n";
  write_file((out / "estimate.json").string(), text);
  std::fputs(text.c_str(), stdout);
}

void run_study(const CommonOpts& opts, bool sweep) {
  ConfigPtr config = parse_config_file(opts.config_path);
  const fs::path out = resolve_out_dir(opts, config.get());

  if (sweep) {
    const int32_t* n_list = nullptr;
    size_t n_levels = 0;
    check(wavemle_config_n_list(config.get(), &n_list, &n_levels));
    json violations = json::array();
    if (n_levels < 4)
      violations.push_back("\"N_list\": sweep needs at least 4 truncation levels");
    // R is validated by the parser to >= 1; the sweep precondition is stricter
    if (!violations.empty())
      throw CliError{1, "config", "configuration rejected for sweep", violations};
  }

  StudyPtr study;
  {
    wavemle_study* raw = nullptr;
    check(wavemle_study_run(config.get(), resolve_threads(opts, config.get()), &raw));
    study.reset(raw);
  }
  if (sweep) {
    double s1 = 0.0, s2 = 0.0;
    const wavemle_status status = wavemle_study_slopes(study.get(), &s1, &s2);
    if (status == WAVEMLE_ERR_DOMAIN)
      throw CliError{1, "config", wavemle_last_error(), json::array()};
    check(status);
  }

  const std::string csv = (out / "study.csv").string();
  check(wavemle_study_write_csv(study.get(), csv.c_str()));
  char* summary = nullptr;
  check(wavemle_study_summary_json(study.get(), 1, &summary));
  write_file((out / "summary.json").string(), summary);
  wavemle_string_free(summary);
  std::printf("wrote %s\n", csv.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave-mle: spectral simulation and maximum-likelihood estimation\n"
               "for the 1-d damped stochastic wave equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wavemle_version()));

  CommonOpts simulate_opts, moments_opts, estimate_opts, study_opts, sweep_opts;
  std::string traj_path, sidecar_path;

  CLI::App* simulate =
      app.add_subcommand("simulate", "simulate Fourier-mode trajectories, write CSV");
  add_common(simulate, &simulate_opts);

  CLI::App* moments =
      app.add_subcommand("moments", "tabulate analytic second moments, write CSV");
  add_common(moments, &moments_opts);

  CLI::App* estimate = app.add_subcommand(
      "estimate", "estimate (theta1, theta2) from a trajectory CSV + sidecar");
  add_common(estimate, &estimate_opts, /*with_config=*/false);
  estimate->add_option("--traj", traj_path, "trajectory CSV")->required();
  estimate->add_option("--sidecar", sidecar_path, "trajectory JSON sidecar")->required();

  CLI::App* study = app.add_subcommand(
      "study", "Monte Carlo study across truncation levels, write study.csv + summary.json");
  add_common(study, &study_opts);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "convergence-rate sweep (slopes of log RMSE vs log N)");
  add_common(sweep, &sweep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints --help text or the usage error
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) run_simulate(simulate_opts);
    if (moments->parsed()) run_moments(moments_opts);
    if (estimate->parsed()) run_estimate(estimate_opts, traj_path, sidecar_path);
    if (study->parsed()) run_study(study_opts, /*sweep=*/false);
    if (sweep->parsed()) run_study(sweep_opts, /*sweep=*/true);
  } catch (const CliError& e) {
    json err;
    err["error"]["code"] = e.code;
    err["error"]["message"] = e.message;
    if (e.violations.is_array() && !e.violations.empty())
      err["error"]["violations"] = e.violations;
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return e.exit_code;
  } catch (const std::exception& e) {
    json err;
    err["error"]["code"] = "internal";
    err["error"]["message"] = e.what();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }
  return 0;
}
