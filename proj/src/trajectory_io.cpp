#include "trajectory_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace wavemle {

namespace {

using nlohmann::json;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_write(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw io_error("cannot open for writing: " + path);
  return f;
}

void finish_write(const FilePtr& f, const std::string& path) {
  if (std::ferror(f.get()) || std::fflush(f.get()) != 0)
    throw io_error("write failed: " + path);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json json_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::kExactTransition ? "exact" : "euler";
}
const char* j12_route_name(J12Route route) {
  return route == J12Route::kIdentity ? "identity" : "riemann";
}
const char* b2_route_name(B2Route route) {
  return route == B2Route::kItoIdentity ? "ito" : "riemann";
}
const char* normalization_name(Normalization normalization) {
  return normalization == Normalization::kTrueParams ? "true" : "plugin";
}

void write_field_csv(const FieldTrajectory& field, const std::string& csv_path) {
  FilePtr f = open_for_write(csv_path);
  std::fputs("t,k,u,v\n", f.get());
  for (const ModeTrajectory& mode : field.modes) {
    for (std::int64_t i = 0; i <= field.grid.num_steps; ++i) {
      std::fprintf(f.get(), "%.17g,%d,%.17g,%.17g\n", field.grid.time_at(i), mode.k,
                   mode.u[i], mode.v[i]);
    }
  }
  finish_write(f, csv_path);
}

void write_field_sidecar(const FieldTrajectory& field, const std::string& json_path) {
  json doc;
  doc["schema"] = "wave-mle-trajectory-v1";
  doc["theta1"] = field.params.theta1;
  doc["theta2"] = field.params.theta2;
  doc["T"] = field.grid.horizon;
  doc["M"] = field.grid.num_steps;
  doc["N"] = field.num_modes();
  doc["seed"] = field.seed;
  doc["replication"] = field.replication;
  doc["scheme"] = scheme_name(field.scheme);
  doc["zero_noise"] = field.zero_noise;
  FilePtr f = open_for_write(json_path);
  const std::string text = doc.dump(2) + "\n";
  std::fwrite(text.data(), 1, text.size(), f.get());
  finish_write(f, json_path);
}

FieldTrajectory read_field(const std::string& csv_path, const std::string& sidecar_path) {
  json doc;
  try {
    doc = json::parse(slurp(sidecar_path));
  } catch (const json::parse_error& e) {
    throw io_error("sidecar is not valid JSON: " + sidecar_path + ": " + e.what());
  }
  FieldTrajectory field;
  try {
    field.params.theta1 = doc.at("theta1").get<double>();
    field.params.theta2 = doc.at("theta2").get<double>();
    field.grid.horizon = doc.at("T").get<double>();
    field.grid.num_steps = doc.at("M").get<std::int64_t>();
    const int n_modes = doc.at("N").get<int>();
    field.seed = doc.value("seed", std::uint64_t{0});
    field.replication = doc.value("replication", std::uint64_t{0});
    const std::string scheme = doc.value("scheme", std::string{"exact"});
    if (scheme != "exact" && scheme != "euler")
      throw io_error("sidecar: unknown scheme '" + scheme + "'");
    field.scheme = scheme == "exact" ? Scheme::kExactTransition : Scheme::kEulerMaruyama;
    field.zero_noise = doc.value("zero_noise", false);
    field.modes.resize(n_modes);
  } catch (const json::exception& e) {
    throw io_error("sidecar missing or mistyped key: " + sidecar_path + ": " + e.what());
  }
  check_grid(field.grid);
  if (field.modes.empty()) throw io_error("sidecar: N must be >= 1");

  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + csv_path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,k,u,v", 0) != 0)
    throw io_error("trajectory CSV must start with header t,k,u,v: " + csv_path);

  const std::int64_t rows_per_mode = field.grid.num_steps + 1;
  for (std::size_t j = 0; j < field.modes.size(); ++j) {
    ModeTrajectory& mode = field.modes[j];
    mode.k = static_cast<int>(j) + 1;
    mode.grid = field.grid;
    mode.u.resize(rows_per_mode);
    mode.v.resize(rows_per_mode);
  }
  std::int64_t row = 0;
  const std::int64_t total = rows_per_mode * static_cast<std::int64_t>(field.modes.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= total) throw io_error("trajectory CSV has extra rows: " + csv_path);
    const char* p = line.c_str();
    char* end = nullptr;
    const double t = std::strtod(p, &end);
    (void)t;
    if (end == p || *end != ',') throw io_error("bad CSV row: " + line);
    p = end + 1;
    const long k = std::strtol(p, &end, 10);
    if (end == p || *end != ',') throw io_error("bad CSV row: " + line);
    p = end + 1;
    const double u = std::strtod(p, &end);
    if (end == p || *end != ',') throw io_error("bad CSV row: " + line);
    p = end + 1;
    const double v = std::strtod(p, &end);
    if (end == p) throw io_error("bad CSV row: " + line);

    const std::int64_t mode_idx = row / rows_per_mode;
    const std::int64_t i = row % rows_per_mode;
    if (k != mode_idx + 1)
      throw io_error("trajectory CSV out of order (expected ascending modes)");
    field.modes[mode_idx].u[i] = u;
    field.modes[mode_idx].v[i] = v;
    ++row;
  }
  if (row != total) throw io_error("trajectory CSV truncated: " + csv_path);

  // the CSV does not carry increments; rebuild them from the paths
  for (ModeTrajectory& mode : field.modes) {
    mode.dw.resize(field.grid.num_steps);
    detail::reconstruct_increments(mode.k, field.params, field.grid, mode.u, mode.v,
                                   mode.dw);
  }
  return field;
}

void write_study_csv(const StudyResult& result, const std::string& path) {
  FilePtr f = open_for_write(path);
  std::fputs("N,rep,theta1_hat,theta2_hat,z1,z2,D_N,failed\n", f.get());
  for (const StudyRow& row : result.rows) {
    std::fprintf(f.get(), "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", row.n, row.rep,
                 row.theta1_hat, row.theta2_hat, row.z1, row.z2, row.d_n,
                 row.failed ? 1 : 0);
  }
  finish_write(f, path);
}

std::string summary_json(const StudyResult& result, bool with_timestamp) {
  const StudyConfig& cfg = result.config;
  json doc;
  doc["config"] = {{"theta1", cfg.params.theta1},
                   {"theta2", cfg.params.theta2},
                   {"T", cfg.horizon},
                   {"M", cfg.num_steps},
                   {"N_list", cfg.n_list},
                   {"R", cfg.replications},
                   {"seed", cfg.seed},
                   {"scheme", scheme_name(cfg.scheme)},
                   {"normalization", normalization_name(cfg.normalization)},
                   {"route_j12", j12_route_name(cfg.route_j12)},
                   {"route_b2", b2_route_name(cfg.route_b2)},
                   {"zero_noise", cfg.zero_noise}};
  json per_n = json::array();
  for (const StudyAggregate& agg : result.per_n) {
    per_n.push_back({{"N", agg.n},
                     {"replications", agg.replications},
                     {"failures", agg.failures},
                     {"mean_z1", json_or_null(agg.mean_z1)},
                     {"var_z1", json_or_null(agg.var_z1)},
                     {"ks_z1_d", json_or_null(agg.ks_z1.d)},
                     {"ks_z1_p", json_or_null(agg.ks_z1.p_value)},
                     {"mean_z2", json_or_null(agg.mean_z2)},
                     {"var_z2", json_or_null(agg.var_z2)},
                     {"ks_z2_d", json_or_null(agg.ks_z2.d)},
                     {"ks_z2_p", json_or_null(agg.ks_z2.p_value)},
                     {"rmse_theta1", json_or_null(agg.rmse_theta1)},
                     {"rmse_theta2", json_or_null(agg.rmse_theta2)},
                     {"mean_abs_err_theta1", json_or_null(agg.mean_abs_err1)},
                     {"mean_abs_err_theta2", json_or_null(agg.mean_abs_err2)},
                     {"median_D_N", json_or_null(agg.median_d_n)}});
  }
  doc["per_N"] = per_n;
  if (result.slopes)
    doc["slopes"] = {{"theta1", json_or_null(result.slopes->slope_theta1)},
                     {"theta2", json_or_null(result.slopes->slope_theta2)}};
  else
    doc["slopes"] = nullptr;
  json metadata;
  metadata["generator"] = "wave-mle";
  if (with_timestamp) {
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    metadata["generated_at"] = buf;
  }
  doc["metadata"] = metadata;
  return doc.dump(2) + "\n";
}

void write_summary_json(const StudyResult& result, const std::string& path,
                        bool with_timestamp) {
  const std::string text = summary_json(result, with_timestamp);
  FilePtr f = open_for_write(path);
  std::fwrite(text.data(), 1, text.size(), f.get());
  finish_write(f, path);
}

std::string estimate_json(const Estimate& estimate, const SufficientStats& stats) {
  json doc;
  doc["theta1_hat"] = estimate.theta1_hat;
  doc["theta2_hat"] = estimate.theta2_hat;
  doc["det"] = estimate.det;
  doc["D_N"] = estimate.d_n;
  doc["N"] = estimate.n_modes;
  doc["dt"] = stats.dt;
  doc["routes"] = {{"j12", j12_route_name(stats.route_j12)},
                   {"b2", b2_route_name(stats.route_b2)}};
  doc["stats"] = {{"J1", stats.j1},
                  {"J2", stats.j2},
                  {"J12", stats.j12},
                  {"B1", stats.b1},
                  {"B2", stats.b2}};
  return doc.dump(2) + "\n";
}

}  // namespace wavemle
