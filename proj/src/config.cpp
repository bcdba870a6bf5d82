#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wavemle {

namespace {

using nlohmann::json;

struct Collector {
  std::vector<std::string> violations;

  void add(const std::string& v) { violations.push_back(v); }

  template <class T>
  void fail(const std::string& key, const T& why) {
    std::ostringstream os;
    os << "\"" << key << "\": " << why;
    violations.push_back(os.str());
  }
};

std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

bool get_double(const json& doc, const char* key, Collector& errs, double* out) {
  if (!doc.contains(key)) return false;
  const json& v = doc.at(key);
  if (!v.is_number()) {
    errs.fail(key, "must be a number");
    return false;
  }
  *out = v.get<double>();
  if (!std::isfinite(*out)) {
    errs.fail(key, "must be finite");
    return false;
  }
  return true;
}

bool get_int(const json& doc, const char* key, Collector& errs, std::int64_t* out) {
  if (!doc.contains(key)) return false;
  const json& v = doc.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    errs.fail(key, "must be an integer");
    return false;
  }
  *out = v.get<std::int64_t>();
  return true;
}

bool get_uint64(const json& doc, const char* key, Collector& errs, std::uint64_t* out) {
  if (!doc.contains(key)) return false;
  const json& v = doc.at(key);
  if (v.is_number_unsigned()) {
    *out = v.get<std::uint64_t>();
    return true;
  }
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    *out = static_cast<std::uint64_t>(v.get<std::int64_t>());
    return true;
  }
  errs.fail(key, "must be a nonnegative integer");
  return false;
}

}  // namespace

StudyConfig RunConfig::study() const {
  StudyConfig cfg;
  cfg.params = params;
  cfg.horizon = horizon;
  cfg.num_steps = num_steps;
  cfg.n_list = n_list;
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.scheme = scheme;
  cfg.normalization = normalization;
  cfg.route_j12 = route_j12;
  cfg.route_b2 = route_b2;
  cfg.zero_noise = zero_noise;
  return cfg;
}

RunConfig parse_run_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream os;
    os << "JSON parse error at line " << line << ", column " << column;
    throw config_error("config rejected", {os.str()});
  }
  if (!doc.is_object())
    throw config_error("config rejected", {"top-level value must be a JSON object"});

  static const std::set<std::string> known = {
      "theta1",   "theta2",     "T",           "M",      "N_list",
      "R",        "seed",       "N",           "scheme", "threads",
      "route_j12", "route_b2",  "normalization", "debug_zero_noise",
      "rep",      "x_grid",     "t_grid",      "gamma_list", "k_list", "out"};

  Collector errs;
  for (const auto& item : doc.items())
    if (!known.count(item.key())) errs.fail(item.key(), "unknown key");

  RunConfig cfg;

  // required scalars
  for (const char* key : {"theta1", "theta2", "T", "M", "N_list", "R", "seed"})
    if (!doc.contains(key)) errs.fail(key, "required key is missing");

  if (get_double(doc, "theta1", errs, &cfg.params.theta1) && !(cfg.params.theta1 > 0.0))
    errs.fail("theta1", "must be > 0");
  get_double(doc, "theta2", errs, &cfg.params.theta2);
  if (get_double(doc, "T", errs, &cfg.horizon) && !(cfg.horizon > 0.0))
    errs.fail("T", "must be > 0");
  if (get_int(doc, "M", errs, &cfg.num_steps) && cfg.num_steps < 1)
    errs.fail("M", "must be >= 1");
  std::int64_t reps = 0;
  if (get_int(doc, "R", errs, &reps)) {
    if (reps < 1 || reps > (1 << 30))
      errs.fail("R", "must be between 1 and 2^30");
    else
      cfg.replications = static_cast<int>(reps);
  }
  get_uint64(doc, "seed", errs, &cfg.seed);
  get_uint64(doc, "rep", errs, &cfg.replication);

  if (doc.contains("N_list")) {
    const json& v = doc.at("N_list");
    if (!v.is_array() || v.empty()) {
      errs.fail("N_list", "must be a nonempty array of positive integers");
    } else {
      bool ok = true;
      for (const json& e : v) {
        if (!e.is_number_integer() && !e.is_number_unsigned()) {
          errs.fail("N_list", "entries must be integers");
          ok = false;
          break;
        }
        const std::int64_t n = e.get<std::int64_t>();
        if (n < 1 || n > (1 << 24)) {
          errs.fail("N_list", "entries must be in [1, 2^24]");
          ok = false;
          break;
        }
        cfg.n_list.push_back(static_cast<int>(n));
      }
      if (ok && !std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()))
        errs.fail("N_list", "must be ascending");
      if (ok && std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end())
        errs.fail("N_list", "must not contain duplicates");
    }
  }

  std::int64_t n_modes = 0;
  if (get_int(doc, "N", errs, &n_modes)) {
    if (n_modes < 1 || n_modes > (1 << 24))
      errs.fail("N", "must be in [1, 2^24]");
    else
      cfg.n_modes = static_cast<int>(n_modes);
  } else if (!cfg.n_list.empty()) {
    cfg.n_modes = cfg.n_list.back();
  }

  if (doc.contains("scheme")) {
    const std::string s = doc.at("scheme").is_string() ? doc.at("scheme").get<std::string>() : "";
    if (s == "exact")
      cfg.scheme = Scheme::kExactTransition;
    else if (s == "euler")
      cfg.scheme = Scheme::kEulerMaruyama;
    else
      errs.fail("scheme", "must be \"exact\" or \"euler\"");
  }
  if (doc.contains("route_j12")) {
    const std::string s =
        doc.at("route_j12").is_string() ? doc.at("route_j12").get<std::string>() : "";
    if (s == "identity")
      cfg.route_j12 = J12Route::kIdentity;
    else if (s == "riemann")
      cfg.route_j12 = J12Route::kRiemann;
    else
      errs.fail("route_j12", "must be \"identity\" or \"riemann\"");
  }
  if (doc.contains("route_b2")) {
    const std::string s =
        doc.at("route_b2").is_string() ? doc.at("route_b2").get<std::string>() : "";
    if (s == "ito")
      cfg.route_b2 = B2Route::kItoIdentity;
    else if (s == "riemann")
      cfg.route_b2 = B2Route::kRiemann;
    else
      errs.fail("route_b2", "must be \"ito\" or \"riemann\"");
  }
  if (doc.contains("normalization")) {
    const std::string s = doc.at("normalization").is_string()
                              ? doc.at("normalization").get<std::string>()
                              : "";
    if (s == "true")
      cfg.normalization = Normalization::kTrueParams;
    else if (s == "plugin")
      cfg.normalization = Normalization::kPlugIn;
    else
      errs.fail("normalization", "must be \"true\" or \"plugin\"");
  }
  if (doc.contains("debug_zero_noise")) {
    if (!doc.at("debug_zero_noise").is_boolean())
      errs.fail("debug_zero_noise", "must be a boolean");
    else
      cfg.zero_noise = doc.at("debug_zero_noise").get<bool>();
  }
  std::int64_t threads = 0;
  if (get_int(doc, "threads", errs, &threads)) {
    if (threads < 0 || threads > 4096)
      errs.fail("threads", "must be in [0, 4096] (0 = hardware)");
    else
      cfg.threads = static_cast<int>(threads);
  }

  const auto read_double_array = [&](const char* key, std::vector<double>* out) {
    if (!doc.contains(key)) return;
    const json& v = doc.at(key);
    if (!v.is_array()) {
      errs.fail(key, "must be an array of numbers");
      return;
    }
    for (const json& e : v) {
      if (!e.is_number()) {
        errs.fail(key, "entries must be numbers");
        return;
      }
      out->push_back(e.get<double>());
    }
  };
  read_double_array("x_grid", &cfg.x_grid);
  read_double_array("t_grid", &cfg.t_grid);
  read_double_array("gamma_list", &cfg.gamma_list);
  for (double x : cfg.x_grid)
    if (!(x >= 0.0 && x <= std::numbers::pi)) {
      errs.fail("x_grid", "entries must lie in [0, pi]");
      break;
    }
  for (double t : cfg.t_grid)
    if (!(t >= 0.0)) {
      errs.fail("t_grid", "entries must be >= 0");
      break;
    }

  if (doc.contains("k_list")) {
    const json& v = doc.at("k_list");
    if (!v.is_array()) {
      errs.fail("k_list", "must be an array of positive integers");
    } else {
      for (const json& e : v) {
        if ((!e.is_number_integer() && !e.is_number_unsigned()) ||
            e.get<std::int64_t>() < 1) {
          errs.fail("k_list", "entries must be positive integers");
          cfg.k_list.clear();
          break;
        }
        cfg.k_list.push_back(static_cast<int>(e.get<std::int64_t>()));
      }
    }
  }
  if (doc.contains("out")) {
    if (!doc.at("out").is_string())
      errs.fail("out", "must be a string");
    else
      cfg.out_dir = doc.at("out").get<std::string>();
  }

  // semantic gate: the oscillation condition must hold up to the largest mode
  // any subcommand would touch
  if (errs.violations.empty()) {
    int k_max = std::max(cfg.n_modes, cfg.n_list.empty() ? 1 : cfg.n_list.back());
    for (int k : cfg.k_list) k_max = std::max(k_max, k);
    const Validity validity = validate_params(cfg.params, std::max(k_max, 1));
    if (!validity.ok) errs.add(validity.message);
  }

  if (!errs.violations.empty()) throw config_error("config rejected", errs.violations);

  // defaults that need the validated values
  if (cfg.t_grid.empty())
    cfg.t_grid = {0.25 * cfg.horizon, 0.5 * cfg.horizon, 0.75 * cfg.horizon, cfg.horizon};
  if (cfg.k_list.empty())
    for (int k = 1; k <= std::min(cfg.n_modes, 20); ++k) cfg.k_list.push_back(k);
  return cfg;
}

}  // namespace wavemle
