#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mc.hpp"

namespace wavemle {

// Parsed run configuration shared by every CLI subcommand.  Parsing validates
// the whole document and reports every violation at once; unknown keys are
// rejected.
//
// Required keys: theta1, theta2, T, M, N_list, R, seed.
// Optional keys: N, scheme, threads, route_j12, route_b2, normalization,
//                debug_zero_noise, rep, x_grid, t_grid, gamma_list, k_list,
//                out.
struct RunConfig {
  ModelParams params;
  double horizon = 0.0;
  std::int64_t num_steps = 0;
  std::vector<int> n_list;
  int replications = 0;
  std::uint64_t seed = 0;

  int n_modes = 0;  // "N"; defaults to max(N_list)
  Scheme scheme = Scheme::kExactTransition;
  int threads = 0;  // 0 = hardware concurrency
  J12Route route_j12 = J12Route::kIdentity;
  B2Route route_b2 = B2Route::kItoIdentity;
  Normalization normalization = Normalization::kTrueParams;
  bool zero_noise = false;
  std::uint64_t replication = 0;  // "rep", used by simulate

  std::vector<double> x_grid;      // field evaluation points in [0, pi]
  std::vector<double> t_grid;      // moment evaluation times; default quarters of T
  std::vector<double> gamma_list;  // Sobolev exponents
  std::vector<int> k_list;         // moment table modes; default 1..min(N, 20)
  std::string out_dir;

  StudyConfig study() const;
};

// Throws config_error carrying the full violation list on rejection; syntax
// errors report line and column.
RunConfig parse_run_config(const std::string& text);

}  // namespace wavemle
