#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "model.hpp"

namespace wavemle {

enum class Scheme { kExactTransition, kEulerMaruyama };

using Mat2 = std::array<std::array<double, 2>, 2>;

// One-step conditional law of (u_k, v_k) over a step of length dt: the state
// propagates through mean_map = exp(A dt) and picks up a centered Gaussian
// increment with covariance noise_cov = chol * chol^T.
struct Transition {
  Mat2 mean_map{};
  Mat2 noise_cov{};
  Mat2 chol{};  // lower triangular
};

Transition exact_transition(int k, const ModelParams& params, double dt);

struct ModeTrajectory {
  int k = 0;
  std::vector<double> u;   // M + 1 samples, u[0] = 0
  std::vector<double> v;   // M + 1 samples, v[0] = 0
  std::vector<double> dw;  // M increments, see below
  TimeGrid grid;
};

struct FieldTrajectory {
  ModelParams params;
  TimeGrid grid;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  Scheme scheme = Scheme::kExactTransition;
  bool zero_noise = false;
  std::vector<ModeTrajectory> modes;  // modes[j].k == j + 1

  int num_modes() const { return static_cast<int>(modes.size()); }
};

// Samples (u_k, v_k) on the grid with the exact one-step Gaussian law, so the
// joint distribution at the grid points has no discretization bias.  The dw
// array is reconstructed from the velocity-equation residual with trapezoidal
// averages (O(dt) accurate) and is meant for xi diagnostics only; the exact
// sampler consumes the two-dimensional convolution increment, not per-step
// Brownian increments.
ModeTrajectory simulate_mode(int k, const ModelParams& params, const TimeGrid& grid,
                             std::uint64_t seed, std::uint32_t replication = 0,
                             bool zero_noise = false);

// Explicit first-order Euler-Maruyama scheme, biased O(dt); kept as an
// independent cross-check of the exact sampler.  dw holds the increments the
// scheme actually consumed.
ModeTrajectory euler_mode(int k, const ModelParams& params, const TimeGrid& grid,
                          std::uint64_t seed, std::uint32_t replication = 0,
                          bool zero_noise = false);

// Euler path driven by caller-supplied Brownian increments (refinement
// studies want increments that are consistent across grids).
ModeTrajectory euler_mode_with_increments(int k, const ModelParams& params,
                                          const TimeGrid& grid,
                                          std::span<const double> dw);

// One explicit Euler update from (u, v).
std::pair<double, double> euler_step(double u, double v, int k, const ModelParams& params,
                                     double dt, double dw);

// N independent modes; mode k draws from the substream (seed, k, replication),
// so results are bit-reproducible and independent of execution order.
FieldTrajectory simulate_field(const ModelParams& params, int n_modes, const TimeGrid& grid,
                               std::uint64_t seed, Scheme scheme = Scheme::kExactTransition,
                               std::uint64_t replication = 0, bool zero_noise = false,
                               int threads = 1);

// sqrt(2/pi) sum_k u_k(t_index) sin(k x) for x in [0, pi].
double field_value(const FieldTrajectory& field, std::int64_t t_index, double x);

namespace detail {
// Low-level samplers writing into caller buffers of size M + 1; shared by the
// trajectory builders and the streaming study runner so both produce
// bit-identical paths.
void exact_path(int k, const ModelParams& params, const TimeGrid& grid, std::uint64_t seed,
                std::uint32_t replication, bool zero_noise, std::span<double> u,
                std::span<double> v);
void euler_path(int k, const ModelParams& params, const TimeGrid& grid, std::uint64_t seed,
                std::uint32_t replication, bool zero_noise, std::span<double> u,
                std::span<double> v, std::span<double> dw_out);
void reconstruct_increments(int k, const ModelParams& params, const TimeGrid& grid,
                            std::span<const double> u, std::span<const double> v,
                            std::span<double> dw);
}  // namespace detail

}  // namespace wavemle
