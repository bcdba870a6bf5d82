#include "modes.hpp"

#include <cmath>
#include <sstream>

#include "moments.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace wavemle {

Transition exact_transition(int k, const ModelParams& params, double dt) {
  if (!(dt >= 0.0)) throw domain_error("exact_transition: dt must be >= 0");
  const double l = ell(k, params);
  const double b = params.b();
  const double decay = std::exp(-b * dt);
  const double c = std::cos(l * dt);
  const double s = std::sin(l * dt);

  Transition tr;
  tr.mean_map = {{{decay * (c + b * s / l), decay * s / l},
                  {-decay * (l + b * b / l) * s, decay * (c - b * s / l)}}};

  const ModeMoments q = mode_second_moments(k, params, dt);
  tr.noise_cov = {{{q.e_uu, q.e_uv}, {q.e_uv, q.e_vv}}};

  const double l11 = std::sqrt(std::max(q.e_uu, 0.0));
  double l21 = 0.0;
  double l22sq = q.e_vv;
  if (l11 > 0.0) {
    l21 = q.e_uv / l11;
    l22sq = q.e_vv - l21 * l21;
  }
  tr.chol = {{{l11, 0.0}, {l21, std::sqrt(std::max(l22sq, 0.0))}}};
  return tr;
}

namespace detail {

void exact_path(int k, const ModelParams& params, const TimeGrid& grid, std::uint64_t seed,
                std::uint32_t replication, bool zero_noise, std::span<double> u,
                std::span<double> v) {
  const Transition tr = exact_transition(k, params, grid.dt());
  const StreamId id{stream_domain::kFieldSimulation, static_cast<std::uint32_t>(k),
                    replication};
  double x = 0.0, y = 0.0;
  u[0] = 0.0;
  v[0] = 0.0;
  for (std::int64_t i = 0; i < grid.num_steps; ++i) {
    double nx = tr.mean_map[0][0] * x + tr.mean_map[0][1] * y;
    double ny = tr.mean_map[1][0] * x + tr.mean_map[1][1] * y;
    if (!zero_noise) {
      const auto [z0, z1] = normal_pair(seed, id, static_cast<std::uint64_t>(i));
      nx += tr.chol[0][0] * z0;
      ny += tr.chol[1][0] * z0 + tr.chol[1][1] * z1;
    }
    x = nx;
    y = ny;
    u[i + 1] = x;
    v[i + 1] = y;
  }
}

void euler_path(int k, const ModelParams& params, const TimeGrid& grid, std::uint64_t seed,
                std::uint32_t replication, bool zero_noise, std::span<double> u,
                std::span<double> v, std::span<double> dw_out) {
  require_valid(params, k);
  const double h = grid.dt();
  const double sqrt_h = std::sqrt(h);
  const StreamId id{stream_domain::kFieldSimulation, static_cast<std::uint32_t>(k),
                    replication};
  u[0] = 0.0;
  v[0] = 0.0;
  for (std::int64_t i = 0; i < grid.num_steps; ++i) {
    double dw = 0.0;
    if (!zero_noise)
      dw = sqrt_h * normal_pair(seed, id, static_cast<std::uint64_t>(i)).first;
    const auto [nu, nv] = euler_step(u[i], v[i], k, params, h, dw);
    u[i + 1] = nu;
    v[i + 1] = nv;
    if (!dw_out.empty()) dw_out[i] = dw;
  }
}

void reconstruct_increments(int k, const ModelParams& params, const TimeGrid& grid,
                            std::span<const double> u, std::span<const double> v,
                            std::span<double> dw) {
  const double h = grid.dt();
  const double om2 = params.theta1 * static_cast<double>(k) * static_cast<double>(k);
  for (std::int64_t i = 0; i < grid.num_steps; ++i) {
    const double u_mid = 0.5 * (u[i] + u[i + 1]);
    const double v_mid = 0.5 * (v[i] + v[i + 1]);
    dw[i] = v[i + 1] - v[i] - (-om2 * u_mid + params.theta2 * v_mid) * h;
  }
}

}  // namespace detail

std::pair<double, double> euler_step(double u, double v, int k, const ModelParams& params,
                                     double dt, double dw) {
  const double om2 = params.theta1 * static_cast<double>(k) * static_cast<double>(k);
  return {u + v * dt, v + (-om2 * u + params.theta2 * v) * dt + dw};
}

ModeTrajectory simulate_mode(int k, const ModelParams& params, const TimeGrid& grid,
                             std::uint64_t seed, std::uint32_t replication,
                             bool zero_noise) {
  check_grid(grid);
  ModeTrajectory traj;
  traj.k = k;
  traj.grid = grid;
  traj.u.resize(grid.num_steps + 1);
  traj.v.resize(grid.num_steps + 1);
  traj.dw.resize(grid.num_steps);
  detail::exact_path(k, params, grid, seed, replication, zero_noise, traj.u, traj.v);
  detail::reconstruct_increments(k, params, grid, traj.u, traj.v, traj.dw);
  return traj;
}

ModeTrajectory euler_mode(int k, const ModelParams& params, const TimeGrid& grid,
                          std::uint64_t seed, std::uint32_t replication, bool zero_noise) {
  check_grid(grid);
  ModeTrajectory traj;
  traj.k = k;
  traj.grid = grid;
  traj.u.resize(grid.num_steps + 1);
  traj.v.resize(grid.num_steps + 1);
  traj.dw.resize(grid.num_steps);
  detail::euler_path(k, params, grid, seed, replication, zero_noise, traj.u, traj.v,
                     traj.dw);
  return traj;
}

ModeTrajectory euler_mode_with_increments(int k, const ModelParams& params,
                                          const TimeGrid& grid,
                                          std::span<const double> dw) {
  check_grid(grid);
  require_valid(params, k);
  if (static_cast<std::int64_t>(dw.size()) != grid.num_steps)
    throw domain_error("euler_mode_with_increments: need num_steps increments");
  ModeTrajectory traj;
  traj.k = k;
  traj.grid = grid;
  traj.u.resize(grid.num_steps + 1);
  traj.v.resize(grid.num_steps + 1);
  traj.dw.assign(dw.begin(), dw.end());
  traj.u[0] = 0.0;
  traj.v[0] = 0.0;
  const double h = grid.dt();
  for (std::int64_t i = 0; i < grid.num_steps; ++i) {
    const auto [nu, nv] = euler_step(traj.u[i], traj.v[i], k, params, h, dw[i]);
    traj.u[i + 1] = nu;
    traj.v[i + 1] = nv;
  }
  return traj;
}

FieldTrajectory simulate_field(const ModelParams& params, int n_modes, const TimeGrid& grid,
                               std::uint64_t seed, Scheme scheme, std::uint64_t replication,
                               bool zero_noise, int threads) {
  if (n_modes < 1) throw domain_error("simulate_field: n_modes must be >= 1");
  check_grid(grid);
  require_valid(params, n_modes);
  if (replication > 0xFFFFFFFFull)
    throw domain_error("simulate_field: replication id exceeds 32 bits");

  FieldTrajectory field;
  field.params = params;
  field.grid = grid;
  field.seed = seed;
  field.replication = replication;
  field.scheme = scheme;
  field.zero_noise = zero_noise;
  field.modes.resize(n_modes);
  const auto rep32 = static_cast<std::uint32_t>(replication);
  parallel_for(n_modes, threads, [&](std::int64_t j) {
    const int k = static_cast<int>(j) + 1;
    field.modes[j] = scheme == Scheme::kExactTransition
                         ? simulate_mode(k, params, grid, seed, rep32, zero_noise)
                         : euler_mode(k, params, grid, seed, rep32, zero_noise);
  });
  return field;
}

double field_value(const FieldTrajectory& field, std::int64_t t_index, double x) {
  if (t_index < 0 || t_index > field.grid.num_steps) {
    std::ostringstream os;
    os << "field_value: t_index " << t_index << " outside [0, " << field.grid.num_steps
       << "]";
    throw domain_error(os.str());
  }
  if (!(x >= 0.0 && x <= std::numbers::pi))
    throw domain_error("field_value: x must lie in [0, pi]");
  double sum = 0.0;
  for (const ModeTrajectory& mode : field.modes)
    sum += mode.u[t_index] * std::sin(mode.k * x);
  return std::sqrt(2.0 / std::numbers::pi) * sum;
}

}  // namespace wavemle
