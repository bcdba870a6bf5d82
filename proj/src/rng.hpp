#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace wavemle {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
// A block is a pure function of (key, counter), so any (seed, stream, block)
// triple can be generated independently and in any order.  That is what makes
// parallel simulation deterministic: thread scheduling never touches the
// random numbers a task sees.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// One independent stream per (domain, mode_k, replication) triple under a
// single user seed.  mode_k must stay below 2^24; the top byte of its counter
// word carries the domain tag.
struct StreamId {
  std::uint32_t domain = 0;
  std::uint32_t mode_k = 0;
  std::uint32_t replication = 0;
};

namespace stream_domain {
inline constexpr std::uint32_t kFieldSimulation = 0;
inline constexpr std::uint32_t kEulerOracle = 1;
inline constexpr std::uint32_t kTest = 2;
}  // namespace stream_domain

inline std::array<std::uint32_t, 4> raw_block(std::uint64_t seed, const StreamId& id,
                                              std::uint64_t block) {
  return Philox4x32::block(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       id.mode_k | (id.domain << 24), id.replication},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

// Box-Muller pair from one Philox block: two 53-bit uniforms, u1 kept in
// (0, 1] so the log is always finite.
inline std::pair<double, double> normal_pair(std::uint64_t seed, const StreamId& id,
                                             std::uint64_t block) {
  const auto w = raw_block(seed, id, block);
  const std::uint64_t hi = w[0] | (static_cast<std::uint64_t>(w[1]) << 32);
  const std::uint64_t lo = w[2] | (static_cast<std::uint64_t>(w[3]) << 32);
  const double u1 = static_cast<double>((hi >> 11) + 1) * 0x1.0p-53;
  const double u2 = static_cast<double>(lo >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace wavemle
