// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRIAD_RNG_HPP
#define TRIAD_RNG_HPP

#include <cstdint>
#include <random>

namespace triad {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// A seeded random stream. Substreams derived from the same base seed but
/// different indices are independent for Monte Carlo purposes, which lets
/// chunked simulations reproduce bit-identically under any thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : RngStream(seed, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t state = seed ^ (0xd1342543de82ef95ull * (stream_index + 1));
    const std::uint64_t w0 = detail::splitmix64(state);
    const std::uint64_t w1 = detail::splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0 >> 32),
                      static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1 >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw strictly inside (0, 1); never returns an endpoint, so it is
  /// always a valid quantile argument.
  double uniform01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace triad

#endif  // TRIAD_RNG_HPP
