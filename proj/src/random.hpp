// Copyright 2026 The softspace Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SOFTSPACE_SRC_RANDOM_HPP
#define SOFTSPACE_SRC_RANDOM_HPP

#include <cstdint>
#include <random>

namespace softspace::detail {

/// Uniform integer in [0, bound) by Lemire's multiply-and-reject. Unlike
/// std::uniform_int_distribution the algorithm is fixed, so a seed gives the
/// same stream with every standard library.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  __extension__ typedef unsigned __int128 uint128;
  uint128 product = static_cast<uint128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<uint128>(rng()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

/// Generator keyed by a 64-bit seed and a 64-bit stream index.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace softspace::detail

#endif  // SOFTSPACE_SRC_RANDOM_HPP
