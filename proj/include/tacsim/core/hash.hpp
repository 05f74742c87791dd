// Copyright 2026 The tacsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace tacsim {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

/// 64-bit FNV-1a over raw bytes; `seed` allows incremental hashing.
inline std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t seed = kFnvOffset) {
  std::uint64_t h = seed;
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= kFnvPrime;
  }
  return h;
}

template <typename T>
std::uint64_t fnv1a64_of(std::span<const T> values, std::uint64_t seed = kFnvOffset) {
  return fnv1a64(std::as_bytes(values), seed);
}

} // namespace tacsim
