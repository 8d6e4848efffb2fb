//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "apoflow/rng.hpp"

namespace apoflow {

namespace {

// splitmix64; scrambles (seed, stream) into a well-mixed engine seed.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix(mix(seed) ^ mix(stream + 1))) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

}  // namespace apoflow
