//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_RNG_HPP
#define APOFLOW_RNG_HPP

#include <cstdint>
#include <random>

namespace apoflow {

/// Deterministic random stream. A (seed, stream) pair yields an independent
/// generator, so parallel workers can derive non-overlapping streams from one
/// root seed (stream id = sample index).
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : RngStream(seed, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream);

  /// Standard normal draw.
  double normal();
  /// Uniform draw in [0, 1).
  double uniform();
  std::uint64_t next_u64();

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace apoflow

#endif  // APOFLOW_RNG_HPP
