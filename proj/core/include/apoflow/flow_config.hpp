//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_FLOW_CONFIG_HPP
#define APOFLOW_FLOW_CONFIG_HPP

#include <stdexcept>

namespace apoflow {

/// Sampler constants. Defaults are the production configuration: 40 Euler
/// steps, eta 1.0, clamp bounds 1e-6 away from {0, 1}, per-step alignment on.
struct FlowConfig {
  int steps = 40;
  double eta = 1.0;
  double clamp_lo = 1e-6;
  double clamp_hi = 1.0 - 1e-6;
  bool align_each_step = true;
  /// Restrict the per-step alignment fit to protein atoms (the transform is
  /// still applied to the whole state).
  bool align_protein_only = false;

  void validate() const {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (!(0.0 < clamp_lo && clamp_lo < clamp_hi && clamp_hi < 1.0))
      throw std::invalid_argument("clamp bounds must satisfy 0 < lo < hi < 1");
  }
};

}  // namespace apoflow

#endif  // APOFLOW_FLOW_CONFIG_HPP
