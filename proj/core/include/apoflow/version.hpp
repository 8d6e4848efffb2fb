//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_VERSION_HPP
#define APOFLOW_VERSION_HPP

namespace apoflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace apoflow

#endif  // APOFLOW_VERSION_HPP
