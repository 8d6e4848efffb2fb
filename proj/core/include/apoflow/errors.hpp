//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_ERRORS_HPP
#define APOFLOW_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apoflow {

/// Raised by text-format readers (SMILES, PDB, manifests). `position` is a
/// byte offset for single-line inputs and a 1-based line number for
/// line-oriented formats; the message always says which.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

}  // namespace apoflow

#endif  // APOFLOW_ERRORS_HPP
