//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_PRIORS_HPP
#define APOFLOW_PRIORS_HPP

#include <cstdint>

#include <Eigen/Core>

#include "apoflow/molgraph.hpp"
#include "apoflow/rng.hpp"
#include "apoflow/structures.hpp"

namespace apoflow {

enum class CenterMode { ProteinCaCentroid, Origin, Custom };

struct PriorConfig {
  double sigma = 1e-4;  // Gaussian noise scale, angstrom
  CenterMode center_mode = CenterMode::ProteinCaCentroid;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();  // used by Custom
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draw one fragment from the harmonic prior exp(-1/2 x^T L x): per spatial
/// dimension, coefficient ~ N(0, 1/lambda_k) along each eigenvector with
/// lambda_k > 0; the null mode is pinned so the fragment centroid equals
/// `center`. Throws std::invalid_argument on an eigenvalue below -1e-10.
Points sample_harmonic(const FragmentLaplacian& lap,
                       const Eigen::Vector3d& center, RngStream& rng);

/// Adds i.i.d. N(0, sigma^2) per coordinate. sigma = 0 returns the template
/// bitwise and consumes no randomness.
Points noised_template(const Points& coords, double sigma, RngStream& rng);

/// Prior complex at t = 0: noised protein template first, then each ligand
/// fragment drawn independently from its harmonic prior at the configured
/// center (default: protein C-alpha centroid). Randomness order: protein
/// noise, then fragments in fragment order.
ComplexState assemble_prior(const Structure& protein_template,
                            const MolGraph& ligand, const PriorConfig& config,
                            RngStream& rng);

}  // namespace apoflow

#endif  // APOFLOW_PRIORS_HPP
