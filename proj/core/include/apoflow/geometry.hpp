//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_GEOMETRY_HPP
#define APOFLOW_GEOMETRY_HPP

#include <Eigen/Core>

#include "apoflow/structures.hpp"

namespace apoflow {

/// Proper rigid motion: x -> R x + t with det(R) = +1.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Points apply(const Points& points) const;
  Eigen::Vector3d apply(const Eigen::Vector3d& point) const;
};

/// Weighted Kabsch superposition: returns the transform minimizing
/// sum_i w_i ||R m_i + t - target_i||^2. Needs >= 3 points with >= 3 strictly
/// positive weights; reflections are resolved by sign-flipping the smallest
/// singular direction. Throws std::invalid_argument on bad sizes/weights and
/// a degeneracy error when the weighted covariance has rank < 2.
RigidTransform kabsch(const Points& mobile, const Points& target,
                      const Eigen::VectorXd& weights);
RigidTransform kabsch(const Points& mobile, const Points& target);

/// Plain root-mean-square deviation; no alignment is performed.
double rmsd(const Points& a, const Points& b);

/// TM-score normalization scale d0(L) = 1.24 (L-15)^(1/3) - 1.8, floored at
/// 0.5 (the floor binds for L <= 21).
double tm_d0(int length);

/// (1/L) sum_i 1 / (1 + (d_i/d0)^2) over per-residue distances.
double tm_score_from_distances(const Eigen::VectorXd& distances, double d0);

/// TM-score between positionally corresponded C-alpha traces (apo vs holo of
/// the same protein; no sequence alignment search). Uses iterative
/// superposition: fit all residues, refit on the subset with d_i < d0,
/// repeat to convergence (at most 20 rounds), keep the best score.
double tm_score(const Points& a, const Points& b);

/// Superpose apo onto holo with per-residue weights w_i = exp(-d_i / scale),
/// where d_i is the distance from holo's CA_i to the nearest crystal ligand
/// atom. Returns the transformed apo structure.
Structure pocket_weighted_align(const Structure& apo, const Structure& holo,
                                const Points& crystal_ligand,
                                double scale = 5.0);

/// The transform used by pocket_weighted_align, for callers that need it.
RigidTransform pocket_weighted_transform(const Structure& apo,
                                         const Structure& holo,
                                         const Points& crystal_ligand,
                                         double scale = 5.0);

}  // namespace apoflow

#endif  // APOFLOW_GEOMETRY_HPP
