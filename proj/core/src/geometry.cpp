//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#include "apoflow/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace apoflow {

Points RigidTransform::apply(const Points& points) const {
  Points out = points * rotation.transpose();
  out.rowwise() += translation.transpose();
  return out;
}

Eigen::Vector3d RigidTransform::apply(const Eigen::Vector3d& point) const {
  return rotation * point + translation;
}

RigidTransform kabsch(const Points& mobile, const Points& target,
                      const Eigen::VectorXd& weights) {
  if (mobile.rows() != target.rows())
    throw std::invalid_argument("kabsch: point count mismatch");
  if (mobile.rows() < 3)
    throw std::invalid_argument("kabsch: need at least 3 points");
  if (weights.size() != mobile.rows())
    throw std::invalid_argument("kabsch: weight count mismatch");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("kabsch: negative weight");
  if ((weights.array() > 0.0).count() < 3)
    throw std::invalid_argument("kabsch: need at least 3 positive weights");

  const double wsum = weights.sum();
  const Eigen::RowVector3d mu_m = (weights.transpose() * mobile) / wsum;
  const Eigen::RowVector3d mu_t = (weights.transpose() * target) / wsum;

  const Points m = mobile.rowwise() - mu_m;
  const Points s = target.rowwise() - mu_t;
  // Cross-covariance H(a,b) = sum_i w_i m_i[a] s_i[b].
  const Eigen::Matrix3d h = m.transpose() * weights.asDiagonal() * s;

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (sv(1) <= 1e-9 * std::max(sv(0), 1.0))
    throw std::invalid_argument("kabsch: degenerate (rank < 2) configuration");

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;
  RigidTransform out;
  out.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  out.translation = mu_t.transpose() - out.rotation * mu_m.transpose();
  return out;
}

RigidTransform kabsch(const Points& mobile, const Points& target) {
  return kabsch(mobile, target, Eigen::VectorXd::Ones(mobile.rows()));
}

double rmsd(const Points& a, const Points& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("rmsd: count mismatch");
  if (a.rows() == 0) throw std::invalid_argument("rmsd: empty point sets");
  return std::sqrt((a - b).rowwise().squaredNorm().mean());
}

double tm_d0(int length) {
  double d0 = 0.5;
  if (length > 15) d0 = 1.24 * std::cbrt(static_cast<double>(length - 15)) - 1.8;
  return std::max(d0, 0.5);
}

double tm_score_from_distances(const Eigen::VectorXd& distances, double d0) {
  const Eigen::ArrayXd r = distances.array() / d0;
  return (1.0 / (1.0 + r.square())).mean();
}

double tm_score(const Points& a, const Points& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("tm_score: count mismatch");
  const Eigen::Index n = a.rows();
  if (n < 3) throw std::invalid_argument("tm_score: need at least 3 residues");
  const double d0 = tm_d0(static_cast<int>(n));

  auto distances = [&](const RigidTransform& t) -> Eigen::VectorXd {
    return (t.apply(a) - b).rowwise().norm();
  };
  auto subset_of = [&](const Eigen::VectorXd& d) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      if (d(i) < d0) idx.push_back(i);
    return idx;
  };

  RigidTransform t = kabsch(a, b);
  Eigen::VectorXd d = distances(t);
  double best = tm_score_from_distances(d, d0);
  std::vector<Eigen::Index> subset = subset_of(d);

  for (int iter = 0; iter < 20; ++iter) {
    if (subset.size() < 3) break;
    Points sa(static_cast<Eigen::Index>(subset.size()), 3);
    Points sb(static_cast<Eigen::Index>(subset.size()), 3);
    for (std::size_t i = 0; i < subset.size(); ++i) {
      sa.row(static_cast<Eigen::Index>(i)) = a.row(subset[i]);
      sb.row(static_cast<Eigen::Index>(i)) = b.row(subset[i]);
    }
    try {
      t = kabsch(sa, sb);
    } catch (const std::invalid_argument&) {
      break;  // degenerate subset; keep the best fit so far
    }
    d = distances(t);
    best = std::max(best, tm_score_from_distances(d, d0));
    std::vector<Eigen::Index> next = subset_of(d);
    if (next == subset) break;
    subset = std::move(next);
  }
  return best;
}

RigidTransform pocket_weighted_transform(const Structure& apo,
                                         const Structure& holo,
                                         const Points& crystal_ligand,
                                         double scale) {
  if (apo.residue_count() != holo.residue_count())
    throw std::invalid_argument(
        "pocket_weighted_align: residue count mismatch");
  if (crystal_ligand.rows() == 0)
    throw std::invalid_argument("pocket_weighted_align: empty ligand");

  const Points apo_ca = apo.ca_coords();
  const Points holo_ca = holo.ca_coords();
  Eigen::VectorXd weights(holo_ca.rows());
  for (Eigen::Index i = 0; i < holo_ca.rows(); ++i) {
    const double d = (crystal_ligand.rowwise() - holo_ca.row(i))
                         .rowwise()
                         .norm()
                         .minCoeff();
    weights(i) = std::exp(-d / scale);
  }
  return kabsch(apo_ca, holo_ca, weights);
}

Structure pocket_weighted_align(const Structure& apo, const Structure& holo,
                                const Points& crystal_ligand, double scale) {
  const RigidTransform t =
      pocket_weighted_transform(apo, holo, crystal_ligand, scale);
  Structure out = apo;
  out.set_protein_coords(t.apply(apo.protein_coords()));
  if (!out.ligand_atoms.empty())
    out.set_ligand_coords(t.apply(apo.ligand_coords()));
  return out;
}

}  // namespace apoflow
