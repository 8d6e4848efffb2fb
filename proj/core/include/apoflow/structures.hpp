//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_STRUCTURES_HPP
#define APOFLOW_STRUCTURES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "apoflow/flow_config.hpp"

namespace apoflow {

struct MolGraph;

using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct Atom {
  std::string name;
  std::string element;
  Eigen::Vector3d position;
};

struct Residue {
  std::string label;  // three-letter code, one of the 20 amino acids
  int index = 0;
  std::vector<Atom> atoms;

  const Atom* c_alpha() const;
};

struct Chain {
  std::string id;
  std::vector<Residue> residues;
};

/// Protein chains plus ligand heavy atoms with 3D coordinates (angstrom).
struct Structure {
  std::vector<Chain> chains;
  struct LigandAtom {
    std::string element;
    Eigen::Vector3d position;
    int fragment_id = 0;
  };
  std::vector<LigandAtom> ligand_atoms;

  int protein_atom_count() const;
  int residue_count() const;
  /// All protein heavy atoms in file order.
  Points protein_coords() const;
  /// One C-alpha per residue, chain then residue order.
  Points ca_coords() const;
  Points ligand_coords() const;
  /// Overwrite coordinates from the same layout produced by the getters.
  void set_protein_coords(const Points& coords);
  void set_ligand_coords(const Points& coords);
};

/// Fixed-column PDB subset: ATOM/HETATM records, hydrogens and waters
/// skipped, HETATM records become ligand atoms grouped into fragments by
/// (chain, residue number). Residue numbering must be consecutive within a
/// chain (a jump means unresolved residues and rejects the file) and every
/// residue must expose exactly one CA atom. Throws ParseError with the
/// 1-based line number.
Structure read_pdb(std::string_view text);

/// Deterministic fixed-column output, coordinates at 3 decimals
/// (round half away from zero). Throws std::invalid_argument when a
/// coordinate cannot fit the 8-column field (>= 10000 or <= -1000).
std::string write_pdb(const Structure& structure);

struct Partition {
  Eigen::Index n_protein = 0;
  Eigen::Index n_ligand = 0;
  std::vector<int> fragment_ids;  // one per ligand atom

  bool operator==(const Partition&) const = default;
};

/// Concatenated protein+ligand coordinate block with its partition.
/// `atom_features` optionally carries static per-atom descriptors (graph
/// features for the field network); it is empty unless a caller attaches it.
struct ComplexState {
  Points coords;
  Partition partition;
  double time = 0.0;
  Eigen::MatrixXd atom_features;

  Eigen::Index total_atoms() const { return coords.rows(); }
};

/// Protein rows first, then ligand fragments in input order.
/// Throws std::invalid_argument when both blocks are empty or any coordinate
/// is non-finite.
ComplexState concat_state(const Points& protein,
                          const std::vector<Points>& ligand_fragments,
                          double t);

/// Exact inverse of concat_state.
std::pair<Points, std::vector<Points>> split_state(const ComplexState& state);

struct TrajectoryFrame {
  int step = 0;
  double time = 0.0;
  ComplexState state;
};

/// Ordered sampling trajectory; frame 0 is the prior sample at t = 0 and
/// frame times increase strictly toward 1.
struct Trajectory {
  FlowConfig config;
  std::uint64_t seed = 0;
  std::vector<TrajectoryFrame> frames;
};

/// JSON-Lines serialization: a metadata header line (config, seed, partition)
/// followed by one frame per line. Numbers carry 17 significant digits so
/// coordinates round-trip bitwise.
std::string write_trajectory(const Trajectory& trajectory);

/// Throws ParseError (1-based line number) on a truncated or malformed line,
/// a missing header, or non-monotone frame times.
Trajectory read_trajectory(std::string_view text);

/// Rebuild a Structure from a template and a ligand graph using the
/// coordinates of `state` (protein block first, ligand block ordered like the
/// graph's atoms). Used to export generated states as PDB.
Structure state_to_structure(const Structure& protein_template,
                             const MolGraph& ligand, const ComplexState& state);

}  // namespace apoflow

#endif  // APOFLOW_STRUCTURES_HPP
