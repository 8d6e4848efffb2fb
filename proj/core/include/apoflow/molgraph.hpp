//
// Project Apoflow - Copyright 2026 Apoflow Developers.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef APOFLOW_MOLGRAPH_HPP
#define APOFLOW_MOLGRAPH_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace apoflow {

enum class BondOrder { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
};

/// Heavy-atom bond graph of a (possibly multi-fragment) ligand.
///
/// Adjacency is unweighted: bond orders are kept for parsing fidelity and
/// automorphism matching but never scale the Laplacian. Fragment ids are
/// contiguous from 0 and follow atom order; atoms of one fragment occupy a
/// contiguous index range.
struct MolGraph {
  std::vector<std::string> atoms;  // element symbols, heavy atoms only
  std::vector<Bond> bonds;
  std::vector<int> fragment_ids;
  std::vector<std::string> warnings;  // tokens accepted but ignored (charge, stereo, [H])

  int atom_count() const { return static_cast<int>(atoms.size()); }
  int bond_count() const { return static_cast<int>(bonds.size()); }
  int fragment_count() const;
  /// Atom indices of `fragment`, in parse order.
  std::vector<int> fragment_atoms(int fragment) const;
  int degree(int atom) const;
};

/// Parse the supported SMILES subset: organic-subset atoms, bracket atoms
/// without isotopes, bonds - = # :, branches, ring-closure digits (also %nn),
/// dot fragment separator, lowercase aromatics. Charges, stereo marks and
/// explicit [H] atoms are ignored with a warning. Ring closures must pair
/// within their dot-separated fragment so that dot components and graph
/// components coincide.
///
/// Throws ParseError naming the byte offset of the offending token.
MolGraph parse_smiles(std::string_view text);

/// Dense Laplacian L = D - A of one fragment, over 0/1 adjacency.
struct FragmentLaplacian {
  int size = 0;
  Eigen::MatrixXd entries;
};

FragmentLaplacian laplacian(const MolGraph& graph, int fragment);

/// Element- and bond-preserving atom permutations of one fragment, in
/// fragment-local indexing (`permutations[k][i]` is where atom i maps).
/// Identity is always present. Enumeration stops at `cap` and reports it.
struct AutomorphismSet {
  std::vector<std::vector<int>> permutations;
  bool truncated = false;
};

/// Backtracking search refined by element and degree; fragments are capped at
/// 64 atoms. Throws std::invalid_argument on an unknown fragment, an oversized
/// fragment, or cap == 0.
AutomorphismSet automorphisms(const MolGraph& graph, int fragment,
                              std::size_t cap = 10000);

}  // namespace apoflow

#endif  // APOFLOW_MOLGRAPH_HPP
