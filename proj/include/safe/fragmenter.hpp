#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "safe/molecule.hpp"

namespace safe {

// One side of a bond-cut rule, written as SMILES whose first atom is the
// wildcard `*` standing for the far side of the cut; the wildcard's single
// neighbour is the marked atom. Further wildcards match any atom.
struct SidePattern {
  MolecularGraph graph;  // pattern without the leading marker
  int marked = 0;
  BondOrder cut_order = BondOrder::kSingle;
  std::string source;

  static SidePattern from_smiles(std::string_view text);
};

enum class RingState { kAny, kRing, kChain };

struct SideConstraint {
  RingState ring = RingState::kAny;
  int min_heavy_atoms = 0;  // heavy atoms that must stay on this side
  std::vector<SidePattern> forbidden;
};

struct BondCutRule {
  std::string name;
  SidePattern left;
  SidePattern right;
  SideConstraint left_constraint;
  SideConstraint right_constraint;
};

// The built-in BRICS-lite set (R1 ring/chain, R2 amide, R3 N/O-alkyl ether
// and amine, R4 ring-ring).
const std::vector<BondCutRule>& default_rules();

// `name TAB left TAB right` per line; blank and '#' lines skipped.
std::vector<BondCutRule> parse_rules(std::string_view text);
std::vector<BondCutRule> load_rules(const std::string& path);

// Single acyclic bonds matched by some rule, ascending, deduplicated.
std::vector<int> detect_cut_bonds(const MolecularGraph& mol, const std::vector<BondCutRule>& rules);

struct AttachmentPoint {
  int fragment_atom;
  int label;
  BondOrder cut_bond_order;
};

struct Fragment {
  MolecularGraph graph;
  std::vector<AttachmentPoint> attachments;
  int heavy_atom_count = 0;
  // Source atom for each fragment atom (index into the parent graph).
  std::vector<int> atom_map;
};

// Cuts the listed acyclic bonds. Labels are 1..k in ascending bond order;
// fragments are ordered by their lowest parent atom index.
std::vector<Fragment> fragment_molecule(const MolecularGraph& mol, std::vector<int> cut_bonds);

// Re-bonds attachment pairs; the inverse of fragment_molecule.
MolecularGraph reassemble(const std::vector<Fragment>& fragments);

struct Partition {
  std::vector<int> community_of;
  double modularity = 0.0;
  int community_count() const;
};

// Weighted undirected graph for modularity optimisation.
struct CommunityGraph {
  int node_count = 0;
  struct Edge {
    int u;
    int v;
    double weight;
  };
  std::vector<Edge> edges;
};

double modularity(const CommunityGraph& graph, const std::vector<int>& community_of,
                  double resolution = 1.0);

// Two-phase Louvain (local moving, then aggregation) visiting nodes in
// `visit_order`, followed by a refinement on the original graph: node moves,
// community merges, Kernighan-Lin sweeps and merge/eject perturbations, each
// kept only on a strict modularity gain.
Partition louvain(const CommunityGraph& graph, const std::vector<int>& visit_order,
                  double resolution = 1.0);

// Louvain over the heavy-atom graph of a connected molecule, nodes visited
// by ascending canonical rank. community_of covers every atom of `mol`;
// non-heavy atoms join a neighbour's community.
Partition louvain_communities(const MolecularGraph& mol, double resolution = 1.0);

// Acyclic single bonds separating Louvain communities. Communities that
// touch through a ring bond or a multiple bond are merged first.
std::vector<int> fallback_cut_bonds(const MolecularGraph& mol, double resolution = 1.0);

}  // namespace safe
