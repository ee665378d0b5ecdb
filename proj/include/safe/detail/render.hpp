#pragma once

#include <cstdint>
#include <vector>

#include "safe/codec.hpp"
#include "safe/molecule.hpp"

namespace safe::detail {

enum class RenderMode { kCanonical, kIndex, kRandom };

struct RenderSpec {
  // Block of each atom; -1 marks a placeholder atom that is not written,
  // its bonds becoming open attachment labels.
  std::vector<int> block_of_atom;
  RenderMode mode = RenderMode::kCanonical;
  int first_label = 1;
  std::uint64_t seed = 0;
  bool reroot = false;
};

struct Rendered {
  SafeString safe;
  std::vector<int> block_heavy_atoms;  // in output order
  std::vector<int> open_labels;        // labels bonded to placeholders
};

// Writes each block as its own SMILES chunk; bonds between blocks and to
// placeholders become ring labels numbered from first_label in order of
// first appearance.
Rendered render_blocks(const MolecularGraph& mol, const RenderSpec& spec);

// Atoms of one block plus a `*` on every bond leaving it.
MolecularGraph block_graph(const MolecularGraph& mol, const std::vector<int>& block_of_atom, int block);

}  // namespace safe::detail
