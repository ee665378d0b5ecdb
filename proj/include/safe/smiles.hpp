#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "safe/molecule.hpp"

namespace safe {

// Strict parse: the whole supported grammar, every ring digit paired,
// permissive valence check applied to organic-subset atoms.
MolecularGraph parse_smiles(std::string_view text);

struct ParseOptions {
  // Leave unpaired ring digits open instead of failing (SAFE prefixes).
  bool allow_open_rings = false;
  // Accept a trailing '.' (prompt prefixes end with one).
  bool allow_trailing_dot = false;
  // Also accept unclosed branches and a dangling bond symbol at the end
  // (text that more characters could still complete).
  bool allow_incomplete = false;
};

struct RingClosure {
  int bond;
  int label;
};

struct OpenRing {
  int atom;
  int label;
  BondOrder order;
  std::size_t position;
};

struct ParseResult {
  MolecularGraph graph;
  // Dot-separated chunk each atom was written in.
  std::vector<int> block_of_atom;
  int block_count = 0;
  // Text offset of each atom's first character.
  std::vector<std::size_t> atom_position;
  std::vector<RingClosure> ring_closures;
  std::vector<OpenRing> open_rings;
};

ParseResult parse_smiles_detailed(std::string_view text, const ParseOptions& options = {});

struct WriteOptions {
  bool canonical = true;
  std::optional<int> root;
};

std::string write_smiles(const MolecularGraph& mol, const WriteOptions& options = {});

// Shorthand: canonical SMILES of a graph.
inline std::string canonical_smiles(const MolecularGraph& mol) {
  return write_smiles(mol, WriteOptions{true, std::nullopt});
}

// Largest ring-closure digit used by the canonical SMILES of `mol`
// (0 when acyclic).
int max_canonical_ring_digit(const MolecularGraph& mol);

// "7" or "%12".
std::string ring_label_text(int label);

}  // namespace safe
