#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "safe/molecule.hpp"

namespace safe::detail {

// A ring-bond token attached to an atom whose partner is written elsewhere
// (another SAFE block, or an open attachment site).
struct ExternalBond {
  std::string symbol;  // bond symbol, possibly empty
  std::string token;   // ring label text or a placeholder
};

struct BlockSpec {
  // Atoms to write; may span several connected pieces, joined by '.'.
  std::span<const int> atoms;
  // Global traversal priority per atom of the molecule (lower goes first).
  std::span<const int> priority;
  std::optional<int> root;
  // Indexed by global atom; may be empty.
  const std::vector<std::vector<ExternalBond>>* externals = nullptr;
  // Ring digits the writer must not use for its own ring closures.
  std::span<const int> reserved_digits;
};

struct BlockText {
  std::string text;
  int max_digit = 0;
  std::vector<int> atom_order;
};

BlockText write_block(const MolecularGraph& mol, const BlockSpec& spec);

std::string atom_text(const Atom& atom);
// Symbol for `bond` written while walking away from `from`.
std::string bond_symbol(const MolecularGraph& mol, int bond, int from);

}  // namespace safe::detail
