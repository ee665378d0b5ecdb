#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "safe/molecule.hpp"

namespace safe {

struct MatchOptions {
  // Pattern atoms with this element match any target atom.
  int wildcard_element = kWildcard;
  // Enumerating more than `cap` mappings raises MappingCapExceeded.
  std::size_t cap = 10000;
  // Stop quietly after this many mappings (0 = enumerate all).
  std::size_t max_results = 0;
  // When false, wildcard pattern atoms may share a target atom with each
  // other (never with a non-wildcard atom). Used when checking that a
  // molecule carries a scaffold whose attachment sites may be bridged by one
  // atom.
  bool wildcards_injective = true;
  // Fixed (pattern atom, target atom) pairs.
  std::vector<std::pair<int, int>> anchors;
  // Only target atoms flagged true may be used (empty = all).
  std::vector<bool> target_mask;
};

using AtomMapping = std::vector<int>;  // pattern atom -> target atom

// All injective pattern->target maps preserving element, aromatic flag,
// formal charge, and the order of every pattern bond (non-induced).
std::vector<AtomMapping> match_substructure(const MolecularGraph& pattern,
                                            const MolecularGraph& target,
                                            const MatchOptions& options = {});

bool has_substructure(const MolecularGraph& pattern, const MolecularGraph& target,
                      MatchOptions options = {});

}  // namespace safe
