#pragma once

#include <vector>

#include "safe/molecule.hpp"

namespace safe {

// Average molecular weight in daltons, implicit and explicit hydrogens
// included. Wildcards weigh nothing.
double molecular_weight(const MolecularGraph& mol);

struct RingInfo {
  std::vector<int> ring_sizes;  // ascending, one per SSSR ring
  int max_ring_size = 0;
  std::vector<std::vector<int>> rings;  // bond indices of each ring
};

// Smallest set of smallest rings (a minimum cycle basis, Horton candidates
// filtered by GF(2) independence).
RingInfo ring_info(const MolecularGraph& mol);

// |E| - |V| + |components|
int cycle_rank(const MolecularGraph& mol);

}  // namespace safe
