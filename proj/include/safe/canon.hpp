#pragma once

#include <vector>

#include "safe/molecule.hpp"

namespace safe {

// Canonical atom ranks: a permutation of 0..n-1 that is invariant under atom
// reindexing (up to automorphism). Iterative neighbourhood refinement seeded
// with (element, charge, degree, aromatic, ring, H count), then the lowest
// tied class is split and refined again until every rank is unique.
// Stereo markers do not take part.
std::vector<int> canonical_ranks(const MolecularGraph& mol);

}  // namespace safe
