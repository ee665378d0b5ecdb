#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "safe/fragmenter.hpp"
#include "safe/molecule.hpp"

namespace safe {

struct SafeString {
  std::string text;
  // [start, end) of each dot-separated block.
  std::vector<std::pair<std::size_t, std::size_t>> fragment_spans;
  // Labels joining blocks, in order of first appearance.
  std::vector<int> attachment_digits;
};

enum class CutSource { kRules, kLouvain, kNone };

std::string_view cut_source_name(CutSource source);

struct EncodeReport {
  int n_fragments = 0;
  int max_original_ring_digit = 0;
  int first_attachment_digit = 1;
  CutSource cut_rule_source = CutSource::kNone;
};

struct EncodeResult {
  SafeString safe;
  EncodeReport report;
};

// SMILES -> SAFE. Cut bonds come from `rules`, else from the Louvain
// fallback; a molecule with no cut becomes a single block.
EncodeResult encode_safe(const MolecularGraph& mol,
                         const std::vector<BondCutRule>& rules = default_rules(),
                         bool canonical = true, double resolution = 1.0);

// Encodes with an explicit cut set. Ring bonds raise RingBondCut and
// non-single bonds UnsupportedCutOrder.
EncodeResult encode_with_cuts(const MolecularGraph& mol, std::vector<int> cut_bonds,
                              bool canonical = true);

// Parses a complete SAFE string. Unclosed labels raise OpenAttachment.
MolecularGraph decode_safe(std::string_view text);

// Block spans and inter-block labels of already formatted text.
SafeString describe_safe(std::string text);

// Blocks ordered by (heavy atoms desc, canonical fragment string asc),
// written from canonical ranks, labels renumbered from the molecule's
// canonical ring digit maximum + 1.
SafeString canonical_safe(std::string_view text);

// Seeded block shuffle; with `reroot`, every block is also written from a
// random traversal priority.
SafeString randomize_safe(std::string_view text, std::uint64_t seed, bool reroot = false);

// One fragment per block. Open labels (prefixes) are allowed and become
// attachment points; labels shared between blocks appear on both sides.
std::vector<Fragment> list_fragments(std::string_view text);

}  // namespace safe
