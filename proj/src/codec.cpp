#include "safe/codec.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "safe/canon.hpp"
#include "safe/detail/render.hpp"
#include "safe/detail/writer.hpp"
#include "safe/error.hpp"
#include "safe/smiles.hpp"

namespace safe {

std::string_view cut_source_name(CutSource source) {
  switch (source) {
    case CutSource::kRules: return "rules";
    case CutSource::kLouvain: return "louvain";
    case CutSource::kNone: return "none";
  }
  return "none";
}

namespace detail {

namespace {

constexpr char kOpenMark = '\x01';
constexpr char kCloseMark = '\x02';

std::string placeholder(int id) {
  return std::string(1, kOpenMark) + std::to_string(id) + kCloseMark;
}

}  // namespace

MolecularGraph block_graph(const MolecularGraph& mol, const std::vector<int>& block_of_atom, int block) {
  std::vector<int> local(mol.size(), -1);
  std::vector<Atom> out_atoms;
  for (int a = 0; a < static_cast<int>(mol.size()); ++a) {
    if (block_of_atom[a] != block) continue;
    local[a] = static_cast<int>(out_atoms.size());
    out_atoms.push_back(mol.atom(a));
  }
  std::vector<Bond> out_bonds;
  for (const Bond& b : mol.bonds()) {
    const bool in_a = block_of_atom[b.a] == block;
    const bool in_b = block_of_atom[b.b] == block;
    if (!in_a && !in_b) continue;
    Bond nb;
    nb.order = b.order;
    if (in_a && in_b) {
      nb.a = local[b.a];
      nb.b = local[b.b];
    } else {
      Atom dummy;
      dummy.element = kWildcard;
      dummy.aromatic = b.order == BondOrder::kAromatic;
      nb.a = local[in_a ? b.a : b.b];
      nb.b = static_cast<int>(out_atoms.size());
      out_atoms.push_back(dummy);
    }
    out_bonds.push_back(nb);
  }
  return MolecularGraph(std::move(out_atoms), std::move(out_bonds));
}

Rendered render_blocks(const MolecularGraph& mol, const RenderSpec& spec) {
  const int n = static_cast<int>(mol.size());
  if (static_cast<int>(spec.block_of_atom.size()) != n) {
    throw SafeError(ErrorCode::kInvalidArgument, "block assignment must cover every atom");
  }
  std::mt19937_64 rng(spec.seed);

  std::vector<int> priority;
  if (spec.mode == RenderMode::kIndex) {
    priority.resize(static_cast<std::size_t>(n));
    std::iota(priority.begin(), priority.end(), 0);
  } else if (spec.mode == RenderMode::kRandom && spec.reroot) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);
    }
    priority.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) priority[order[i]] = i;
  } else {
    priority = canonical_ranks(mol);
  }

  int block_count = 0;
  for (int b : spec.block_of_atom) block_count = std::max(block_count, b + 1);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(block_count));
  for (int a = 0; a < n; ++a) {
    if (spec.block_of_atom[a] >= 0) members[spec.block_of_atom[a]].push_back(a);
  }

  // Bonds leaving a block, each written on the block side(s) as a token.
  std::vector<std::vector<ExternalBond>> externals(static_cast<std::size_t>(n));
  std::vector<std::vector<std::pair<int, ExternalBond>>> pending(static_cast<std::size_t>(n));
  std::set<int> placeholder_ids;
  int cross = 0;
  for (int bi = 0; bi < static_cast<int>(mol.bonds().size()); ++bi) {
    const Bond& b = mol.bond(bi);
    const int ba = spec.block_of_atom[b.a];
    const int bb = spec.block_of_atom[b.b];
    if (ba == bb) continue;
    const int id = cross++;
    if (ba < 0 || bb < 0) placeholder_ids.insert(id);
    const std::string token = placeholder(id);
    if (ba >= 0) pending[b.a].push_back({priority[b.b], {bond_symbol(mol, bi, b.a), token}});
    if (bb >= 0) pending[b.b].push_back({priority[b.a], {bond_symbol(mol, bi, b.b), token}});
  }
  for (int a = 0; a < n; ++a) {
    std::sort(pending[a].begin(), pending[a].end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [p, ext] : pending[a]) externals[a].push_back(std::move(ext));
  }

  std::vector<int> heavy(static_cast<std::size_t>(block_count), 0);
  std::vector<int> min_priority(static_cast<std::size_t>(block_count), n);
  for (int blk = 0; blk < block_count; ++blk) {
    for (int a : members[blk]) {
      if (mol.atom(a).is_heavy()) ++heavy[blk];
      min_priority[blk] = std::min(min_priority[blk], priority[a]);
    }
  }

  std::vector<int> order;
  for (int blk = 0; blk < block_count; ++blk) {
    if (!members[blk].empty()) order.push_back(blk);
  }
  if (spec.mode == RenderMode::kCanonical) {
    std::vector<std::string> keys(static_cast<std::size_t>(block_count));
    for (int blk : order) keys[blk] = canonical_smiles(block_graph(mol, spec.block_of_atom, blk));
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return std::tie(heavy[y], keys[x], min_priority[x]) < std::tie(heavy[x], keys[y], min_priority[y]);
    });
  } else if (spec.mode == RenderMode::kIndex) {
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return heavy[x] > heavy[y]; });
  } else {
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
      std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);
    }
  }

  std::vector<int> reserved;
  for (int k = 0; k < cross; ++k) reserved.push_back(spec.first_label + k);

  std::string text;
  Rendered out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int blk = order[k];
    std::optional<int> root;
    for (int a : members[blk]) {
      if (!externals[a].empty() && (!root || priority[a] < priority[*root])) root = a;
    }
    BlockSpec bs;
    bs.atoms = members[blk];
    bs.priority = priority;
    bs.root = root;
    bs.externals = &externals;
    bs.reserved_digits = reserved;
    if (k > 0) text += '.';
    text += write_block(mol, bs).text;
    out.block_heavy_atoms.push_back(heavy[blk]);
  }

  // Replace tokens with labels in order of first appearance.
  std::vector<int> label_of(static_cast<std::size_t>(cross), 0);
  int next = spec.first_label;
  std::string final_text;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != kOpenMark) {
      final_text += text[i];
      continue;
    }
    const std::size_t end = text.find(kCloseMark, i);
    const int id = std::stoi(text.substr(i + 1, end - i - 1));
    if (!label_of[id]) {
      label_of[id] = next++;
      out.safe.attachment_digits.push_back(label_of[id]);
      if (placeholder_ids.count(id)) out.open_labels.push_back(label_of[id]);
    }
    final_text += ring_label_text(label_of[id]);
    i = end;
  }
  out.safe = SafeString{std::move(final_text), {}, std::move(out.safe.attachment_digits)};
  std::size_t start = 0;
  for (std::size_t i = 0; i <= out.safe.text.size(); ++i) {
    if (i == out.safe.text.size() || out.safe.text[i] == '.') {
      out.safe.fragment_spans.emplace_back(start, i);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

namespace {

EncodeResult encode_blocks(const MolecularGraph& mol, const std::vector<int>& cuts, bool canonical,
                           CutSource source) {
  if (mol.empty()) throw SafeError(ErrorCode::kEmptyInput, "empty molecule");
  EncodeResult result;
  result.report.max_original_ring_digit = max_canonical_ring_digit(mol);
  result.report.first_attachment_digit = result.report.max_original_ring_digit + 1;
  result.report.cut_rule_source = source;

  const auto fragments = fragment_molecule(mol, cuts);
  detail::RenderSpec spec;
  spec.block_of_atom.assign(mol.size(), -1);
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    for (int a : fragments[f].atom_map) spec.block_of_atom[a] = static_cast<int>(f);
  }
  spec.mode = canonical ? detail::RenderMode::kCanonical : detail::RenderMode::kIndex;
  spec.first_label = result.report.first_attachment_digit;
  result.safe = detail::render_blocks(mol, spec).safe;
  result.report.n_fragments = static_cast<int>(fragments.size());
  return result;
}

ParseResult parse_complete(std::string_view text) {
  ParseOptions opt;
  opt.allow_open_rings = true;
  ParseResult parsed = parse_smiles_detailed(text, opt);
  if (!parsed.open_rings.empty()) {
    const OpenRing& open = parsed.open_rings.front();
    throw SafeError(ErrorCode::kOpenAttachment,
                    "label " + ring_label_text(open.label) + " is never closed", open.position);
  }
  return parsed;
}

SafeString rerender(std::string_view text, detail::RenderMode mode, std::uint64_t seed, bool reroot) {
  ParseResult parsed = parse_complete(text);
  detail::RenderSpec spec;
  spec.block_of_atom = parsed.block_of_atom;
  spec.mode = mode;
  spec.first_label = max_canonical_ring_digit(parsed.graph) + 1;
  spec.seed = seed;
  spec.reroot = reroot;
  return detail::render_blocks(parsed.graph, spec).safe;
}

}  // namespace

EncodeResult encode_with_cuts(const MolecularGraph& mol, std::vector<int> cut_bonds, bool canonical) {
  for (int b : cut_bonds) {
    if (b < 0 || b >= static_cast<int>(mol.bonds().size())) {
      throw SafeError(ErrorCode::kInvalidArgument, "cut bond index out of range");
    }
    if (mol.bond(b).in_ring) {
      throw SafeError(ErrorCode::kRingBondCut, "bond " + std::to_string(b) + " lies in a ring");
    }
    if (mol.bond(b).order != BondOrder::kSingle) {
      throw SafeError(ErrorCode::kUnsupportedCutOrder,
                      "bond " + std::to_string(b) + " is not a single bond");
    }
  }
  return encode_blocks(mol, cut_bonds, canonical, cut_bonds.empty() ? CutSource::kNone : CutSource::kRules);
}

EncodeResult encode_safe(const MolecularGraph& mol, const std::vector<BondCutRule>& rules,
                         bool canonical, double resolution) {
  for (const auto& rule : rules) {
    if (rule.left.cut_order != BondOrder::kSingle || rule.right.cut_order != BondOrder::kSingle) {
      throw SafeError(ErrorCode::kUnsupportedCutOrder, "rule " + rule.name + " cuts a non-single bond");
    }
  }
  std::vector<int> cuts = detect_cut_bonds(mol, rules);
  CutSource source = CutSource::kRules;
  if (cuts.empty()) {
    cuts = fallback_cut_bonds(mol, resolution);
    source = cuts.empty() ? CutSource::kNone : CutSource::kLouvain;
  }
  return encode_blocks(mol, cuts, canonical, source);
}

MolecularGraph decode_safe(std::string_view text) {
  return parse_complete(text).graph;
}

SafeString describe_safe(std::string text) {
  SafeString s;
  s.text = std::move(text);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.text.size(); ++i) {
    if (i == s.text.size() || s.text[i] == '.') {
      s.fragment_spans.emplace_back(start, i);
      start = i + 1;
    }
  }
  ParseOptions opt;
  opt.allow_open_rings = true;
  opt.allow_trailing_dot = true;
  const ParseResult parsed = parse_smiles_detailed(s.text, opt);
  std::vector<std::pair<std::size_t, int>> labels;
  for (const auto& rc : parsed.ring_closures) {
    const Bond& b = parsed.graph.bond(rc.bond);
    if (parsed.block_of_atom[b.a] != parsed.block_of_atom[b.b]) {
      labels.emplace_back(std::min(parsed.atom_position[b.a], parsed.atom_position[b.b]), rc.label);
    }
  }
  for (const auto& open : parsed.open_rings) labels.emplace_back(open.position, open.label);
  std::sort(labels.begin(), labels.end());
  for (const auto& [pos, label] : labels) s.attachment_digits.push_back(label);
  return s;
}

SafeString canonical_safe(std::string_view text) {
  return rerender(text, detail::RenderMode::kCanonical, 0, false);
}

SafeString randomize_safe(std::string_view text, std::uint64_t seed, bool reroot) {
  return rerender(text, detail::RenderMode::kRandom, seed, reroot);
}

std::vector<Fragment> list_fragments(std::string_view text) {
  ParseOptions opt;
  opt.allow_open_rings = true;
  opt.allow_trailing_dot = true;
  ParseResult parsed;
  try {
    parsed = parse_smiles_detailed(text, opt);
  } catch (const SafeError& e) {
    if (!e.position()) throw;
    const auto block = std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(
                                                     std::min(*e.position(), text.size())), '.');
    throw SafeError(e.code(), "block " + std::to_string(block) + ": " + e.detail(), e.position());
  }
  std::vector<std::vector<int>> members(static_cast<std::size_t>(parsed.block_count));
  for (int a = 0; a < static_cast<int>(parsed.graph.size()); ++a) {
    members[parsed.block_of_atom[a]].push_back(a);
  }
  std::vector<int> local(parsed.graph.size(), -1);
  std::vector<Fragment> fragments;
  for (const auto& atoms : members) {
    Fragment f;
    f.graph = parsed.graph.subgraph(atoms);
    f.heavy_atom_count = f.graph.heavy_atom_count();
    f.atom_map = atoms;
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i) local[atoms[i]] = i;
    fragments.push_back(std::move(f));
  }
  for (const auto& rc : parsed.ring_closures) {
    const Bond& b = parsed.graph.bond(rc.bond);
    if (parsed.block_of_atom[b.a] == parsed.block_of_atom[b.b]) continue;
    for (int end : {b.a, b.b}) {
      fragments[parsed.block_of_atom[end]].attachments.push_back({local[end], rc.label, b.order});
    }
  }
  for (const auto& open : parsed.open_rings) {
    fragments[parsed.block_of_atom[open.atom]].attachments.push_back(
        {local[open.atom], open.label, open.order});
  }
  return fragments;
}

}  // namespace safe
