#include "safe/canon.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

namespace safe {
namespace {

// Dense ranks from arbitrary sortable keys; equal keys share a rank.
template <typename Key>
int dense_ranks(const std::vector<Key>& keys, std::vector<int>& ranks) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return keys[x] < keys[y]; });
  ranks.assign(keys.size(), 0);
  int current = -1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || keys[order[k - 1]] < keys[order[k]]) ++current;
    ranks[order[k]] = current;
  }
  return current + 1;
}

using AtomKey = std::tuple<int, int, int, int, int, int, int, bool, std::string>;

// Refines ranks by neighbourhood until the class count stops growing.
int refine(const MolecularGraph& mol, std::vector<int>& ranks, int classes) {
  const int n = static_cast<int>(mol.size());
  std::vector<std::pair<int, std::vector<int>>> keys(static_cast<std::size_t>(n));
  while (true) {
    for (int a = 0; a < n; ++a) {
      auto& key = keys[a];
      key.first = ranks[a];
      key.second.clear();
      for (const auto& nb : mol.neighbors(a)) {
        key.second.push_back(ranks[nb.atom] * 8 + static_cast<int>(mol.bond(nb.bond).order));
      }
      std::sort(key.second.begin(), key.second.end());
    }
    std::vector<int> next;
    const int next_classes = dense_ranks(keys, next);
    ranks.swap(next);
    if (next_classes == classes) return classes;
    classes = next_classes;
  }
}

}  // namespace

std::vector<int> canonical_ranks(const MolecularGraph& mol) {
  const int n = static_cast<int>(mol.size());
  std::vector<AtomKey> initial;
  initial.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const Atom& atom = mol.atom(a);
    // Isotope and verbatim bracket text only separate atoms that the basic
    // invariant would merge, so canonical text stays stable.
    initial.emplace_back(atom.element, atom.formal_charge, mol.degree(a), atom.aromatic ? 1 : 0,
                         mol.atom_in_ring(a) ? 1 : 0, mol.total_h(a), atom.isotope.value_or(-1),
                         atom.bracket_raw.has_value(), atom.bracket_raw.value_or(""));
  }
  std::vector<int> ranks;
  int classes = dense_ranks(initial, ranks);
  classes = refine(mol, ranks, classes);
  while (classes < n) {
    // Lowest rank shared by more than one atom.
    std::vector<int> count(static_cast<std::size_t>(classes), 0);
    for (int r : ranks) ++count[r];
    int tied = 0;
    while (count[tied] < 2) ++tied;
    int chosen = -1;
    for (int a = 0; a < n; ++a) {
      if (ranks[a] == tied) {
        chosen = a;
        break;
      }
    }
    std::vector<std::pair<int, int>> split(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) split[a] = {ranks[a], (ranks[a] == tied && a != chosen) ? 1 : 0};
    classes = dense_ranks(split, ranks);
    classes = refine(mol, ranks, classes);
  }
  return ranks;
}

}  // namespace safe
