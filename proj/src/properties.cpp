#include "safe/properties.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>

namespace safe {

double molecular_weight(const MolecularGraph& mol) {
  const double h_mass = element_info(kHydrogen).mass;
  double total = 0.0;
  for (int a = 0; a < static_cast<int>(mol.size()); ++a) {
    total += element_info(mol.atom(a).element).mass;
    total += h_mass * mol.total_h(a);
  }
  return total;
}

int cycle_rank(const MolecularGraph& mol) {
  return static_cast<int>(mol.bonds().size()) - static_cast<int>(mol.size()) +
         static_cast<int>(mol.components().size());
}

namespace {

using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  EdgeSet edges;
  int length;
  std::vector<int> bond_list;
};

struct BfsTree {
  std::vector<int> dist;
  std::vector<int> parent_bond;
};

BfsTree bfs(const MolecularGraph& mol, int source) {
  BfsTree t{std::vector<int>(mol.size(), -1), std::vector<int>(mol.size(), -1)};
  std::queue<int> q;
  t.dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (const auto& nb : mol.neighbors(u)) {
      if (t.dist[nb.atom] < 0) {
        t.dist[nb.atom] = t.dist[u] + 1;
        t.parent_bond[nb.atom] = nb.bond;
        q.push(nb.atom);
      }
    }
  }
  return t;
}

// Bonds on the tree path from `atom` back to the BFS source.
std::vector<int> path_bonds(const MolecularGraph& mol, const BfsTree& t, int atom) {
  std::vector<int> out;
  while (t.parent_bond[atom] >= 0) {
    const int b = t.parent_bond[atom];
    out.push_back(b);
    atom = mol.bond(b).other(atom);
  }
  return out;
}

}  // namespace

RingInfo ring_info(const MolecularGraph& mol) {
  RingInfo info;
  const int rank = cycle_rank(mol);
  if (rank == 0) return info;

  const std::size_t words = (mol.bonds().size() + 63) / 64;
  std::vector<Candidate> candidates;
  std::set<EdgeSet> seen;
  for (int v = 0; v < static_cast<int>(mol.size()); ++v) {
    if (!mol.atom_in_ring(v)) continue;
    const BfsTree tree = bfs(mol, v);
    for (int b = 0; b < static_cast<int>(mol.bonds().size()); ++b) {
      const Bond& bond = mol.bond(b);
      if (!bond.in_ring || tree.dist[bond.a] < 0) continue;
      if (tree.parent_bond[bond.a] == b || tree.parent_bond[bond.b] == b) continue;
      auto pa = path_bonds(mol, tree, bond.a);
      auto pb = path_bonds(mol, tree, bond.b);
      // Paths must meet only at v.
      std::set<int> atoms_a;
      for (int x = bond.a; tree.parent_bond[x] >= 0; x = mol.bond(tree.parent_bond[x]).other(x)) {
        atoms_a.insert(x);
      }
      bool disjoint = true;
      for (int x = bond.b; tree.parent_bond[x] >= 0; x = mol.bond(tree.parent_bond[x]).other(x)) {
        if (atoms_a.count(x)) {
          disjoint = false;
          break;
        }
      }
      if (!disjoint) continue;
      Candidate c{EdgeSet(words, 0), 0, {}};
      c.bond_list = pa;
      c.bond_list.insert(c.bond_list.end(), pb.begin(), pb.end());
      c.bond_list.push_back(b);
      for (int e : c.bond_list) c.edges[e / 64] |= std::uint64_t{1} << (e % 64);
      c.length = static_cast<int>(c.bond_list.size());
      if (seen.insert(c.edges).second) candidates.push_back(std::move(c));
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.length < y.length; });

  // Greedy minimum cycle basis via incremental Gaussian elimination.
  std::vector<EdgeSet> basis;
  std::vector<std::size_t> pivots;
  for (const auto& c : candidates) {
    EdgeSet v = c.edges;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const std::size_t p = pivots[k];
      if ((v[p / 64] >> (p % 64)) & 1U) {
        for (std::size_t w = 0; w < words; ++w) v[w] ^= basis[k][w];
      }
    }
    std::size_t pivot = words * 64;
    for (std::size_t w = 0; w < words && pivot == words * 64; ++w) {
      if (v[w]) pivot = w * 64 + static_cast<std::size_t>(__builtin_ctzll(v[w]));
    }
    if (pivot == words * 64) continue;
    // Keep the basis reduced on the new pivot.
    for (auto& row : basis) {
      if ((row[pivot / 64] >> (pivot % 64)) & 1U) {
        for (std::size_t w = 0; w < words; ++w) row[w] ^= v[w];
      }
    }
    basis.push_back(v);
    pivots.push_back(pivot);
    std::vector<int> ring = c.bond_list;
    std::sort(ring.begin(), ring.end());
    info.rings.push_back(std::move(ring));
    info.ring_sizes.push_back(c.length);
    if (static_cast<int>(basis.size()) == rank) break;
  }
  std::sort(info.ring_sizes.begin(), info.ring_sizes.end());
  info.max_ring_size = info.ring_sizes.empty() ? 0 : info.ring_sizes.back();
  return info;
}

}  // namespace safe
