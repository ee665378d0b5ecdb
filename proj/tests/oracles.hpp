#pragma once

// Slow reference implementations used only by tests. None of them calls the
// library's own matcher, canonicaliser, ring finder or community code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "safe/fragmenter.hpp"
#include "safe/molecule.hpp"

namespace oracle {

using safe::MolecularGraph;

inline bool same_atom(const safe::Atom& x, const safe::Atom& y) {
  return x.element == y.element && x.aromatic == y.aromatic && x.formal_charge == y.formal_charge &&
         x.isotope == y.isotope;
}

inline int bond_order_between(const MolecularGraph& g, int a, int b) {
  for (const auto& nb : g.neighbors(a)) {
    if (nb.atom == b) return static_cast<int>(g.bond(nb.bond).order);
  }
  return 0;
}

// Plain backtracking over atom bijections, pruned only by atom labels,
// degree and hydrogen count.
inline bool isomorphic(const MolecularGraph& g, const MolecularGraph& h) {
  const int n = static_cast<int>(g.size());
  if (n != static_cast<int>(h.size()) || g.bonds().size() != h.bonds().size()) return false;
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::function<bool(int)> go = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || !same_atom(g.atom(i), h.atom(j)) || g.degree(i) != h.degree(j) ||
          g.total_h(i) != h.total_h(j)) {
        continue;
      }
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) {
        ok = bond_order_between(g, i, k) == bond_order_between(h, j, map[k]);
      }
      if (!ok) continue;
      map[i] = j;
      used[j] = true;
      if (go(i + 1)) return true;
      used[j] = false;
      map[i] = -1;
    }
    return false;
  };
  return go(0);
}

// Every injective map pattern -> target (wildcard pattern atoms match any
// atom), checked by enumerating all ordered target tuples.
inline std::set<std::vector<int>> all_matches(const MolecularGraph& p, const MolecularGraph& t) {
  std::set<std::vector<int>> out;
  const int np = static_cast<int>(p.size());
  const int nt = static_cast<int>(t.size());
  std::vector<int> image(static_cast<std::size_t>(np));
  std::vector<bool> used(static_cast<std::size_t>(nt), false);
  std::function<void(int)> go = [&](int i) {
    if (i == np) {
      for (const auto& b : p.bonds()) {
        if (bond_order_between(t, image[b.a], image[b.b]) != static_cast<int>(b.order)) return;
      }
      for (int a = 0; a < np; ++a) {
        const auto& x = p.atom(a);
        const auto& y = t.atom(image[a]);
        if (x.is_wildcard()) continue;
        if (x.element != y.element || x.aromatic != y.aromatic || x.formal_charge != y.formal_charge) return;
      }
      out.insert(image);
      return;
    }
    for (int j = 0; j < nt; ++j) {
      if (used[j]) continue;
      used[j] = true;
      image[i] = j;
      go(i + 1);
      used[j] = false;
    }
  };
  go(0);
  return out;
}

// Every simple cycle as a sorted bond list.
inline std::set<std::vector<int>> simple_cycles(const MolecularGraph& g) {
  std::set<std::vector<int>> cycles;
  const int n = static_cast<int>(g.size());
  for (int s = 0; s < n; ++s) {
    std::vector<bool> on_path(static_cast<std::size_t>(n), false);
    std::vector<int> bonds;
    std::function<void(int)> dfs = [&](int u) {
      for (const auto& nb : g.neighbors(u)) {
        if (nb.atom == s && bonds.size() >= 2 && nb.bond != bonds.front()) {
          std::vector<int> c = bonds;
          c.push_back(nb.bond);
          std::sort(c.begin(), c.end());
          cycles.insert(c);
        } else if (nb.atom > s && !on_path[nb.atom]) {
          on_path[nb.atom] = true;
          bonds.push_back(nb.bond);
          dfs(nb.atom);
          bonds.pop_back();
          on_path[nb.atom] = false;
        }
      }
    };
    on_path[s] = true;
    dfs(s);
  }
  return cycles;
}

// Sizes of a minimum cycle basis: shortest cycles first, kept when
// independent over GF(2) (Gaussian elimination on bond incidence rows).
inline std::vector<int> minimum_cycle_basis_sizes(const MolecularGraph& g) {
  auto cycles = simple_cycles(g);
  std::vector<std::vector<int>> sorted(cycles.begin(), cycles.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  const std::size_t m = g.bonds().size();
  std::vector<std::vector<bool>> rows;
  std::vector<int> sizes;
  for (const auto& c : sorted) {
    std::vector<bool> v(m, false);
    for (int b : c) v[b] = true;
    for (const auto& r : rows) {
      const std::size_t lead = static_cast<std::size_t>(std::find(r.begin(), r.end(), true) - r.begin());
      if (v[lead]) {
        for (std::size_t k = 0; k < m; ++k) v[k] = v[k] != r[k];
      }
    }
    if (std::find(v.begin(), v.end(), true) == v.end()) continue;
    // Keep rows in echelon form ordered by leading position.
    const std::size_t lead = static_cast<std::size_t>(std::find(v.begin(), v.end(), true) - v.begin());
    for (auto& r : rows) {
      if (r[lead]) {
        for (std::size_t k = 0; k < m; ++k) r[k] = r[k] != v[k];
      }
    }
    rows.push_back(v);
    sizes.push_back(static_cast<int>(c.size()));
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// Modularity from the pairwise definition
// Q = 1/2m * sum_ij [A_ij - gamma k_i k_j / 2m] delta(c_i, c_j).
inline double pairwise_modularity(const safe::CommunityGraph& g, const std::vector<int>& comm,
                                  double gamma = 1.0) {
  const int n = g.node_count;
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (const auto& e : g.edges) {
    a[e.u][e.v] += e.weight;
    a[e.v][e.u] += e.weight;
  }
  std::vector<double> k(static_cast<std::size_t>(n), 0.0);
  double two_m = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (comm[i] == comm[j]) q += a[i][j] - gamma * k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

// Best modularity over every set partition (restricted growth strings).
inline double best_modularity(const safe::CommunityGraph& g) {
  const int n = g.node_count;
  if (n == 0) return 0.0;
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges) {
    k[e.u] += 1;
    k[e.v] += 1;
  }
  const double two_m = 2.0 * static_cast<double>(g.edges.size());
  if (two_m == 0.0) return 0.0;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  double best = -1.0;
  std::vector<double> deg(static_cast<std::size_t>(n));
  std::function<void(int, int)> go = [&](int i, int max_label) {
    if (i == n) {
      double internal = 0.0;
      for (const auto& e : g.edges) {
        if (rgs[e.u] == rgs[e.v]) internal += e.weight;
      }
      std::fill(deg.begin(), deg.end(), 0.0);
      for (int v = 0; v < n; ++v) deg[rgs[v]] += k[v];
      double q = 2.0 * internal / two_m;
      for (int c = 0; c <= max_label; ++c) q -= (deg[c] / two_m) * (deg[c] / two_m);
      best = std::max(best, q);
      return;
    }
    for (int c = 0; c <= max_label + 1; ++c) {
      rgs[i] = c;
      go(i + 1, std::max(max_label, c));
    }
  };
  rgs[0] = 0;
  go(1, 0);
  return best;
}

// Unweighted simple graph on up to 8 nodes as an adjacency bit mask over
// the 28 node pairs.
struct SmallGraph {
  int n;
  std::uint32_t mask;
};

inline int pair_bit(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

inline bool has_edge(std::uint32_t mask, int i, int j) { return (mask >> pair_bit(i, j)) & 1U; }

// Smallest mask over relabelings that keep nodes sorted by degree; only
// permutations inside equal-degree classes are tried.
inline std::uint32_t canonical_mask(int n, std::uint32_t mask) {
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && has_edge(mask, i, j)) ++degree[i];
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return degree[a] < degree[b]; });
  std::vector<std::pair<int, int>> classes;  // [start, end) in order
  for (int s = 0; s < n;) {
    int e = s;
    while (e < n && degree[order[e]] == degree[order[s]]) ++e;
    classes.emplace_back(s, e);
    s = e;
  }
  std::uint32_t best = UINT32_MAX;
  std::function<void(std::size_t)> go = [&](std::size_t c) {
    if (c == classes.size()) {
      std::uint32_t m = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (has_edge(mask, order[i], order[j])) m |= 1U << pair_bit(i, j);
        }
      }
      best = std::min(best, m);
      return;
    }
    auto first = order.begin() + classes[c].first;
    auto last = order.begin() + classes[c].second;
    std::sort(first, last);
    do {
      go(c + 1);
    } while (std::next_permutation(first, last));
  };
  go(0);
  return best;
}

// All connected graphs with exactly n nodes, one per isomorphism class.
// Built by attaching a new node to every non-empty subset of the nodes of
// each smaller connected graph.
inline std::vector<std::vector<SmallGraph>> connected_graphs_up_to(int max_n) {
  std::vector<std::vector<SmallGraph>> by_size(static_cast<std::size_t>(max_n + 1));
  if (max_n >= 1) by_size[1].push_back({1, 0});
  for (int n = 2; n <= max_n; ++n) {
    std::set<std::uint32_t> seen;
    for (const auto& g : by_size[n - 1]) {
      for (std::uint32_t subset = 1; subset < (1U << (n - 1)); ++subset) {
        std::uint32_t mask = g.mask;
        for (int i = 0; i < n - 1; ++i) {
          if ((subset >> i) & 1U) mask |= 1U << pair_bit(i, n - 1);
        }
        const std::uint32_t c = canonical_mask(n, mask);
        if (seen.insert(c).second) by_size[n].push_back({n, c});
      }
    }
  }
  return by_size;
}

inline safe::CommunityGraph to_community_graph(const SmallGraph& g) {
  safe::CommunityGraph cg;
  cg.node_count = g.n;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if (has_edge(g.mask, i, j)) cg.edges.push_back({i, j, 1.0});
    }
  }
  return cg;
}

}  // namespace oracle
