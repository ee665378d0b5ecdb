#include "safe/fragmenter.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "safe/canon.hpp"
#include "safe/error.hpp"
#include "safe/match.hpp"
#include "safe/smiles.hpp"

namespace safe {

SidePattern SidePattern::from_smiles(std::string_view text) {
  const MolecularGraph full = parse_smiles(text);
  if (full.size() < 2 || !full.atom(0).is_wildcard() || full.degree(0) != 1) {
    throw SafeError(ErrorCode::kInvalidArgument,
                    "rule pattern must start with '*' bonded to exactly one marked atom: " +
                        std::string(text));
  }
  if (full.components().size() != 1) {
    throw SafeError(ErrorCode::kInvalidArgument, "rule pattern must be connected");
  }
  const Neighbor marker = full.neighbors(0)[0];
  std::vector<int> rest(full.size() - 1);
  std::iota(rest.begin(), rest.end(), 1);
  SidePattern side;
  side.graph = full.subgraph(rest);
  side.marked = marker.atom - 1;
  side.cut_order = full.bond(marker.bond).order;
  side.source = std::string(text);
  return side;
}

namespace {

BondCutRule make_rule(std::string name, std::string_view left, std::string_view right,
                      SideConstraint lc = {}, SideConstraint rc = {}) {
  return BondCutRule{std::move(name), SidePattern::from_smiles(left), SidePattern::from_smiles(right),
                     std::move(lc), std::move(rc)};
}

// Atoms reachable from `start` without crossing `bond`.
std::vector<bool> side_mask(const MolecularGraph& mol, int start, int bond) {
  std::vector<bool> mask(mol.size(), false);
  std::vector<int> stack{start};
  mask[start] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& nb : mol.neighbors(u)) {
      if (nb.bond == bond || mask[nb.atom]) continue;
      mask[nb.atom] = true;
      stack.push_back(nb.atom);
    }
  }
  return mask;
}

bool side_matches(const MolecularGraph& mol, const SidePattern& pattern, int atom,
                  const std::vector<bool>& mask) {
  MatchOptions opt;
  opt.anchors = {{pattern.marked, atom}};
  opt.target_mask = mask;
  return has_substructure(pattern.graph, mol, opt);
}

bool constraint_ok(const MolecularGraph& mol, const SideConstraint& c, int atom,
                   const std::vector<bool>& mask) {
  if (c.ring == RingState::kRing && !mol.atom_in_ring(atom)) return false;
  if (c.ring == RingState::kChain && mol.atom_in_ring(atom)) return false;
  if (c.min_heavy_atoms > 0) {
    int heavy = 0;
    for (int a = 0; a < static_cast<int>(mol.size()); ++a) {
      if (mask[a] && mol.atom(a).is_heavy()) ++heavy;
    }
    if (heavy < c.min_heavy_atoms) return false;
  }
  for (const auto& f : c.forbidden) {
    if (side_matches(mol, f, atom, mask)) return false;
  }
  return true;
}

}  // namespace

const std::vector<BondCutRule>& default_rules() {
  static const std::vector<BondCutRule> rules = [] {
    std::vector<BondCutRule> r;
    r.push_back(make_rule("R1_ring_chain", "**", "**", {RingState::kRing, 0, {}},
                          {RingState::kChain, 0, {}}));
    r.push_back(make_rule("R2_amide", "*C=O", "*N"));
    const std::vector<SidePattern> carbonyl{SidePattern::from_smiles("*C=O"),
                                            SidePattern::from_smiles("*c=O")};
    for (const char* hetero : {"*N", "*O"}) {
      for (const char* carbon : {"*C", "*c"}) {
        std::string name = std::string("R3_") + (hetero[1] == 'N' ? "N" : "O") + "_" + carbon[1];
        r.push_back(make_rule(name, hetero, carbon, {RingState::kAny, 2, {}},
                              {RingState::kAny, 2, carbonyl}));
      }
    }
    r.push_back(make_rule("R4_ring_ring", "**", "**", {RingState::kRing, 0, {}},
                          {RingState::kRing, 0, {}}));
    return r;
  }();
  return rules;
}

std::vector<BondCutRule> parse_rules(std::string_view text) {
  std::vector<BondCutRule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) {
      throw SafeError(ErrorCode::kInvalidArgument,
                      "rule line " + std::to_string(line_no) + " needs 3 tab-separated fields");
    }
    rules.push_back(make_rule(fields[0], fields[1], fields[2]));
  }
  return rules;
}

std::vector<BondCutRule> load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SafeError(ErrorCode::kIoError, "cannot open rule file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_rules(buffer.str());
}

std::vector<int> detect_cut_bonds(const MolecularGraph& mol, const std::vector<BondCutRule>& rules) {
  std::vector<int> cuts;
  for (int b = 0; b < static_cast<int>(mol.bonds().size()); ++b) {
    const Bond& bond = mol.bond(b);
    if (bond.order != BondOrder::kSingle || bond.in_ring) continue;
    if (!mol.atom(bond.a).is_heavy() || !mol.atom(bond.b).is_heavy()) continue;
    const auto mask_a = side_mask(mol, bond.a, b);
    const auto mask_b = side_mask(mol, bond.b, b);
    bool matched = false;
    for (const auto& rule : rules) {
      if (rule.left.cut_order != BondOrder::kSingle || rule.right.cut_order != BondOrder::kSingle) {
        continue;
      }
      for (int flip = 0; flip < 2 && !matched; ++flip) {
        const int u = flip ? bond.b : bond.a;
        const int v = flip ? bond.a : bond.b;
        const auto& mu = flip ? mask_b : mask_a;
        const auto& mv = flip ? mask_a : mask_b;
        matched = constraint_ok(mol, rule.left_constraint, u, mu) &&
                  constraint_ok(mol, rule.right_constraint, v, mv) &&
                  side_matches(mol, rule.left, u, mu) && side_matches(mol, rule.right, v, mv);
      }
      if (matched) break;
    }
    if (matched) cuts.push_back(b);
  }
  return cuts;
}

std::vector<Fragment> fragment_molecule(const MolecularGraph& mol, std::vector<int> cut_bonds) {
  std::sort(cut_bonds.begin(), cut_bonds.end());
  cut_bonds.erase(std::unique(cut_bonds.begin(), cut_bonds.end()), cut_bonds.end());
  std::vector<bool> is_cut(mol.bonds().size(), false);
  for (int b : cut_bonds) {
    if (b < 0 || b >= static_cast<int>(mol.bonds().size())) {
      throw SafeError(ErrorCode::kInvalidArgument, "cut bond index out of range");
    }
    if (mol.bond(b).in_ring) {
      throw SafeError(ErrorCode::kRingBondCut, "bond " + std::to_string(b) + " lies in a ring");
    }
    is_cut[b] = true;
  }

  std::vector<int> frag_of(mol.size(), -1);
  std::vector<std::vector<int>> members;
  for (int s = 0; s < static_cast<int>(mol.size()); ++s) {
    if (frag_of[s] >= 0) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    std::vector<int> stack{s};
    frag_of[s] = id;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      members[id].push_back(u);
      for (const auto& nb : mol.neighbors(u)) {
        if (is_cut[nb.bond] || frag_of[nb.atom] >= 0) continue;
        frag_of[nb.atom] = id;
        stack.push_back(nb.atom);
      }
    }
    std::sort(members[id].begin(), members[id].end());
  }

  std::vector<int> local(mol.size(), -1);
  std::vector<Fragment> fragments;
  fragments.reserve(members.size());
  for (const auto& atoms : members) {
    Fragment f;
    f.graph = mol.subgraph(atoms);
    f.atom_map = atoms;
    f.heavy_atom_count = f.graph.heavy_atom_count();
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i) local[atoms[i]] = i;
    fragments.push_back(std::move(f));
  }
  for (std::size_t k = 0; k < cut_bonds.size(); ++k) {
    const Bond& bond = mol.bond(cut_bonds[k]);
    const int label = static_cast<int>(k) + 1;
    for (int end : {bond.a, bond.b}) {
      fragments[frag_of[end]].attachments.push_back({local[end], label, bond.order});
    }
  }
  return fragments;
}

MolecularGraph reassemble(const std::vector<Fragment>& fragments) {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::map<int, std::vector<std::pair<int, BondOrder>>> ends;
  for (const auto& f : fragments) {
    const int offset = static_cast<int>(atoms.size());
    atoms.insert(atoms.end(), f.graph.atoms().begin(), f.graph.atoms().end());
    for (Bond b : f.graph.bonds()) {
      b.a += offset;
      b.b += offset;
      bonds.push_back(b);
    }
    for (const auto& ap : f.attachments) {
      ends[ap.label].emplace_back(ap.fragment_atom + offset, ap.cut_bond_order);
    }
  }
  for (const auto& [label, pair] : ends) {
    if (pair.size() != 2) {
      throw SafeError(ErrorCode::kOpenAttachment,
                      "attachment label " + std::to_string(label) + " is not paired");
    }
    Bond b;
    b.a = pair[0].first;
    b.b = pair[1].first;
    b.order = pair[0].second;
    bonds.push_back(b);
  }
  return MolecularGraph(std::move(atoms), std::move(bonds));
}

int Partition::community_count() const {
  if (community_of.empty()) return 0;
  return *std::max_element(community_of.begin(), community_of.end()) + 1;
}

double modularity(const CommunityGraph& graph, const std::vector<int>& community_of,
                  double resolution) {
  double two_m = 0.0;
  for (const auto& e : graph.edges) two_m += 2.0 * e.weight;
  if (two_m == 0.0) return 0.0;
  const int k = community_of.empty() ? 0 : *std::max_element(community_of.begin(), community_of.end()) + 1;
  std::vector<double> internal(static_cast<std::size_t>(k), 0.0);
  std::vector<double> degree(static_cast<std::size_t>(k), 0.0);
  for (const auto& e : graph.edges) {
    const int cu = community_of[e.u];
    const int cv = community_of[e.v];
    degree[cu] += e.weight;
    degree[cv] += e.weight;
    if (cu == cv) internal[cu] += 2.0 * e.weight;
  }
  double q = 0.0;
  for (int c = 0; c < k; ++c) {
    q += internal[c] / two_m - resolution * (degree[c] / two_m) * (degree[c] / two_m);
  }
  return q;
}

namespace {

// Level graph in full-matrix form: adj holds A_ij for i != j, self_loop A_ii.
struct Level {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> degree;
};

// Moves nodes greedily; returns true when any node changed community.
bool local_moving(const Level& g, const std::vector<int>& order, double two_m, double resolution,
                  std::vector<int>& comm) {
  const int n = static_cast<int>(g.adj.size());
  std::vector<double> tot(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];
  std::vector<double> w_to(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  bool any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int i : order) {
      const int ci = comm[i];
      touched.clear();
      for (const auto& [j, w] : g.adj[i]) {
        const int cj = comm[j];
        if (w_to[cj] == 0.0) touched.push_back(cj);
        w_to[cj] += w;
      }
      tot[ci] -= g.degree[i];
      const double ki = g.degree[i];
      int best = ci;
      double best_gain = w_to[ci] - resolution * tot[ci] * ki / two_m;
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        const double gain = w_to[c] - resolution * tot[c] * ki / two_m;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += ki;
      comm[i] = best;
      for (int c : touched) w_to[c] = 0.0;
      w_to[ci] = 0.0;
      if (best != ci) {
        moved = true;
        any = true;
      }
    }
  }
  return any;
}

}  // namespace

namespace {

std::vector<int> louvain_pass(const CommunityGraph& graph, const std::vector<int>& visit_order,
                              double resolution) {
  const int n = graph.node_count;
  Level level;
  level.adj.assign(static_cast<std::size_t>(n), {});
  level.self_loop.assign(static_cast<std::size_t>(n), 0.0);
  level.degree.assign(static_cast<std::size_t>(n), 0.0);
  double two_m = 0.0;
  for (const auto& e : graph.edges) {
    if (e.u == e.v) {
      level.self_loop[e.u] += 2.0 * e.weight;
      level.degree[e.u] += 2.0 * e.weight;
    } else {
      level.adj[e.u].emplace_back(e.v, e.weight);
      level.adj[e.v].emplace_back(e.u, e.weight);
      level.degree[e.u] += e.weight;
      level.degree[e.v] += e.weight;
    }
    two_m += 2.0 * e.weight;
  }

  std::vector<int> membership(static_cast<std::size_t>(n));
  std::iota(membership.begin(), membership.end(), 0);
  std::vector<int> order = visit_order;

  if (two_m > 0.0) {
    while (true) {
      const int ln = static_cast<int>(level.adj.size());
      std::vector<int> comm(static_cast<std::size_t>(ln));
      std::iota(comm.begin(), comm.end(), 0);
      if (!local_moving(level, order, two_m, resolution, comm)) break;

      // Renumber by first appearance in visit order.
      std::vector<int> renum(static_cast<std::size_t>(ln), -1);
      int k = 0;
      for (int i : order) {
        if (renum[comm[i]] < 0) renum[comm[i]] = k++;
      }
      for (int& c : comm) c = renum[c];
      for (int& m : membership) m = comm[m];
      if (k == ln) break;

      Level next;
      next.adj.assign(static_cast<std::size_t>(k), {});
      next.self_loop.assign(static_cast<std::size_t>(k), 0.0);
      next.degree.assign(static_cast<std::size_t>(k), 0.0);
      std::vector<std::map<int, double>> acc(static_cast<std::size_t>(k));
      for (int i = 0; i < ln; ++i) {
        next.self_loop[comm[i]] += level.self_loop[i];
        next.degree[comm[i]] += level.degree[i];
        for (const auto& [j, w] : level.adj[i]) {
          if (comm[i] == comm[j]) {
            next.self_loop[comm[i]] += w;
          } else {
            acc[comm[i]][comm[j]] += w;
          }
        }
      }
      for (int c = 0; c < k; ++c) {
        for (const auto& [d, w] : acc[c]) next.adj[c].emplace_back(d, w);
      }
      level = std::move(next);
      order.resize(static_cast<std::size_t>(k));
      std::iota(order.begin(), order.end(), 0);
    }
  }

  return membership;
}

// Contiguous ids by first appearance over node index.
std::vector<int> relabel(const std::vector<int>& membership) {
  std::map<int, int> renum;
  std::vector<int> out(membership.size());
  for (std::size_t i = 0; i < membership.size(); ++i) {
    const auto it = renum.emplace(membership[i], static_cast<int>(renum.size())).first;
    out[i] = it->second;
  }
  return out;
}

// Partition of the original graph with per-community degree totals, so a
// single-node move is scored in O(degree).
class Refiner {
 public:
  Refiner(const CommunityGraph& graph, double resolution)
      : n_(graph.node_count), gamma_(resolution), adj_(static_cast<std::size_t>(n_)),
        k_(static_cast<std::size_t>(n_), 0.0) {
    for (const auto& e : graph.edges) {
      k_[e.u] += e.weight;
      k_[e.v] += e.weight;
      m_ += e.weight;
      if (e.u == e.v) continue;
      adj_[e.u].emplace_back(e.v, e.weight);
      adj_[e.v].emplace_back(e.u, e.weight);
    }
  }

  void run(std::vector<int>& comm) {
    if (n_ == 0 || m_ == 0.0) return;
    load(comm);
    while (true) {
      local_moves();
      if (best_merge()) continue;
      if (kl_sweep()) continue;
      if (perturb()) continue;
      break;
    }
    comm = relabel(comm_);
  }

 private:
  void load(const std::vector<int>& comm) {
    comm_ = relabel(comm);
    tot_.assign(2 * static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) tot_[comm_[i]] += k_[i];
  }

  // Community ids in [0, 2n); returns one with no members.
  int free_id() const {
    for (int c = 0;; ++c) {
      if (tot_[c] == 0.0 && std::find(comm_.begin(), comm_.end(), c) == comm_.end()) return c;
    }
  }

  // Gain in modularity (times m) of moving i into community c.
  double move_gain(int i, int c) {
    const int own = comm_[i];
    double w_own = 0.0;
    double w_c = 0.0;
    for (const auto& [j, w] : adj_[i]) {
      if (comm_[j] == own) w_own += w;
      if (comm_[j] == c) w_c += w;
    }
    const double ki = k_[i];
    return (w_c - gamma_ * ki * tot_[c] / (2.0 * m_)) - (w_own - gamma_ * ki * (tot_[own] - ki) / (2.0 * m_));
  }

  void apply(int i, int c) {
    tot_[comm_[i]] -= k_[i];
    tot_[c] += k_[i];
    comm_[i] = c;
  }

  // Best target for i among neighbouring communities and a fresh one.
  std::pair<int, double> best_target(int i) {
    std::set<int> targets;
    for (const auto& nb : adj_[i]) targets.insert(comm_[nb.first]);
    targets.insert(free_id());
    targets.erase(comm_[i]);
    int best = -1;
    double best_gain = 0.0;
    for (int c : targets) {
      const double g = move_gain(i, c);
      if (best < 0 || g > best_gain + 1e-12) {
        best = c;
        best_gain = g;
      }
    }
    return {best, best_gain};
  }

  void local_moves() {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int i = 0; i < n_; ++i) {
        const auto [c, gain] = best_target(i);
        if (c >= 0 && gain > 1e-12) {
          apply(i, c);
          moved = true;
        }
      }
    }
  }

  bool best_merge() {
    std::map<std::pair<int, int>, double> between;
    for (int i = 0; i < n_; ++i) {
      for (const auto& [j, w] : adj_[i]) {
        if (comm_[i] < comm_[j]) between[{comm_[i], comm_[j]}] += w;
      }
    }
    std::pair<int, int> pick{-1, -1};
    double best_gain = 1e-12;
    for (const auto& [ab, w] : between) {
      const double gain = w - gamma_ * tot_[ab.first] * tot_[ab.second] / (2.0 * m_);
      if (gain > best_gain) {
        best_gain = gain;
        pick = ab;
      }
    }
    if (pick.first < 0) return false;
    for (int i = 0; i < n_; ++i) {
      if (comm_[i] == pick.second) apply(i, pick.first);
    }
    return true;
  }

  // Every node is moved once, each time taking the best available move even
  // when it lowers modularity; the best partition seen is kept if it beats
  // the start.
  bool kl_sweep() {
    const std::vector<int> start = comm_;
    std::vector<int> best = comm_;
    double delta = 0.0;
    double best_delta = 0.0;
    std::vector<bool> locked(static_cast<std::size_t>(n_), false);
    for (int step = 0; step < n_; ++step) {
      int node = -1;
      int target = -1;
      double gain = 0.0;
      for (int i = 0; i < n_; ++i) {
        if (locked[i]) continue;
        const auto [c, g] = best_target(i);
        if (c >= 0 && (node < 0 || g > gain + 1e-12)) {
          node = i;
          target = c;
          gain = g;
        }
      }
      if (node < 0) break;
      apply(node, target);
      locked[node] = true;
      delta += gain;
      if (delta > best_delta + 1e-12) {
        best_delta = delta;
        best = comm_;
      }
    }
    load(best_delta > 1e-12 ? best : start);
    return best_delta > 1e-12;
  }

  double score() const {
    double q = 0.0;
    for (int i = 0; i < n_; ++i) {
      for (const auto& [j, w] : adj_[i]) {
        if (comm_[i] == comm_[j]) q += w;
      }
    }
    q /= 2.0 * m_;
    for (double t : tot_) q -= gamma_ * (t / (2.0 * m_)) * (t / (2.0 * m_));
    return q;
  }

  // Forced merge of two adjacent communities, or a node pulled out together
  // with all of its neighbours or with one of them, followed by local moves and KL sweeps; kept only
  // when the result beats the current partition.
  bool perturb() {
    const std::vector<int> start = comm_;
    const double start_q = score();
    std::set<std::pair<int, int>> pairs;
    for (int i = 0; i < n_; ++i) {
      for (const auto& nb : adj_[i]) {
        const int a = comm_[i];
        const int b = comm_[nb.first];
        if (a < b) pairs.insert({a, b});
      }
    }
    for (const auto& [a, b] : pairs) {
      load(start);
      for (int i = 0; i < n_; ++i) {
        if (comm_[i] == b) apply(i, a);
      }
      local_moves();
      while (kl_sweep()) local_moves();
      if (score() > start_q + 1e-12) return true;
    }
    for (int i = 0; i < n_; ++i) {
      for (int mode = 0; mode <= static_cast<int>(adj_[i].size()); ++mode) {
        load(start);
        apply(i, free_id());
        if (mode == 0) {
          for (const auto& nb : adj_[i]) apply(nb.first, comm_[i]);
        } else {
          apply(adj_[i][mode - 1].first, comm_[i]);
        }
        local_moves();
        while (kl_sweep()) local_moves();
        if (score() > start_q + 1e-12) return true;
      }
    }
    load(start);
    return false;
  }

  int n_;
  double gamma_;
  double m_ = 0.0;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<double> k_;
  std::vector<int> comm_;
  std::vector<double> tot_;
};

}  // namespace

Partition louvain(const CommunityGraph& graph, const std::vector<int>& visit_order,
                  double resolution) {
  if (resolution <= 0.0) throw SafeError(ErrorCode::kInvalidArgument, "resolution must be positive");
  const int n = graph.node_count;
  if (static_cast<int>(visit_order.size()) != n) {
    throw SafeError(ErrorCode::kInvalidArgument, "visit order must cover every node");
  }
  Partition p;
  p.community_of = relabel(louvain_pass(graph, visit_order, resolution));
  Refiner(graph, resolution).run(p.community_of);
  p.modularity = modularity(graph, p.community_of, resolution);
  return p;
}

Partition louvain_communities(const MolecularGraph& mol, double resolution) {
  if (mol.components().size() > 1) {
    throw SafeError(ErrorCode::kInvalidArgument, "louvain_communities needs a connected molecule");
  }
  std::vector<int> heavy;
  std::vector<int> local(mol.size(), -1);
  for (int a = 0; a < static_cast<int>(mol.size()); ++a) {
    if (mol.atom(a).is_heavy()) {
      local[a] = static_cast<int>(heavy.size());
      heavy.push_back(a);
    }
  }
  if (heavy.size() < 2) throw SafeError(ErrorCode::kTooSmall, "need at least 2 heavy atoms");

  CommunityGraph g;
  g.node_count = static_cast<int>(heavy.size());
  for (const auto& b : mol.bonds()) {
    if (local[b.a] >= 0 && local[b.b] >= 0) g.edges.push_back({local[b.a], local[b.b], 1.0});
  }
  const auto ranks = canonical_ranks(mol);
  std::vector<int> order(heavy.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return ranks[heavy[x]] < ranks[heavy[y]]; });
  const Partition heavy_part = louvain(g, order, resolution);

  Partition p;
  p.modularity = heavy_part.modularity;
  p.community_of.assign(mol.size(), -1);
  for (std::size_t i = 0; i < heavy.size(); ++i) p.community_of[heavy[i]] = heavy_part.community_of[i];
  for (int a = 0; a < static_cast<int>(mol.size()); ++a) {
    if (p.community_of[a] >= 0) continue;
    for (const auto& nb : mol.neighbors(a)) {
      if (local[nb.atom] >= 0) {
        p.community_of[a] = p.community_of[nb.atom];
        break;
      }
    }
    if (p.community_of[a] < 0) p.community_of[a] = 0;
  }
  return p;
}

std::vector<int> fallback_cut_bonds(const MolecularGraph& mol, double resolution) {
  std::vector<int> cuts;
  for (const auto& component : mol.components()) {
    int heavy = 0;
    for (int a : component) heavy += mol.atom(a).is_heavy() ? 1 : 0;
    if (heavy < 2) continue;
    const MolecularGraph sub = mol.subgraph(component);
    const Partition part = louvain_communities(sub, resolution);

    std::vector<int> parent(static_cast<std::size_t>(part.community_count()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& b : sub.bonds()) {
      const int ca = find(part.community_of[b.a]);
      const int cb = find(part.community_of[b.b]);
      if (ca == cb) continue;
      if (b.in_ring || b.order != BondOrder::kSingle || !sub.atom(b.a).is_heavy() ||
          !sub.atom(b.b).is_heavy()) {
        parent[std::max(ca, cb)] = std::min(ca, cb);
      }
    }
    for (const auto& b : sub.bonds()) {
      if (find(part.community_of[b.a]) != find(part.community_of[b.b])) {
        cuts.push_back(*mol.bond_between(component[b.a], component[b.b]));
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace safe
