#include "safe/molecule.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>

#include "safe/error.hpp"

namespace safe {
namespace {

constexpr std::array<int, 1> kValB{3};
constexpr std::array<int, 1> kValC{4};
constexpr std::array<int, 2> kValN{3, 5};
constexpr std::array<int, 1> kValO{2};
constexpr std::array<int, 2> kValP{3, 5};
constexpr std::array<int, 3> kValS{2, 4, 6};
constexpr std::array<int, 1> kValHalogen{1};
constexpr std::span<const int> kNone{};

// Standard atomic weights, conventional values rounded to 3 decimals.
const std::array<ElementInfo, 58> kElements{{
    {0, "*", 0.0, kNone, true},
    {1, "H", 1.008, kNone, false},
    {2, "He", 4.003, kNone, false},
    {3, "Li", 6.94, kNone, false},
    {4, "Be", 9.012, kNone, false},
    {5, "B", 10.81, kValB, true},
    {6, "C", 12.011, kValC, true},
    {7, "N", 14.007, kValN, true},
    {8, "O", 15.999, kValO, true},
    {9, "F", 18.998, kValHalogen, false},
    {10, "Ne", 20.180, kNone, false},
    {11, "Na", 22.990, kNone, false},
    {12, "Mg", 24.305, kNone, false},
    {13, "Al", 26.982, kNone, false},
    {14, "Si", 28.085, kNone, false},
    {15, "P", 30.974, kValP, true},
    {16, "S", 32.06, kValS, true},
    {17, "Cl", 35.45, kValHalogen, false},
    {18, "Ar", 39.948, kNone, false},
    {19, "K", 39.098, kNone, false},
    {20, "Ca", 40.078, kNone, false},
    {21, "Sc", 44.956, kNone, false},
    {22, "Ti", 47.867, kNone, false},
    {23, "V", 50.942, kNone, false},
    {24, "Cr", 51.996, kNone, false},
    {25, "Mn", 54.938, kNone, false},
    {26, "Fe", 55.845, kNone, false},
    {27, "Co", 58.933, kNone, false},
    {28, "Ni", 58.693, kNone, false},
    {29, "Cu", 63.546, kNone, false},
    {30, "Zn", 65.38, kNone, false},
    {31, "Ga", 69.723, kNone, false},
    {32, "Ge", 72.630, kNone, false},
    {33, "As", 74.922, kNone, true},
    {34, "Se", 78.971, kNone, true},
    {35, "Br", 79.904, kValHalogen, false},
    {36, "Kr", 83.798, kNone, false},
    {37, "Rb", 85.468, kNone, false},
    {38, "Sr", 87.62, kNone, false},
    {39, "Y", 88.906, kNone, false},
    {40, "Zr", 91.224, kNone, false},
    {41, "Nb", 92.906, kNone, false},
    {42, "Mo", 95.95, kNone, false},
    {43, "Tc", 98.0, kNone, false},
    {44, "Ru", 101.07, kNone, false},
    {45, "Rh", 102.906, kNone, false},
    {46, "Pd", 106.42, kNone, false},
    {47, "Ag", 107.868, kNone, false},
    {48, "Cd", 112.414, kNone, false},
    {49, "In", 114.818, kNone, false},
    {50, "Sn", 118.710, kNone, false},
    {51, "Sb", 121.760, kNone, false},
    {52, "Te", 127.60, kNone, true},
    {53, "I", 126.904, kValHalogen, false},
    {54, "Xe", 131.293, kNone, false},
    {55, "Cs", 132.905, kNone, false},
    {56, "Ba", 137.327, kNone, false},
    {57, "La", 138.905, kNone, false},
}};

struct HeavyElement {
  int z;
  std::string_view symbol;
  double mass;
};

// Heavier elements that show up in drug and reagent sets.
constexpr std::array<HeavyElement, 6> kHeavyElements{{
    {78, "Pt", 195.084},
    {79, "Au", 196.967},
    {80, "Hg", 200.592},
    {81, "Tl", 204.38},
    {82, "Pb", 207.2},
    {83, "Bi", 208.980},
}};

const std::array<ElementInfo, kHeavyElements.size()>& heavy_table() {
  static const auto table = [] {
    std::array<ElementInfo, kHeavyElements.size()> out{};
    for (std::size_t i = 0; i < kHeavyElements.size(); ++i) {
      out[i] = ElementInfo{kHeavyElements[i].z, kHeavyElements[i].symbol,
                           kHeavyElements[i].mass, kNone, false};
    }
    return out;
  }();
  return table;
}

}  // namespace

const ElementInfo& element_info(int atomic_number) {
  if (atomic_number >= 0 && atomic_number < static_cast<int>(kElements.size())) {
    return kElements[static_cast<std::size_t>(atomic_number)];
  }
  for (const auto& e : heavy_table()) {
    if (e.atomic_number == atomic_number) return e;
  }
  throw SafeError(ErrorCode::kUnknownElement,
                  "atomic number " + std::to_string(atomic_number));
}

std::optional<int> find_element(std::string_view symbol) {
  for (const auto& e : kElements) {
    if (e.symbol == symbol) return e.atomic_number;
  }
  for (const auto& e : heavy_table()) {
    if (e.symbol == symbol) return e.atomic_number;
  }
  return std::nullopt;
}

int bond_valence(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle: return 1;
    case BondOrder::kDouble: return 2;
    case BondOrder::kTriple: return 3;
    case BondOrder::kAromatic: return 1;
  }
  return 1;
}

std::string_view Atom::symbol() const { return element_info(element).symbol; }

int compute_implicit_h(const Atom& atom, int valence_sum) {
  if (atom.bracket_raw || atom.explicit_h || atom.is_wildcard()) return 0;
  const auto valences = element_info(atom.element).valences;
  if (valences.empty()) return 0;
  if (atom.aromatic) {
    // One valence unit goes to the pi system; only the first valence counts.
    return std::max(0, valences.front() - valence_sum - 1);
  }
  for (int v : valences) {
    if (v >= valence_sum) return v - valence_sum;
  }
  return 0;
}

bool valence_ok(const Atom& atom, int valence_sum) {
  if (atom.bracket_raw || atom.explicit_h || atom.is_wildcard() ||
      atom.formal_charge != 0) {
    return true;
  }
  const auto valences = element_info(atom.element).valences;
  if (valences.empty()) return true;
  return valence_sum <= valences.back();
}

MolecularGraph::MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  const int n = static_cast<int>(atoms_.size());
  for (const auto& atom : atoms_) {
    element_info(atom.element);  // throws on unknown
    if (atom.formal_charge < -4 || atom.formal_charge > 4) {
      throw SafeError(ErrorCode::kInvalidGraph, "formal charge out of range");
    }
    if (atom.aromatic && !element_info(atom.element).may_be_aromatic) {
      throw SafeError(ErrorCode::kInvalidGraph,
                      std::string("element cannot be aromatic: ") +
                          std::string(atom.symbol()));
    }
  }
  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (int i = 0; i < static_cast<int>(bonds_.size()); ++i) {
    Bond& b = bonds_[static_cast<std::size_t>(i)];
    if (b.a < 0 || b.b < 0 || b.a >= n || b.b >= n) {
      throw SafeError(ErrorCode::kInvalidGraph, "bond endpoint out of range");
    }
    if (b.a == b.b) {
      throw SafeError(ErrorCode::kInvalidGraph, "self bond");
    }
    if (b.order == BondOrder::kAromatic && !(atom(b.a).aromatic && atom(b.b).aromatic)) {
      throw SafeError(ErrorCode::kInvalidGraph, "aromatic bond between non-aromatic atoms");
    }
    for (const auto& nb : adjacency_[static_cast<std::size_t>(b.a)]) {
      if (nb.atom == b.b) {
        throw SafeError(ErrorCode::kInvalidGraph, "duplicate bond");
      }
    }
    b.in_ring = false;
    adjacency_[static_cast<std::size_t>(b.a)].push_back({b.b, i});
    adjacency_[static_cast<std::size_t>(b.b)].push_back({b.a, i});
  }

  // Connected components, in order of lowest atom index.
  component_of_.assign(static_cast<std::size_t>(n), -1);
  for (int s = 0; s < n; ++s) {
    if (component_of_[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(components_.size());
    std::vector<int> members;
    std::vector<int> stack{s};
    component_of_[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (const auto& nb : neighbors(u)) {
        if (component_of_[static_cast<std::size_t>(nb.atom)] < 0) {
          component_of_[static_cast<std::size_t>(nb.atom)] = id;
          stack.push_back(nb.atom);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components_.push_back(std::move(members));
  }

  // Ring bonds are exactly the non-bridges; iterative low-link DFS.
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  int timer = 0;
  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  for (int s = 0; s < n; ++s) {
    if (disc[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<Frame> stack{{s, -1, 0}};
    disc[static_cast<std::size_t>(s)] = low[static_cast<std::size_t>(s)] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto nbs = neighbors(f.atom);
      if (f.next < nbs.size()) {
        const Neighbor nb = nbs[f.next++];
        if (nb.bond == f.parent_bond) continue;
        auto& dv = disc[static_cast<std::size_t>(nb.atom)];
        if (dv < 0) {
          dv = low[static_cast<std::size_t>(nb.atom)] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          // Non-tree bond: closes a cycle.
          bonds_[static_cast<std::size_t>(nb.bond)].in_ring = true;
          auto& lu = low[static_cast<std::size_t>(f.atom)];
          lu = std::min(lu, dv);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          const int parent = stack.back().atom;
          auto& lp = low[static_cast<std::size_t>(parent)];
          lp = std::min(lp, low[static_cast<std::size_t>(done.atom)]);
          if (low[static_cast<std::size_t>(done.atom)] <= disc[static_cast<std::size_t>(parent)]) {
            bonds_[static_cast<std::size_t>(done.parent_bond)].in_ring = true;
          }
        }
      }
    }
  }
  atom_in_ring_.assign(static_cast<std::size_t>(n), false);
  for (const auto& b : bonds_) {
    if (b.in_ring) {
      atom_in_ring_[static_cast<std::size_t>(b.a)] = true;
      atom_in_ring_[static_cast<std::size_t>(b.b)] = true;
    }
  }
  implicit_h_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    implicit_h_[static_cast<std::size_t>(i)] = compute_implicit_h(atom(i), valence_sum(i));
  }
}

std::optional<int> MolecularGraph::bond_between(int a, int b) const {
  for (const auto& nb : neighbors(a)) {
    if (nb.atom == b) return nb.bond;
  }
  return std::nullopt;
}

int MolecularGraph::valence_sum(int atom) const {
  int sum = 0;
  for (const auto& nb : neighbors(atom)) sum += bond_valence(bond(nb.bond).order);
  return sum;
}

int MolecularGraph::total_h(int atom) const {
  const Atom& a = this->atom(atom);
  return implicit_h(atom) + a.explicit_h.value_or(0);
}

int MolecularGraph::heavy_atom_count() const {
  return static_cast<int>(std::count_if(atoms_.begin(), atoms_.end(),
                                        [](const Atom& a) { return a.is_heavy(); }));
}

MolecularGraph MolecularGraph::subgraph(std::span<const int> atoms) const {
  std::vector<int> local(atoms_.size(), -1);
  std::vector<Atom> sub_atoms;
  sub_atoms.reserve(atoms.size());
  for (int i = 0; i < static_cast<int>(atoms.size()); ++i) {
    local[static_cast<std::size_t>(atoms[static_cast<std::size_t>(i)])] = i;
    sub_atoms.push_back(atom(atoms[static_cast<std::size_t>(i)]));
  }
  std::vector<Bond> sub_bonds;
  for (const auto& b : bonds_) {
    const int la = local[static_cast<std::size_t>(b.a)];
    const int lb = local[static_cast<std::size_t>(b.b)];
    if (la >= 0 && lb >= 0) {
      Bond nb = b;
      nb.a = la;
      nb.b = lb;
      sub_bonds.push_back(nb);
    }
  }
  return MolecularGraph(std::move(sub_atoms), std::move(sub_bonds));
}

MolecularGraph permute_atoms(const MolecularGraph& mol, std::span<const int> order) {
  std::vector<int> new_index(mol.size(), -1);
  std::vector<Atom> atoms;
  atoms.reserve(order.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    new_index[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    atoms.push_back(mol.atom(order[static_cast<std::size_t>(i)]));
  }
  std::vector<Bond> bonds;
  bonds.reserve(mol.bonds().size());
  for (const auto& b : mol.bonds()) {
    Bond nb = b;
    nb.a = new_index[static_cast<std::size_t>(b.a)];
    nb.b = new_index[static_cast<std::size_t>(b.b)];
    bonds.push_back(nb);
  }
  return MolecularGraph(std::move(atoms), std::move(bonds));
}

}  // namespace safe
