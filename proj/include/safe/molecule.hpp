#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace safe {

// Atomic number 0 is the wildcard `*`.
inline constexpr int kWildcard = 0;
inline constexpr int kHydrogen = 1;

struct ElementInfo {
  int atomic_number;
  std::string_view symbol;
  double mass;  // standard atomic weight, 3 decimals
  // Allowed valences for organic-subset atoms; empty for elements that are
  // only legal in brackets.
  std::span<const int> valences;
  bool may_be_aromatic;
};

const ElementInfo& element_info(int atomic_number);
std::optional<int> find_element(std::string_view symbol);

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Contribution of a bond to the valence of its atoms. Aromatic bonds count 1;
// the extra pi electron is accounted for per atom.
int bond_valence(BondOrder order);

struct Atom {
  int element = 6;
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> isotope;
  std::optional<int> explicit_h;
  // Verbatim bracket text (e.g. "[C@@H]"), written back unchanged.
  std::optional<std::string> bracket_raw;

  bool is_wildcard() const { return element == kWildcard; }
  bool is_heavy() const { return element != kWildcard && element != kHydrogen; }
  std::string_view symbol() const;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;
  bool in_ring = false;
  // '/' or '\\' as seen walking from a to b; 0 when absent.
  char stereo = 0;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Neighbor {
  int atom;
  int bond;
};

// Immutable molecular graph. The constructor validates structural invariants
// and derives ring flags, connected components, adjacency and implicit
// hydrogen counts.
class MolecularGraph {
 public:
  MolecularGraph() = default;
  MolecularGraph(std::vector<Atom> atoms, std::vector<Bond> bonds);

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }

  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_[static_cast<std::size_t>(atom)];
  }
  int degree(int atom) const { return static_cast<int>(neighbors(atom).size()); }
  std::optional<int> bond_between(int a, int b) const;

  const std::vector<std::vector<int>>& components() const { return components_; }
  int component_of(int atom) const { return component_of_[static_cast<std::size_t>(atom)]; }

  bool atom_in_ring(int atom) const { return atom_in_ring_[static_cast<std::size_t>(atom)]; }
  int valence_sum(int atom) const;
  int implicit_h(int atom) const { return implicit_h_[static_cast<std::size_t>(atom)]; }
  int total_h(int atom) const;
  int heavy_atom_count() const;

  // Induced subgraph on `atoms` (in the given order); bonds with both ends
  // inside are kept.
  MolecularGraph subgraph(std::span<const int> atoms) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<int>> components_;
  std::vector<int> component_of_;
  std::vector<bool> atom_in_ring_;
  std::vector<int> implicit_h_;
};

// Implicit hydrogens an organic-subset atom needs to reach its lowest
// admissible valence. Bracket atoms and wildcards have none.
int compute_implicit_h(const Atom& atom, int valence_sum);

// Permissive valence rule; bracket atoms, charged atoms and wildcards pass.
bool valence_ok(const Atom& atom, int valence_sum);

// Returns the atom indices of the graph after permuting: new index i holds old
// atom order[i].
MolecularGraph permute_atoms(const MolecularGraph& mol, std::span<const int> order);

}  // namespace safe
