#include "safe/match.hpp"

#include <algorithm>

#include "safe/error.hpp"

namespace safe {
namespace {

class Matcher {
 public:
  Matcher(const MolecularGraph& pattern, const MolecularGraph& target, const MatchOptions& options)
      : p_(pattern), t_(target), opt_(options),
        image_(pattern.size(), -1),
        used_strict_(target.size(), 0),
        used_wild_(target.size(), 0),
        anchor_(pattern.size(), -1) {
    for (const auto& [pa, ta] : opt_.anchors) {
      if (pa < 0 || pa >= static_cast<int>(p_.size()) || ta < 0 || ta >= static_cast<int>(t_.size())) {
        throw SafeError(ErrorCode::kInvalidArgument, "anchor out of range");
      }
      anchor_[pa] = ta;
    }
    build_order();
  }

  std::vector<AtomMapping> run() {
    extend(0);
    return std::move(results_);
  }

 private:
  bool is_wild(int pa) const { return p_.atom(pa).element == opt_.wildcard_element; }

  // Anchored atoms first, then breadth-first so each later atom has a mapped
  // neighbour to draw candidates from.
  void build_order() {
    const int n = static_cast<int>(p_.size());
    std::vector<bool> placed(static_cast<std::size_t>(n), false);
    std::vector<int> seeds;
    for (int a = 0; a < n; ++a) {
      if (anchor_[a] >= 0) seeds.push_back(a);
    }
    for (int a = 0; a < n; ++a) seeds.push_back(a);
    for (int s : seeds) {
      if (placed[s]) continue;
      placed[s] = true;
      order_.push_back(s);
      for (std::size_t head = order_.size() - 1; head < order_.size(); ++head) {
        for (const auto& nb : p_.neighbors(order_[head])) {
          if (!placed[nb.atom]) {
            placed[nb.atom] = true;
            order_.push_back(nb.atom);
          }
        }
      }
    }
  }

  bool atom_ok(int pa, int ta) const {
    if (!opt_.target_mask.empty() && !opt_.target_mask[ta]) return false;
    if (is_wild(pa)) {
      if (used_strict_[ta]) return false;
      return !opt_.wildcards_injective ? true : used_wild_[ta] == 0;
    }
    if (used_strict_[ta] || used_wild_[ta]) return false;
    const Atom& x = p_.atom(pa);
    const Atom& y = t_.atom(ta);
    return x.element == y.element && x.aromatic == y.aromatic && x.formal_charge == y.formal_charge;
  }

  bool bonds_ok(int pa, int ta) const {
    for (const auto& nb : p_.neighbors(pa)) {
      const int other = image_[nb.atom];
      if (other < 0) continue;
      const auto tb = t_.bond_between(ta, other);
      if (!tb) return false;
      if (t_.bond(*tb).order != p_.bond(nb.bond).order) return false;
    }
    return true;
  }

  void extend(std::size_t depth) {
    if (opt_.max_results && results_.size() >= opt_.max_results) return;
    if (depth == order_.size()) {
      if (results_.size() >= opt_.cap) {
        throw SafeError(ErrorCode::kMappingCapExceeded,
                        "more than " + std::to_string(opt_.cap) + " mappings");
      }
      results_.push_back(image_);
      return;
    }
    const int pa = order_[depth];
    auto attempt = [&](int ta) {
      if (!atom_ok(pa, ta) || !bonds_ok(pa, ta)) return;
      image_[pa] = ta;
      (is_wild(pa) ? used_wild_ : used_strict_)[ta] += 1;
      extend(depth + 1);
      (is_wild(pa) ? used_wild_ : used_strict_)[ta] -= 1;
      image_[pa] = -1;
    };
    if (anchor_[pa] >= 0) {
      attempt(anchor_[pa]);
      return;
    }
    int mapped_neighbor = -1;
    for (const auto& nb : p_.neighbors(pa)) {
      if (image_[nb.atom] >= 0) {
        mapped_neighbor = image_[nb.atom];
        break;
      }
    }
    if (mapped_neighbor >= 0) {
      for (const auto& nb : t_.neighbors(mapped_neighbor)) attempt(nb.atom);
    } else {
      for (int ta = 0; ta < static_cast<int>(t_.size()); ++ta) attempt(ta);
    }
  }

  const MolecularGraph& p_;
  const MolecularGraph& t_;
  const MatchOptions& opt_;
  std::vector<int> order_;
  std::vector<int> image_;
  std::vector<int> used_strict_;
  std::vector<int> used_wild_;
  std::vector<int> anchor_;
  std::vector<AtomMapping> results_;
};

}  // namespace

std::vector<AtomMapping> match_substructure(const MolecularGraph& pattern,
                                            const MolecularGraph& target,
                                            const MatchOptions& options) {
  if (pattern.empty()) throw SafeError(ErrorCode::kInvalidArgument, "empty pattern");
  if (!options.target_mask.empty() && options.target_mask.size() != target.size()) {
    throw SafeError(ErrorCode::kInvalidArgument, "target mask size mismatch");
  }
  if (pattern.size() > target.size() && options.wildcards_injective) return {};
  return Matcher(pattern, target, options).run();
}

bool has_substructure(const MolecularGraph& pattern, const MolecularGraph& target,
                      MatchOptions options) {
  options.max_results = 1;
  return !match_substructure(pattern, target, options).empty();
}

}  // namespace safe
