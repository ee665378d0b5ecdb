#include "safe/smiles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "safe/canon.hpp"
#include "safe/detail/writer.hpp"
#include "safe/error.hpp"

namespace safe {
namespace {

bool is_bond_char(char c) {
  return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\';
}

bool is_single_like(char c) { return c == '-' || c == '/' || c == '\\'; }

struct PendingRing {
  int atom;
  char bond_char;
  std::size_t position;
};

class SmilesParser {
 public:
  SmilesParser(std::string_view text, const ParseOptions& options)
      : text_(text), options_(options) {}

  ParseResult run();

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg, std::size_t pos) const {
    throw SafeError(code, msg, pos + offset_);
  }

  int parse_atom();
  int parse_bracket_atom();
  int parse_ring_label();
  void add_bond(int a, int b, char bond_char, std::size_t pos);
  void ring_bond(int label, std::size_t pos);
  BondOrder order_for(char bond_char, int a, int b, std::size_t pos) const;

  std::string_view text_;
  ParseOptions options_;
  std::size_t offset_ = 0;  // leading whitespace trimmed away
  std::size_t i_ = 0;

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<bool> bond_explicit_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> block_of_atom_;
  std::vector<std::size_t> atom_position_;
  std::vector<RingClosure> closures_;
  std::map<int, PendingRing> open_;
  int block_ = 0;
  int prev_ = -1;
  char pending_bond_ = 0;
  std::size_t pending_pos_ = 0;
};

BondOrder SmilesParser::order_for(char c, int a, int b, std::size_t pos) const {
  const bool both_aromatic = atoms_[a].aromatic && atoms_[b].aromatic;
  switch (c) {
    case 0: return both_aromatic ? BondOrder::kAromatic : BondOrder::kSingle;
    case '-':
    case '/':
    case '\\': return BondOrder::kSingle;
    case '=': return BondOrder::kDouble;
    case '#': return BondOrder::kTriple;
    case ':':
      if (!both_aromatic) fail(ErrorCode::kSyntaxError, "aromatic bond between non-aromatic atoms", pos);
      return BondOrder::kAromatic;
    default: break;
  }
  fail(ErrorCode::kSyntaxError, "bad bond symbol", pos);
}

void SmilesParser::add_bond(int a, int b, char c, std::size_t pos) {
  if (a == b) fail(ErrorCode::kDuplicateRingBond, "ring bond to itself", pos);
  for (int other : adj_[a]) {
    if (other == b) fail(ErrorCode::kDuplicateRingBond, "bond already exists", pos);
  }
  Bond bond;
  bond.a = a;
  bond.b = b;
  bond.order = order_for(c, a, b, pos);
  if (c == '/' || c == '\\') bond.stereo = c;
  bonds_.push_back(bond);
  bond_explicit_.push_back(c != 0);
  adj_[a].push_back(b);
  adj_[b].push_back(a);
}

int SmilesParser::parse_bracket_atom() {
  const std::size_t start = i_;
  ++i_;  // '['
  Atom atom;
  auto peek = [&]() -> char { return i_ < text_.size() ? text_[i_] : '\0'; };
  auto read_int = [&]() -> std::optional<int> {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) return std::nullopt;
    int v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (text_[i_] - '0');
      if (v > 100000) fail(ErrorCode::kSyntaxError, "number too large", i_);
      ++i_;
    }
    return v;
  };

  atom.isotope = read_int();
  const char c = peek();
  if (c == '*') {
    atom.element = kWildcard;
    ++i_;
  } else if (std::islower(static_cast<unsigned char>(c))) {
    static constexpr std::string_view two[] = {"se", "as", "te"};
    bool matched = false;
    for (auto sym : two) {
      if (text_.substr(i_, 2) == sym) {
        std::string upper{static_cast<char>(std::toupper(sym[0])), sym[1]};
        atom.element = *find_element(upper);
        i_ += 2;
        matched = true;
        break;
      }
    }
    if (!matched) {
      static constexpr std::string_view one = "bcnops";
      if (one.find(c) == std::string_view::npos) {
        fail(ErrorCode::kUnknownElement, std::string("unknown aromatic symbol '") + c + "'", i_);
      }
      atom.element = *find_element(std::string(1, static_cast<char>(std::toupper(c))));
      ++i_;
    }
    atom.aromatic = true;
  } else if (std::isupper(static_cast<unsigned char>(c))) {
    std::optional<int> z;
    if (i_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[i_ + 1]))) {
      z = find_element(text_.substr(i_, 2));
      if (z) i_ += 2;
    }
    if (!z) {
      z = find_element(text_.substr(i_, 1));
      if (!z) fail(ErrorCode::kUnknownElement, std::string("unknown element '") + c + "'", i_);
      ++i_;
    }
    atom.element = *z;
  } else {
    fail(ErrorCode::kSyntaxError, "expected element symbol in bracket atom", i_);
  }

  if (peek() == '@') {
    ++i_;
    if (peek() == '@') {
      ++i_;
    } else if (i_ + 1 < text_.size() && std::isupper(static_cast<unsigned char>(text_[i_])) &&
               std::isupper(static_cast<unsigned char>(text_[i_ + 1]))) {
      i_ += 2;
      if (!read_int()) fail(ErrorCode::kSyntaxError, "chirality class needs a number", i_);
    }
  }
  int h = 0;
  if (peek() == 'H') {
    ++i_;
    h = read_int().value_or(1);
  }
  int charge = 0;
  if (peek() == '+' || peek() == '-') {
    const char sign = peek();
    ++i_;
    if (auto n = read_int()) {
      charge = *n;
    } else {
      charge = 1;
      while (peek() == sign) {
        ++charge;
        ++i_;
      }
    }
    if (sign == '-') charge = -charge;
  }
  if (charge < -4 || charge > 4) fail(ErrorCode::kSyntaxError, "formal charge out of range", start);
  atom.formal_charge = charge;
  if (peek() == ':') {
    ++i_;
    if (!read_int()) fail(ErrorCode::kSyntaxError, "atom class needs a number", i_);
  }
  if (peek() != ']') fail(ErrorCode::kSyntaxError, "unterminated bracket atom", start);
  ++i_;
  atom.explicit_h = h;
  atom.bracket_raw = std::string(text_.substr(start, i_ - start));
  if (atom.aromatic && !element_info(atom.element).may_be_aromatic) {
    fail(ErrorCode::kUnknownElement, "element cannot be aromatic", start);
  }
  atoms_.push_back(std::move(atom));
  return static_cast<int>(atoms_.size()) - 1;
}

int SmilesParser::parse_atom() {
  const char c = text_[i_];
  if (c == '[') return parse_bracket_atom();
  Atom atom;
  if (c == '*') {
    atom.element = kWildcard;
    ++i_;
  } else if (c == 'C' && i_ + 1 < text_.size() && text_[i_ + 1] == 'l') {
    atom.element = 17;
    i_ += 2;
  } else if (c == 'B' && i_ + 1 < text_.size() && text_[i_ + 1] == 'r') {
    atom.element = 35;
    i_ += 2;
  } else {
    static constexpr std::string_view aliphatic = "BCNOPSFI";
    static constexpr std::string_view aromatic = "bcnops";
    if (aliphatic.find(c) != std::string_view::npos) {
      atom.element = *find_element(std::string(1, c));
    } else if (aromatic.find(c) != std::string_view::npos) {
      atom.element = *find_element(std::string(1, static_cast<char>(std::toupper(c))));
      atom.aromatic = true;
    } else {
      fail(ErrorCode::kUnknownElement, std::string("unknown element '") + c + "'", i_);
    }
    ++i_;
  }
  atoms_.push_back(atom);
  return static_cast<int>(atoms_.size()) - 1;
}

int SmilesParser::parse_ring_label() {
  if (text_[i_] == '%') {
    if (i_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[i_ + 1])) ||
        !std::isdigit(static_cast<unsigned char>(text_[i_ + 2]))) {
      fail(ErrorCode::kSyntaxError, "'%' must be followed by two digits", i_);
    }
    const int label = (text_[i_ + 1] - '0') * 10 + (text_[i_ + 2] - '0');
    i_ += 3;
    return label;
  }
  return text_[i_++] - '0';
}

void SmilesParser::ring_bond(int label, std::size_t pos) {
  auto it = open_.find(label);
  if (it == open_.end()) {
    open_[label] = PendingRing{prev_, pending_bond_, pos};
    return;
  }
  const PendingRing ring = it->second;
  open_.erase(it);
  char c = ring.bond_char;
  if (ring.bond_char && pending_bond_ && ring.bond_char != pending_bond_ &&
      !(is_single_like(ring.bond_char) && is_single_like(pending_bond_))) {
    fail(ErrorCode::kSyntaxError, "conflicting ring bond symbols", pos);
  }
  if (!c) c = pending_bond_;
  add_bond(ring.atom, prev_, c, pos);
  closures_.push_back({static_cast<int>(bonds_.size()) - 1, label});
}

ParseResult SmilesParser::run() {
  std::size_t first = 0;
  while (first < text_.size() && std::isspace(static_cast<unsigned char>(text_[first]))) ++first;
  std::size_t last = text_.size();
  while (last > first && std::isspace(static_cast<unsigned char>(text_[last - 1]))) --last;
  offset_ = first;
  text_ = text_.substr(first, last - first);
  if (text_.empty()) throw SafeError(ErrorCode::kEmptyInput, "empty SMILES");

  std::vector<int> branch_stack;
  bool block_has_atom = false;
  while (i_ < text_.size()) {
    const char c = text_[i_];
    if (c == '(') {
      if (prev_ < 0) fail(ErrorCode::kSyntaxError, "branch without a preceding atom", i_);
      if (pending_bond_) fail(ErrorCode::kSyntaxError, "bond symbol before '('", i_);
      branch_stack.push_back(prev_);
      ++i_;
      if (i_ < text_.size() && text_[i_] == ')') fail(ErrorCode::kSyntaxError, "empty branch", i_);
    } else if (c == ')') {
      if (branch_stack.empty()) fail(ErrorCode::kUnbalancedParenthesis, "unmatched ')'", i_);
      if (pending_bond_) fail(ErrorCode::kSyntaxError, "dangling bond symbol", i_);
      prev_ = branch_stack.back();
      branch_stack.pop_back();
      ++i_;
    } else if (is_bond_char(c)) {
      if (pending_bond_) fail(ErrorCode::kSyntaxError, "two consecutive bond symbols", i_);
      if (prev_ < 0) fail(ErrorCode::kSyntaxError, "bond symbol without a preceding atom", i_);
      pending_bond_ = c;
      pending_pos_ = i_;
      ++i_;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
      if (prev_ < 0) fail(ErrorCode::kSyntaxError, "ring label without a preceding atom", i_);
      const std::size_t pos = i_;
      const int label = parse_ring_label();
      ring_bond(label, pos);
      pending_bond_ = 0;
    } else if (c == '.') {
      if (!branch_stack.empty()) fail(ErrorCode::kUnbalancedParenthesis, "'.' inside a branch", i_);
      if (pending_bond_) fail(ErrorCode::kSyntaxError, "dangling bond symbol", i_);
      if (!block_has_atom) fail(ErrorCode::kSyntaxError, "empty component", i_);
      prev_ = -1;
      ++block_;
      block_has_atom = false;
      ++i_;
    } else {
      const std::size_t pos = i_;
      if (std::isspace(static_cast<unsigned char>(c))) {
        fail(ErrorCode::kSyntaxError, "whitespace inside SMILES", pos);
      }
      const int atom = parse_atom();
      adj_.emplace_back();
      block_of_atom_.push_back(block_);
      atom_position_.push_back(pos + offset_);
      if (prev_ >= 0) add_bond(prev_, atom, pending_bond_, pending_pos_);
      pending_bond_ = 0;
      prev_ = atom;
      block_has_atom = true;
    }
  }
  if (!branch_stack.empty() && !options_.allow_incomplete) {
    fail(ErrorCode::kUnbalancedParenthesis, "unclosed '('", text_.size());
  }
  if (pending_bond_ && !options_.allow_incomplete) {
    fail(ErrorCode::kSyntaxError, "dangling bond symbol", pending_pos_);
  }
  const bool dot_ok = options_.allow_trailing_dot || options_.allow_incomplete;
  if (!block_has_atom && !(dot_ok && block_ > 0)) {
    fail(ErrorCode::kSyntaxError, "empty component", text_.size());
  }
  if (!options_.allow_open_rings && !open_.empty()) {
    const auto& [label, ring] = *open_.begin();
    fail(ErrorCode::kUnmatchedRingDigit, "ring label " + ring_label_text(label) + " never closed",
         ring.position);
  }

  // Implicit bonds between aromatic atoms outside rings are single
  // (biphenyl written without '-').
  MolecularGraph graph(atoms_, bonds_);
  bool changed = false;
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    if (!bond_explicit_[b] && bonds_[b].order == BondOrder::kAromatic && !graph.bond(static_cast<int>(b)).in_ring) {
      bonds_[b].order = BondOrder::kSingle;
      changed = true;
    }
  }
  if (changed) graph = MolecularGraph(atoms_, bonds_);

  for (int a = 0; a < static_cast<int>(graph.size()); ++a) {
    if (!valence_ok(graph.atom(a), graph.valence_sum(a))) {
      throw SafeError(ErrorCode::kValenceViolation,
                      "too many bonds on " + std::string(graph.atom(a).symbol()),
                      atom_position_[a]);
    }
  }

  ParseResult result;
  result.graph = std::move(graph);
  result.block_of_atom = std::move(block_of_atom_);
  result.block_count = block_ + (block_has_atom ? 1 : 0);
  result.atom_position = std::move(atom_position_);
  result.ring_closures = std::move(closures_);
  for (const auto& [label, ring] : open_) {
    const BondOrder order =
        ring.bond_char == '=' ? BondOrder::kDouble
        : ring.bond_char == '#' ? BondOrder::kTriple
        : ring.bond_char == ':' ? BondOrder::kAromatic
                                : BondOrder::kSingle;
    result.open_rings.push_back({ring.atom, label, order, ring.position + offset_});
  }
  std::sort(result.open_rings.begin(), result.open_rings.end(),
            [](const OpenRing& x, const OpenRing& y) { return x.position < y.position; });
  return result;
}

}  // namespace

ParseResult parse_smiles_detailed(std::string_view text, const ParseOptions& options) {
  return SmilesParser(text, options).run();
}

MolecularGraph parse_smiles(std::string_view text) {
  return parse_smiles_detailed(text).graph;
}

std::string ring_label_text(int label) {
  if (label < 0 || label > 99) {
    throw SafeError(ErrorCode::kTooManyLabels, "ring label out of range: " + std::to_string(label));
  }
  if (label < 10) return std::string(1, static_cast<char>('0' + label));
  return "%" + std::to_string(label);
}

namespace detail {

std::string atom_text(const Atom& atom) {
  if (atom.bracket_raw) return *atom.bracket_raw;
  const bool plain = atom.formal_charge == 0 && !atom.isotope && !atom.explicit_h;
  if (atom.is_wildcard() && plain) return "*";
  static constexpr int organic[] = {5, 6, 7, 8, 9, 15, 16, 17, 35, 53};
  const bool in_subset = std::find(std::begin(organic), std::end(organic), atom.element) != std::end(organic);
  std::string sym(atom.symbol());
  if (atom.aromatic) sym[0] = static_cast<char>(std::tolower(sym[0]));
  if (plain && in_subset) return sym;
  std::string out = "[";
  if (atom.isotope) out += std::to_string(*atom.isotope);
  out += sym;
  const int h = atom.explicit_h.value_or(0);
  if (h == 1) out += "H";
  if (h > 1) out += "H" + std::to_string(h);
  if (atom.formal_charge > 0) out += "+";
  if (atom.formal_charge < 0) out += "-";
  if (std::abs(atom.formal_charge) > 1) out += std::to_string(std::abs(atom.formal_charge));
  out += "]";
  return out;
}

std::string bond_symbol(const MolecularGraph& mol, int bond_index, int from) {
  const Bond& b = mol.bond(bond_index);
  const bool both_aromatic = mol.atom(b.a).aromatic && mol.atom(b.b).aromatic;
  if (b.stereo) {
    const char c = from == b.a ? b.stereo : (b.stereo == '/' ? '\\' : '/');
    return std::string(1, c);
  }
  switch (b.order) {
    case BondOrder::kSingle: return both_aromatic ? "-" : "";
    case BondOrder::kDouble: return "=";
    case BondOrder::kTriple: return "#";
    case BondOrder::kAromatic: return both_aromatic ? "" : ":";
  }
  return "";
}

namespace {

class BlockWriter {
 public:
  BlockWriter(const MolecularGraph& mol, const BlockSpec& spec)
      : mol_(mol), spec_(spec), in_block_(mol.size(), false), visited_(mol.size(), false),
        children_(mol.size()), opens_(mol.size()), closes_(mol.size()),
        closure_marked_(mol.bonds().size(), false), digit_of_(mol.bonds().size(), 0) {
    for (int a : spec.atoms) in_block_[a] = true;
  }

  BlockText run() {
    std::vector<int> sorted(spec_.atoms.begin(), spec_.atoms.end());
    std::sort(sorted.begin(), sorted.end(),
              [&](int x, int y) { return spec_.priority[x] < spec_.priority[y]; });
    std::vector<int> roots;
    if (spec_.root) {
      roots.push_back(*spec_.root);
      plan(*spec_.root, -1);
    }
    for (int a : sorted) {
      if (!visited_[a]) {
        roots.push_back(a);
        plan(a, -1);
      }
    }
    for (std::size_t r = 0; r < roots.size(); ++r) {
      if (r > 0) out_.text += '.';
      emit(roots[r], -1, -1);
    }
    return std::move(out_);
  }

 private:
  void plan(int u, int parent_bond) {
    visited_[u] = true;
    std::vector<Neighbor> nbs;
    for (const auto& nb : mol_.neighbors(u)) {
      if (nb.bond != parent_bond && in_block_[nb.atom]) nbs.push_back(nb);
    }
    std::sort(nbs.begin(), nbs.end(), [&](const Neighbor& x, const Neighbor& y) {
      return spec_.priority[x.atom] < spec_.priority[y.atom];
    });
    for (const auto& nb : nbs) {
      if (!visited_[nb.atom]) {
        children_[u].push_back(nb);
        plan(nb.atom, nb.bond);
      } else if (!closure_marked_[nb.bond]) {
        closure_marked_[nb.bond] = true;
        opens_[nb.atom].push_back(nb.bond);
        closes_[u].push_back(nb.bond);
      }
    }
  }

  int allocate_digit() {
    for (int d = 1; d <= 99; ++d) {
      if (in_use_[d]) continue;
      if (std::find(spec_.reserved_digits.begin(), spec_.reserved_digits.end(), d) !=
          spec_.reserved_digits.end()) {
        continue;
      }
      in_use_[d] = true;
      out_.max_digit = std::max(out_.max_digit, d);
      return d;
    }
    throw SafeError(ErrorCode::kTooManyLabels, "more than 99 ring closures open at once");
  }

  void emit(int u, int via_bond, int from) {
    out_.atom_order.push_back(u);
    if (via_bond >= 0) out_.text += bond_symbol(mol_, via_bond, from);
    out_.text += atom_text(mol_.atom(u));
    std::vector<int> to_free;
    for (int b : closes_[u]) {
      const int d = digit_of_[b];
      out_.text += ring_label_text(d);
      to_free.push_back(d);
    }
    for (int b : opens_[u]) {
      const int d = allocate_digit();
      digit_of_[b] = d;
      out_.text += bond_symbol(mol_, b, u);
      out_.text += ring_label_text(d);
    }
    for (int d : to_free) in_use_[d] = false;
    if (spec_.externals && !(*spec_.externals)[u].empty()) {
      for (const auto& ext : (*spec_.externals)[u]) {
        out_.text += ext.symbol;
        out_.text += ext.token;
      }
    }
    const auto& kids = children_[u];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const bool last = k + 1 == kids.size();
      if (!last) out_.text += '(';
      emit(kids[k].atom, kids[k].bond, u);
      if (!last) out_.text += ')';
    }
  }

  const MolecularGraph& mol_;
  const BlockSpec& spec_;
  std::vector<bool> in_block_;
  std::vector<bool> visited_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<int>> opens_;
  std::vector<std::vector<int>> closes_;
  std::vector<bool> closure_marked_;
  std::vector<int> digit_of_;
  bool in_use_[100] = {};
  BlockText out_;
};

}  // namespace

BlockText write_block(const MolecularGraph& mol, const BlockSpec& spec) {
  return BlockWriter(mol, spec).run();
}

}  // namespace detail

namespace {

detail::BlockText write_whole(const MolecularGraph& mol, const WriteOptions& options) {
  if (options.root && (*options.root < 0 || *options.root >= static_cast<int>(mol.size()))) {
    throw SafeError(ErrorCode::kInvalidArgument, "root atom out of range");
  }
  std::vector<int> priority;
  if (options.canonical) {
    priority = canonical_ranks(mol);
  } else {
    priority.resize(mol.size());
    std::iota(priority.begin(), priority.end(), 0);
  }
  std::vector<int> atoms(mol.size());
  std::iota(atoms.begin(), atoms.end(), 0);
  detail::BlockSpec spec;
  spec.atoms = atoms;
  spec.priority = priority;
  spec.root = options.root;
  return detail::write_block(mol, spec);
}

}  // namespace

std::string write_smiles(const MolecularGraph& mol, const WriteOptions& options) {
  return write_whole(mol, options).text;
}

int max_canonical_ring_digit(const MolecularGraph& mol) {
  return write_whole(mol, WriteOptions{true, std::nullopt}).max_digit;
}

}  // namespace safe
