#include "safe/genlab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "safe/codec.hpp"
#include "safe/detail/render.hpp"
#include "safe/error.hpp"
#include "safe/fingerprint.hpp"
#include "safe/match.hpp"
#include "safe/properties.hpp"
#include "safe/smiles.hpp"

namespace safe {

std::string_view task_name(Task task) {
  switch (task) {
    case Task::kDeNovo: return "de_novo";
    case Task::kScaffoldDecoration: return "scaffold_decoration";
    case Task::kMotifExtension: return "motif_extension";
    case Task::kLinkerDesign: return "linker_design";
    case Task::kScaffoldMorphing: return "scaffold_morphing";
    case Task::kSuperstructure: return "superstructure";
  }
  return "de_novo";
}

Task parse_task(std::string_view name) {
  if (name == "denovo" || name == "de_novo") return Task::kDeNovo;
  if (name == "decorate" || name == "scaffold_decoration") return Task::kScaffoldDecoration;
  if (name == "motif" || name == "motif_extension") return Task::kMotifExtension;
  if (name == "linker" || name == "linker_design") return Task::kLinkerDesign;
  if (name == "morph" || name == "scaffold_morphing") return Task::kScaffoldMorphing;
  if (name == "super" || name == "superstructure") return Task::kSuperstructure;
  throw SafeError(ErrorCode::kInvalidArgument, "unknown task " + std::string(name));
}

namespace {

int wildcard_count(const MolecularGraph& mol) {
  int n = 0;
  for (const auto& a : mol.atoms()) n += a.is_wildcard() ? 1 : 0;
  return n;
}

void require_wildcards(const MolecularGraph& mol, int min, int max) {
  const int n = wildcard_count(mol);
  if (n < min) throw SafeError(ErrorCode::kNoWildcard, "input has no attachment wildcard");
  if (n > max) {
    throw SafeError(ErrorCode::kTooManyWildcards,
                    "input has " + std::to_string(n) + " wildcards, at most " + std::to_string(max) +
                        " allowed");
  }
}

MolecularGraph disjoint_union(const std::vector<MolecularGraph>& parts) {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  for (const auto& g : parts) {
    const int offset = static_cast<int>(atoms.size());
    atoms.insert(atoms.end(), g.atoms().begin(), g.atoms().end());
    for (Bond b : g.bonds()) {
      b.a += offset;
      b.b += offset;
      bonds.push_back(b);
    }
  }
  return MolecularGraph(std::move(atoms), std::move(bonds));
}

MolecularGraph add_random_sites(const MolecularGraph& mol, int sites, std::uint64_t seed) {
  if (sites < 1) throw SafeError(ErrorCode::kInvalidArgument, "site count must be positive");
  std::vector<int> eligible;
  for (int a = 0; a < static_cast<int>(mol.size()); ++a) {
    const Atom& atom = mol.atom(a);
    if (atom.is_heavy() && !atom.bracket_raw && mol.implicit_h(a) >= 1) eligible.push_back(a);
  }
  if (static_cast<int>(eligible.size()) < sites) {
    throw SafeError(ErrorCode::kNoEligibleSite,
                    std::to_string(eligible.size()) + " eligible atoms for " + std::to_string(sites) +
                        " sites");
  }
  std::mt19937_64 rng(seed);
  const std::size_t m = eligible.size();
  for (std::size_t i = 0; i < static_cast<std::size_t>(sites); ++i) {
    std::swap(eligible[i], eligible[i + rng() % (m - i)]);
  }
  std::vector<int> chosen(eligible.begin(), eligible.begin() + sites);
  std::sort(chosen.begin(), chosen.end());
  std::vector<Atom> atoms = mol.atoms();
  std::vector<Bond> bonds = mol.bonds();
  for (int a : chosen) {
    Atom w;
    w.element = kWildcard;
    Bond b;
    b.a = a;
    b.b = static_cast<int>(atoms.size());
    atoms.push_back(w);
    bonds.push_back(b);
  }
  return MolecularGraph(std::move(atoms), std::move(bonds));
}

}  // namespace

std::string fragment_core_string(const MolecularGraph& fragment_with_wildcards) {
  return canonical_smiles(fragment_with_wildcards);
}

TaskPrompt make_prompt(Task task, const PromptInputs& inputs) {
  TaskPrompt prompt;
  prompt.task = task;
  if (task == Task::kDeNovo) return prompt;

  const bool two = task == Task::kLinkerDesign || task == Task::kScaffoldMorphing;
  if (inputs.molecules.size() != (two ? 2u : 1u)) {
    throw SafeError(ErrorCode::kInvalidArgument,
                    std::string(task_name(task)) + " takes " + (two ? "two fragments" : "one molecule"));
  }
  MolecularGraph combined;
  switch (task) {
    case Task::kScaffoldDecoration:
      require_wildcards(inputs.molecules[0], 1, static_cast<int>(inputs.molecules[0].size()));
      combined = inputs.molecules[0];
      break;
    case Task::kMotifExtension:
      require_wildcards(inputs.molecules[0], 1, 1);
      combined = inputs.molecules[0];
      break;
    case Task::kLinkerDesign:
    case Task::kScaffoldMorphing:
      for (const auto& m : inputs.molecules) require_wildcards(m, 1, 1);
      combined = disjoint_union(inputs.molecules);
      break;
    case Task::kSuperstructure:
      require_wildcards(inputs.molecules[0], 0, 0);
      combined = add_random_sites(inputs.molecules[0], inputs.sites, inputs.seed);
      break;
    case Task::kDeNovo:
      break;
  }

  detail::RenderSpec spec;
  spec.block_of_atom.assign(combined.size(), -1);
  for (int a = 0; a < static_cast<int>(combined.size()); ++a) {
    if (combined.atom(a).is_wildcard()) {
      if (combined.degree(a) != 1) {
        throw SafeError(ErrorCode::kInvalidArgument, "each wildcard must have exactly one bond");
      }
      continue;
    }
    spec.block_of_atom[a] = combined.component_of(a);
  }
  spec.first_label = max_canonical_ring_digit(combined) + 1;
  const auto rendered = detail::render_blocks(combined, spec);
  prompt.prefix = rendered.safe.text + ".";
  prompt.open_labels = rendered.open_labels;
  prompt.constraint = std::move(combined);
  if (task == Task::kScaffoldMorphing && inputs.reference) {
    prompt.reference_core = fragment_core_string(*inputs.reference);
  }
  return prompt;
}

Verdict verify_completion(const TaskPrompt& prompt, std::string_view full_text) {
  if (full_text.substr(0, prompt.prefix.size()) != prompt.prefix) {
    throw SafeError(ErrorCode::kPrefixMismatch, "text does not start with the prompt prefix");
  }
  if (full_text.size() == prompt.prefix.size()) return {false, "empty completion"};

  ParseOptions opt;
  opt.allow_open_rings = true;
  ParseResult parsed;
  try {
    parsed = parse_smiles_detailed(full_text, opt);
  } catch (const SafeError& e) {
    return {false, std::string("decode failed: ") + e.what()};
  }
  if (!parsed.open_rings.empty()) {
    return {false, "open label " + ring_label_text(parsed.open_rings.front().label)};
  }
  if (!prompt.constraint.empty()) {
    MatchOptions mo;
    mo.wildcards_injective = false;
    if (!has_substructure(prompt.constraint, parsed.graph, mo)) {
      return {false, "constraint substructure missing"};
    }
  }
  if (prompt.task == Task::kLinkerDesign || prompt.task == Task::kScaffoldMorphing) {
    const int prefix_blocks = static_cast<int>(std::count(prompt.prefix.begin(), prompt.prefix.end(), '.'));
    if (parsed.block_count - prefix_blocks != 1) {
      return {false, "completion must be a single block closing both labels"};
    }
    for (const auto& rc : parsed.ring_closures) {
      if (std::find(prompt.open_labels.begin(), prompt.open_labels.end(), rc.label) ==
          prompt.open_labels.end()) {
        continue;
      }
      const Bond& b = parsed.graph.bond(rc.bond);
      if (std::max(parsed.block_of_atom[b.a], parsed.block_of_atom[b.b]) != prefix_blocks) {
        return {false, "label " + ring_label_text(rc.label) + " closed outside the new block"};
      }
    }
    if (prompt.task == Task::kScaffoldMorphing && prompt.reference_core) {
      const auto middle = detail::block_graph(parsed.graph, parsed.block_of_atom, prefix_blocks);
      if (fragment_core_string(middle) == *prompt.reference_core) {
        return {false, "middle block repeats the reference scaffold"};
      }
    }
  }
  return {true, ""};
}

NGramModel::NGramModel(int order, Vocabulary vocab) : order_(order), vocab_(std::move(vocab)) {
  if (order < 1 || order > 5) throw SafeError(ErrorCode::kInvalidArgument, "order must be in [1,5]");
}

void NGramModel::observe(const std::vector<int>& tokens) {
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    for (int len = 0; len < order_; ++len) {
      std::vector<int> ctx;
      for (int k = len; k >= 1; --k) {
        const long idx = static_cast<long>(i) - k;
        ctx.push_back(idx >= 0 ? tokens[static_cast<std::size_t>(idx)] : kBosId);
      }
      ++counts_[ctx][tokens[i]];
    }
  }
}

std::vector<double> NGramModel::distribution(const std::vector<int>& history) const {
  const std::size_t v = vocab_.size();
  std::vector<double> p(v, 0.0);
  const auto samplable = [](std::size_t t) {
    return t != kBosId && t != kUnkId && t != kMaskId && t != kPadId;
  };
  const double support = static_cast<double>(v - 4);
  for (int len = order_ - 1; len >= 0; --len) {
    std::vector<int> ctx;
    for (int k = len; k >= 1; --k) {
      const long idx = static_cast<long>(history.size()) - k;
      ctx.push_back(idx >= 0 ? history[static_cast<std::size_t>(idx)] : kBosId);
    }
    const auto it = counts_.find(ctx);
    if (it == counts_.end()) continue;
    long total = 0;
    for (const auto& [t, c] : it->second) {
      if (samplable(static_cast<std::size_t>(t))) total += c;
    }
    const double denom = static_cast<double>(total) + kSmoothing * support;
    for (std::size_t t = 0; t < v; ++t) {
      if (samplable(t)) p[t] = kSmoothing / denom;
    }
    for (const auto& [t, c] : it->second) {
      if (samplable(static_cast<std::size_t>(t))) p[t] += static_cast<double>(c) / denom;
    }
    return p;
  }
  for (std::size_t t = 0; t < v; ++t) {
    if (samplable(t)) p[t] = 1.0 / support;
  }
  return p;
}

std::string NGramModel::to_json() const {
  nlohmann::json j;
  j["order"] = order_;
  j["vocab"] = vocab_.surfaces();
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& [l, r] : vocab_.merges()) merges.push_back({l, r});
  j["merges"] = merges;
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& [ctx, next] : counts_) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& [t, c] : next) row.push_back({t, c});
    counts.push_back({ctx, row});
  }
  j["counts"] = counts;
  return j.dump();
}

NGramModel NGramModel::from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::string vocab_text;
    for (const auto& s : j.at("vocab")) {
      std::string escaped;
      for (char c : s.get<std::string>()) {
        if (c == '\\') escaped += "\\\\";
        else if (c == '\n') escaped += "\\n";
        else if (c == '\t') escaped += "\\t";
        else escaped += c;
      }
      vocab_text += escaped + "\n";
    }
    Vocabulary vocab = Vocabulary::from_text(vocab_text, "");
    for (const auto& m : j.at("merges")) vocab.add_merge(m.at(0).get<std::string>(), m.at(1).get<std::string>());
    NGramModel model(j.at("order").get<int>(), std::move(vocab));
    for (const auto& row : j.at("counts")) {
      auto& next = model.counts_[row.at(0).get<std::vector<int>>()];
      for (const auto& tc : row.at(1)) next[tc.at(0).get<int>()] = tc.at(1).get<long>();
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw SafeError(ErrorCode::kInvalidArgument, std::string("bad model file: ") + e.what());
  }
}

void NGramModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw SafeError(ErrorCode::kIoError, "cannot write " + path);
  out << to_json() << "\n";
}

NGramModel NGramModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SafeError(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

NGramModel train_ngram(const std::vector<std::string>& texts, const Vocabulary& vocab, int order) {
  if (texts.empty()) throw SafeError(ErrorCode::kEmptyCorpus, "no training sequences");
  NGramModel model(order, vocab);
  for (const auto& t : texts) model.observe(encode_tokens(t, vocab, true).tokens);
  return model;
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Parses as an unfinished SAFE text, with bonds still owed to open labels
// counted against valence.
bool prefix_viable(const std::string& text) {
  ParseOptions opt;
  opt.allow_open_rings = true;
  opt.allow_incomplete = true;
  ParseResult parsed;
  try {
    parsed = parse_smiles_detailed(text, opt);
  } catch (const SafeError&) {
    return false;
  }
  std::map<int, int> owed;
  for (const auto& open : parsed.open_rings) owed[open.atom] += bond_valence(open.order);
  for (const auto& [atom, extra] : owed) {
    if (!valence_ok(parsed.graph.atom(atom), parsed.graph.valence_sum(atom) + extra)) return false;
  }
  return true;
}

bool complete(const std::string& text) {
  ParseOptions opt;
  opt.allow_open_rings = true;
  try {
    return parse_smiles_detailed(text, opt).open_rings.empty();
  } catch (const SafeError&) {
    return false;
  }
}

int branch_depth(const std::string& text) {
  int depth = 0;
  bool bracket = false;
  for (char c : text) {
    if (c == '[') bracket = true;
    else if (c == ']') bracket = false;
    else if (!bracket && c == '(') ++depth;
    else if (!bracket && c == ')') --depth;
  }
  return depth;
}

bool parses(const std::string& text) {
  try {
    parse_smiles(text);
    return true;
  } catch (const SafeError&) {
    return false;
  }
}

// A short suffix that turns `text` into a complete molecule: close the open
// branches, then hang one carbon per open label off the chain (or, when
// extra blocks are allowed, put each label on its own one-carbon block).
std::optional<std::string> closure_witness(const std::string& text, bool single_block) {
  static constexpr std::string_view needs_atom = ".(=#-:/\\";
  ParseOptions opt;
  opt.allow_open_rings = true;
  opt.allow_incomplete = true;
  std::vector<int> labels;
  try {
    for (const auto& open : parse_smiles_detailed(text, opt).open_rings) labels.push_back(open.label);
  } catch (const SafeError&) {
    return std::nullopt;
  }
  std::string base = text;
  if (base.empty() || needs_atom.find(base.back()) != std::string_view::npos) base += "C";
  base.append(static_cast<std::size_t>(std::max(0, branch_depth(base))), ')');

  std::vector<std::string> candidates;
  for (const std::string lead : {"", "C"}) {
    std::string t = base + lead;
    for (int label : labels) t += "C" + ring_label_text(label);
    candidates.push_back(t);
  }
  if (!single_block) {
    std::string t = base;
    for (int label : labels) t += ".C" + ring_label_text(label);
    candidates.push_back(t);
  }
  for (const auto& t : candidates) {
    if (parses(t)) return t;
  }
  return std::nullopt;
}

int pick(const std::vector<double>& p, const std::vector<bool>& masked, double temperature,
         std::mt19937_64& rng) {
  if (temperature <= 0.0) {
    int best = -1;
    for (std::size_t t = 0; t < p.size(); ++t) {
      if (!masked[t] && p[t] > 0.0 && (best < 0 || p[t] > p[best])) best = static_cast<int>(t);
    }
    return best;
  }
  std::vector<double> w(p.size(), 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (masked[t] || p[t] <= 0.0) continue;
    w[t] = std::pow(p[t], 1.0 / temperature);
    total += w[t];
  }
  if (total <= 0.0) return -1;
  double r = uniform01(rng) * total;
  int last = -1;
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (w[t] <= 0.0) continue;
    last = static_cast<int>(t);
    if (r < w[t]) return last;
    r -= w[t];
  }
  return last;
}

}  // namespace

std::vector<Sample> complete_prefix(const NGramModel& model, const TaskPrompt& prompt,
                                    const SampleOptions& options) {
  const Vocabulary& vocab = model.vocab();
  std::vector<int> prefix_ids{kBosId};
  if (!prompt.prefix.empty()) {
    const auto ids = encode_tokens(prompt.prefix, vocab).tokens;
    prefix_ids.insert(prefix_ids.end(), ids.begin(), ids.end());
  }
  const bool single_block =
      prompt.task == Task::kLinkerDesign || prompt.task == Task::kScaffoldMorphing;
  std::mt19937_64 rng(options.seed);
  std::vector<Sample> samples;
  for (int s = 0; s < options.n_samples; ++s) {
    std::vector<int> history = prefix_ids;
    std::string text = prompt.prefix;
    bool finished = false;
    for (int step = 0; step < options.max_len && !finished; ++step) {
      const auto p = model.distribution(history);
      std::vector<bool> masked(p.size(), false);
      int chosen = -1;
      while (true) {
        const int t = pick(p, masked, options.temperature, rng);
        if (t < 0) break;
        if (t == kEosId) {
          if (text.size() > prompt.prefix.size() && complete(text)) {
            chosen = t;
            break;
          }
        } else if (!(single_block && vocab.surface(t).find('.') != std::string::npos) &&
                   prefix_viable(text + vocab.surface(t)) &&
                   closure_witness(text + vocab.surface(t), single_block)) {
          chosen = t;
          break;
        }
        masked[static_cast<std::size_t>(t)] = true;
      }
      if (chosen < 0) break;
      if (chosen == kEosId) {
        finished = true;
      } else {
        history.push_back(chosen);
        text += vocab.surface(chosen);
      }
    }
    Sample sample;
    if (!finished) {
      if (auto closed = closure_witness(text, single_block)) text = *closed;
      sample.forced_closure = true;
    }
    const Verdict v = verify_completion(prompt, text);
    sample.text = std::move(text);
    sample.accepted = v.accepted;
    sample.reason = v.reason;
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::vector<Sample> sample_denovo(const NGramModel& model, const SampleOptions& options) {
  return complete_prefix(model, TaskPrompt{}, options);
}

GenerationMetrics evaluate_set(const std::vector<std::string>& texts, const MolecularGraph* reference) {
  GenerationMetrics m;
  std::vector<Fingerprint> fps;
  std::set<std::string> distinct;
  for (const auto& t : texts) {
    try {
      const MolecularGraph mol = decode_safe(t);
      distinct.insert(canonical_smiles(mol));
      fps.push_back(circular_fingerprint(mol));
    } catch (const SafeError&) {
    }
  }
  if (reference) m.distance_to_reference = 0.0;
  if (fps.empty()) return m;
  m.validity = static_cast<double>(fps.size()) / static_cast<double>(texts.size());
  m.uniqueness = static_cast<double>(distinct.size()) / static_cast<double>(fps.size());
  if (fps.size() > 1) {
    double sum = 0.0;
    for (std::size_t i = 0; i < fps.size(); ++i) {
      for (std::size_t j = i + 1; j < fps.size(); ++j) sum += 1.0 - tanimoto(fps[i], fps[j]);
    }
    m.diversity = sum / (static_cast<double>(fps.size()) * static_cast<double>(fps.size() - 1) / 2.0);
  }
  if (reference) {
    const Fingerprint ref = circular_fingerprint(*reference);
    double sum = 0.0;
    for (const auto& fp : fps) sum += 1.0 - tanimoto(fp, ref);
    m.distance_to_reference = sum / static_cast<double>(fps.size());
  }
  return m;
}

double reward_for_value(double value, const RewardSpec& spec) {
  if (!(spec.alpha > 0.0)) throw SafeError(ErrorCode::kInvalidArgument, "alpha must be positive");
  return 1.0 / (1.0 + spec.alpha * std::abs(value - spec.target));
}

double property_reward(const MolecularGraph& mol, const RewardSpec& spec) {
  return reward_for_value(molecular_weight(mol), spec);
}

}  // namespace safe
