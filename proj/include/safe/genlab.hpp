#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "safe/molecule.hpp"
#include "safe/tokenizer.hpp"

namespace safe {

enum class Task {
  kDeNovo,
  kScaffoldDecoration,
  kMotifExtension,
  kLinkerDesign,
  kScaffoldMorphing,
  kSuperstructure,
};

std::string_view task_name(Task task);
// Accepts the CLI spellings (decorate, motif, linker, morph, super, denovo)
// and the long names.
Task parse_task(std::string_view name);

struct TaskPrompt {
  Task task = Task::kDeNovo;
  std::string prefix;
  std::vector<int> open_labels;
  // Input graph with wildcards kept; empty for de novo.
  MolecularGraph constraint;
  // Morphing only: canonical string of the scaffold to move away from.
  std::optional<std::string> reference_core;
};

struct PromptInputs {
  // Decoration, motif and superstructure use one molecule; linker and
  // morphing use two fragments.
  std::vector<MolecularGraph> molecules;
  // Morphing: the scaffold being replaced, wildcards at both ends.
  std::optional<MolecularGraph> reference;
  // Superstructure: number of random sites and their seed.
  int sites = 1;
  std::uint64_t seed = 0;
};

TaskPrompt make_prompt(Task task, const PromptInputs& inputs);

struct Verdict {
  bool accepted = false;
  std::string reason;  // empty when accepted
};

// Throws PrefixMismatch when `full_text` does not extend the prompt prefix.
Verdict verify_completion(const TaskPrompt& prompt, std::string_view full_text);

// Canonical string of a fragment with `*` on each attachment point.
std::string fragment_core_string(const MolecularGraph& fragment_with_wildcards);

class NGramModel {
 public:
  NGramModel() = default;
  NGramModel(int order, Vocabulary vocab);

  int order() const { return order_; }
  const Vocabulary& vocab() const { return vocab_; }

  // Counts one framed token stream (BOS ... EOS).
  void observe(const std::vector<int>& tokens);

  // Smoothed next-token distribution over the whole vocabulary; BOS, UNK,
  // MASK and PAD get zero. Unseen contexts back off to shorter ones.
  std::vector<double> distribution(const std::vector<int>& history) const;

  std::string to_json() const;
  static NGramModel from_json(std::string_view text);
  void save(const std::string& path) const;
  static NGramModel load(const std::string& path);

  static constexpr double kSmoothing = 0.01;

 private:
  int order_ = 1;
  Vocabulary vocab_;
  // Context (most recent token last) -> next token counts; contexts of every
  // length below the order are kept for backoff.
  std::map<std::vector<int>, std::map<int, long>> counts_;
};

// Framed streams of `texts` under `vocab`.
NGramModel train_ngram(const std::vector<std::string>& texts, const Vocabulary& vocab, int order);

struct SampleOptions {
  int n_samples = 1;
  std::uint64_t seed = 0;
  int max_len = 128;
  double temperature = 1.0;
};

struct Sample {
  std::string text;
  bool accepted = false;
  std::string reason;
  bool forced_closure = false;
};

// Continues the prompt prefix token by token. Tokens that leave the text
// unparseable as a SMILES prefix are masked, and EOS stays masked until the
// text is complete with every label closed. At max_len the text is closed
// by force.
std::vector<Sample> complete_prefix(const NGramModel& model, const TaskPrompt& prompt,
                                    const SampleOptions& options);

std::vector<Sample> sample_denovo(const NGramModel& model, const SampleOptions& options);

struct GenerationMetrics {
  double validity = 0.0;
  double uniqueness = 0.0;
  double diversity = 0.0;
  std::optional<double> distance_to_reference;
};

GenerationMetrics evaluate_set(const std::vector<std::string>& texts,
                               const MolecularGraph* reference = nullptr);

struct RewardSpec {
  double target = 0.0;
  double alpha = 0.5;
};

double reward_for_value(double value, const RewardSpec& spec);
// Molecular weight reward 1 / (1 + alpha * |MW - target|).
double property_reward(const MolecularGraph& mol, const RewardSpec& spec);

}  // namespace safe
