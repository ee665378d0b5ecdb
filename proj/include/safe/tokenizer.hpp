#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace safe {

inline constexpr int kEosId = 0;
inline constexpr int kBosId = 1;
inline constexpr int kUnkId = 2;
inline constexpr int kMaskId = 3;
inline constexpr int kPadId = 4;
inline constexpr int kSpecialCount = 5;

// "<eos>", "<bos>", "<unk>", "<mask>", "<pad>"
const std::vector<std::string>& special_tokens();

struct PreToken {
  std::string surface;
  std::size_t start;
  std::size_t end;
};

// Longest-match split into SMILES syntax units. Throws UnrecognizedCharacter
// with the offending offset.
std::vector<PreToken> pretokenize_spans(std::string_view text);
std::vector<std::string> pretokenize(std::string_view text);

class Vocabulary {
 public:
  // Specials only.
  Vocabulary();

  std::size_t size() const { return surfaces_.size(); }
  const std::string& surface(int id) const { return surfaces_.at(static_cast<std::size_t>(id)); }
  // UNK when absent.
  int id_of(std::string_view surface) const;
  bool contains(std::string_view surface) const;
  const std::vector<std::string>& surfaces() const { return surfaces_; }
  const std::vector<std::pair<std::string, std::string>>& merges() const { return merges_; }

  // Returns the id of `surface`, adding it if new.
  int add(const std::string& surface);
  void add_merge(const std::string& left, const std::string& right);

  // Vocabulary: one escaped surface per line, line k = id k.
  std::string vocab_text() const;
  // Merges: `left TAB right` per line in application order.
  std::string merges_text() const;
  static Vocabulary from_text(std::string_view vocab, std::string_view merges);

  void save(const std::string& vocab_path, const std::string& merges_path) const;
  static Vocabulary load(const std::string& vocab_path, const std::string& merges_path);

 private:
  std::vector<std::string> surfaces_;
  std::map<std::string, int, std::less<>> ids_;
  std::vector<std::pair<std::string, std::string>> merges_;
};

// BPE over pre-token streams: repeatedly merge the most frequent adjacent
// pair (ties: lexicographically smallest) while some pair occurs at least
// twice and the vocabulary is below `target_vocab`.
Vocabulary train_bpe(const std::vector<std::vector<std::string>>& corpus, std::size_t target_vocab);

// Size of the specials plus the distinct pre-tokens of `corpus`.
std::size_t base_vocab_size(const std::vector<std::vector<std::string>>& corpus);

struct TokenStream {
  std::vector<int> tokens;
  std::vector<std::pair<std::size_t, std::size_t>> text_offsets;
};

// Unrecognized characters and unknown surfaces become UNK; framing adds BOS
// and EOS with empty offsets at the ends.
TokenStream encode_tokens(std::string_view text, const Vocabulary& vocab, bool framed = false);

// Concatenates surfaces; EOS, BOS, MASK and PAD are dropped.
std::string decode_tokens(const std::vector<int>& tokens, const Vocabulary& vocab);

}  // namespace safe
