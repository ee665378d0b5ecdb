#include "safe/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "safe/error.hpp"

namespace safe {

const std::vector<std::string>& special_tokens() {
  static const std::vector<std::string> specials{"<eos>", "<bos>", "<unk>", "<mask>", "<pad>"};
  return specials;
}

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Length of the token starting at i, or 0 when no class matches.
std::size_t match_token(std::string_view text, std::size_t i) {
  const char c = text[i];
  if (c == '[') {
    const std::size_t close = text.find(']', i + 1);
    if (close == std::string_view::npos) return 0;
    return close - i + 1;
  }
  if (c == '%') {
    if (i + 2 < text.size() && is_digit(text[i + 1]) && is_digit(text[i + 2])) return 3;
    return 0;
  }
  if ((c == 'C' && i + 1 < text.size() && text[i + 1] == 'l') ||
      (c == 'B' && i + 1 < text.size() && text[i + 1] == 'r')) {
    return 2;
  }
  static constexpr std::string_view singles = "BCNOPSFIbcnops*0123456789-=#:/\\().";
  return singles.find(c) != std::string_view::npos ? 1 : 0;
}

std::vector<PreToken> split(std::string_view text, bool lenient) {
  std::vector<PreToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = match_token(text, i);
    if (len == 0) {
      if (!lenient) {
        throw SafeError(ErrorCode::kUnrecognizedCharacter,
                        std::string("cannot tokenize '") + text[i] + "'", i);
      }
      len = 1;
    }
    out.push_back({std::string(text.substr(i, len)), i, i + len});
    i += len;
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else if (c == '\t') out += "\\t";
    else out += c;
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char n = s[++i];
      out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SafeError(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SafeError(ErrorCode::kIoError, "cannot write " + path);
  out << content;
}

}  // namespace

std::vector<PreToken> pretokenize_spans(std::string_view text) {
  if (text.empty()) throw SafeError(ErrorCode::kEmptyInput, "empty text");
  return split(text, false);
}

std::vector<std::string> pretokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : pretokenize_spans(text)) out.push_back(std::move(t.surface));
  return out;
}

Vocabulary::Vocabulary() {
  for (const auto& s : special_tokens()) add(s);
}

int Vocabulary::id_of(std::string_view surface) const {
  const auto it = ids_.find(surface);
  return it == ids_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view surface) const { return ids_.find(surface) != ids_.end(); }

int Vocabulary::add(const std::string& surface) {
  const auto it = ids_.find(surface);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(surfaces_.size());
  surfaces_.push_back(surface);
  ids_.emplace(surface, id);
  return id;
}

void Vocabulary::add_merge(const std::string& left, const std::string& right) {
  merges_.emplace_back(left, right);
}

std::string Vocabulary::vocab_text() const {
  std::string out;
  for (const auto& s : surfaces_) out += escape(s) + "\n";
  return out;
}

std::string Vocabulary::merges_text() const {
  std::string out;
  for (const auto& [l, r] : merges_) out += escape(l) + "\t" + escape(r) + "\n";
  return out;
}

Vocabulary Vocabulary::from_text(std::string_view vocab, std::string_view merges) {
  const auto lines = lines_of(vocab);
  if (lines.size() < special_tokens().size()) {
    throw SafeError(ErrorCode::kInvalidArgument, "vocabulary lacks the special tokens");
  }
  for (std::size_t i = 0; i < special_tokens().size(); ++i) {
    if (unescape(lines[i]) != special_tokens()[i]) {
      throw SafeError(ErrorCode::kInvalidArgument, "vocabulary line " + std::to_string(i) +
                                                       " must be " + special_tokens()[i]);
    }
  }
  Vocabulary v;
  for (std::size_t i = special_tokens().size(); i < lines.size(); ++i) {
    const std::string s = unescape(lines[i]);
    if (v.contains(s)) throw SafeError(ErrorCode::kInvalidArgument, "duplicate surface " + s);
    v.add(s);
  }
  for (const auto& line : lines_of(merges)) {
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw SafeError(ErrorCode::kInvalidArgument, "bad merge line: " + line);
    v.add_merge(unescape(std::string_view(line).substr(0, tab)),
                unescape(std::string_view(line).substr(tab + 1)));
  }
  return v;
}

void Vocabulary::save(const std::string& vocab_path, const std::string& merges_path) const {
  write_file(vocab_path, vocab_text());
  write_file(merges_path, merges_text());
}

Vocabulary Vocabulary::load(const std::string& vocab_path, const std::string& merges_path) {
  return from_text(read_file(vocab_path), read_file(merges_path));
}

std::size_t base_vocab_size(const std::vector<std::vector<std::string>>& corpus) {
  std::vector<std::string> alphabet;
  for (const auto& line : corpus) alphabet.insert(alphabet.end(), line.begin(), line.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  return alphabet.size() + special_tokens().size();
}

Vocabulary train_bpe(const std::vector<std::vector<std::string>>& corpus, std::size_t target_vocab) {
  if (corpus.empty()) throw SafeError(ErrorCode::kEmptyCorpus, "no training lines");
  const std::size_t base = base_vocab_size(corpus);
  if (target_vocab < base) {
    throw SafeError(ErrorCode::kTargetTooSmall, "target " + std::to_string(target_vocab) +
                                                    " is below the base alphabet size " +
                                                    std::to_string(base));
  }
  Vocabulary vocab;
  std::vector<std::string> alphabet;
  for (const auto& line : corpus) alphabet.insert(alphabet.end(), line.begin(), line.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  for (const auto& s : alphabet) vocab.add(s);

  // Identical lines are counted once with a weight.
  std::map<std::vector<int>, long> weighted;
  for (const auto& line : corpus) {
    std::vector<int> ids;
    ids.reserve(line.size());
    for (const auto& s : line) ids.push_back(vocab.id_of(s));
    ++weighted[ids];
  }
  std::vector<std::pair<std::vector<int>, long>> words(weighted.begin(), weighted.end());

  while (vocab.size() < target_vocab) {
    std::map<std::pair<int, int>, long> counts;
    for (const auto& [w, n] : words) {
      for (std::size_t i = 0; i + 1 < w.size(); ++i) counts[{w[i], w[i + 1]}] += n;
    }
    const std::pair<int, int>* best = nullptr;
    long best_count = 0;
    for (const auto& [pair, n] : counts) {
      if (n > best_count) {
        best = &pair;
        best_count = n;
      } else if (n == best_count && best) {
        const auto key = std::tie(vocab.surface(pair.first), vocab.surface(pair.second));
        if (key < std::tie(vocab.surface(best->first), vocab.surface(best->second))) best = &pair;
      }
    }
    if (!best || best_count < 2) break;
    const auto [l, r] = *best;
    vocab.add_merge(vocab.surface(l), vocab.surface(r));
    const int merged = vocab.add(vocab.surface(l) + vocab.surface(r));
    for (auto& [w, n] : words) {
      std::vector<int> next;
      next.reserve(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i + 1 < w.size() && w[i] == l && w[i + 1] == r) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(w[i]);
        }
      }
      w = std::move(next);
    }
  }
  return vocab;
}

TokenStream encode_tokens(std::string_view text, const Vocabulary& vocab, bool framed) {
  std::vector<PreToken> pieces = split(text, true);
  std::map<std::pair<std::string, std::string>, std::size_t> rank;
  for (std::size_t k = 0; k < vocab.merges().size(); ++k) rank.emplace(vocab.merges()[k], k);

  while (pieces.size() > 1) {
    std::size_t best_rank = rank.size();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      const auto it = rank.find({pieces[i].surface, pieces[i + 1].surface});
      if (it != rank.end()) best_rank = std::min(best_rank, it->second);
    }
    if (best_rank == rank.size()) break;
    const auto& [l, r] = vocab.merges()[best_rank];
    std::vector<PreToken> next;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i + 1 < pieces.size() && pieces[i].surface == l && pieces[i + 1].surface == r) {
        next.push_back({l + r, pieces[i].start, pieces[i + 1].end});
        ++i;
      } else {
        next.push_back(std::move(pieces[i]));
      }
    }
    pieces = std::move(next);
  }

  TokenStream out;
  if (framed) {
    out.tokens.push_back(kBosId);
    out.text_offsets.emplace_back(0, 0);
  }
  for (const auto& p : pieces) {
    out.tokens.push_back(vocab.id_of(p.surface));
    out.text_offsets.emplace_back(p.start, p.end);
  }
  if (framed) {
    out.tokens.push_back(kEosId);
    out.text_offsets.emplace_back(text.size(), text.size());
  }
  return out;
}

std::string decode_tokens(const std::vector<int>& tokens, const Vocabulary& vocab) {
  std::string out;
  for (int t : tokens) {
    if (t == kEosId || t == kBosId || t == kMaskId || t == kPadId) continue;
    out += vocab.surface(t);
  }
  return out;
}

}  // namespace safe
