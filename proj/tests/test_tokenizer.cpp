#include <filesystem>
#include <functional>

#include "doctest.h"
#include "safe/codec.hpp"
#include "safe/error.hpp"
#include "safe/smiles.hpp"
#include "safe/tokenizer.hpp"
#include "test_util.hpp"

using namespace safe;

namespace {

using Tokens = std::vector<std::string>;

std::vector<Tokens> corpus_safe_tokens() {
  std::vector<Tokens> out;
  for (const auto& line : testutil::corpus()) out.push_back(pretokenize(encode_safe(parse_smiles(line)).safe.text));
  return out;
}

}  // namespace

TEST_CASE("pretokenize examples") {
  CHECK(pretokenize("c12ccccc1") == Tokens{"c", "1", "2", "c", "c", "c", "c", "c", "1"});
  CHECK(pretokenize("C%10CC%10") == Tokens{"C", "%10", "C", "C", "%10"});
  CHECK(pretokenize("[NH2+]c1") == Tokens{"[NH2+]", "c", "1"});
  CHECK(pretokenize("ClCBr.O=C(N)S") == Tokens{"Cl", "C", "Br", ".", "O", "=", "C", "(", "N", ")", "S"});
  CHECK(pretokenize("F/C=C\\*") == Tokens{"F", "/", "C", "=", "C", "\\", "*"});
  const auto spans = pretokenize_spans("C[O-]");
  REQUIRE(spans.size() == 2);
  CHECK(spans[1].start == 1);
  CHECK(spans[1].end == 5);
}

TEST_CASE("special tokens") {
  const auto& s = special_tokens();
  REQUIRE(s.size() == kSpecialCount);
  CHECK(s[kEosId] == "<eos>");
  CHECK(s[kBosId] == "<bos>");
  CHECK(s[kUnkId] == "<unk>");
  CHECK(s[kMaskId] == "<mask>");
  CHECK(s[kPadId] == "<pad>");
  const Vocabulary v;
  CHECK(v.size() == kSpecialCount);
  CHECK(v.id_of("C") == kUnkId);
}

TEST_CASE("bpe training examples") {
  const std::vector<Tokens> corpus{{"C", "C", "O"}, {"C", "C", "O"}};
  CHECK(base_vocab_size(corpus) == kSpecialCount + 2);
  const auto one = train_bpe(corpus, kSpecialCount + 2 + 1);
  REQUIRE(one.merges().size() == 1);
  CHECK(one.merges()[0] == std::pair<std::string, std::string>{"C", "C"});
  CHECK(one.contains("CC"));
  CHECK(train_bpe(corpus, kSpecialCount + 2).merges().empty());
  // A pair seen once is not merged.
  CHECK(train_bpe({{"C", "C", "O"}}, 100).merges().empty());

  CHECK_THROWS_AS(train_bpe(corpus, kSpecialCount + 1), SafeError);
  CHECK_THROWS_AS(train_bpe({}, 50), SafeError);
}

TEST_CASE("bpe on the corpus") {
  const auto corpus = corpus_safe_tokens();
  const std::size_t target = base_vocab_size(corpus) + 80;
  const auto a = train_bpe(corpus, target);
  const auto b = train_bpe(corpus, target);
  CHECK(a.size() <= target);
  CHECK(a.vocab_text() == b.vocab_text());
  CHECK(a.merges_text() == b.merges_text());

  for (const auto& line : testutil::corpus()) {
    const std::string text = encode_safe(parse_smiles(line)).safe.text;
    const auto stream = encode_tokens(text, a);
    CHECK(decode_tokens(stream.tokens, a) == text);
    REQUIRE(stream.text_offsets.size() == stream.tokens.size());
    std::size_t pos = 0;
    for (std::size_t k = 0; k < stream.tokens.size(); ++k) {
      CHECK(stream.text_offsets[k].first == pos);
      pos = stream.text_offsets[k].second;
      CHECK(stream.tokens[k] < static_cast<int>(a.size()));
    }
    CHECK(pos == text.size());
  }

  const auto framed = encode_tokens("c12ccccc1.C2C", a, true);
  CHECK(framed.tokens.front() == kBosId);
  CHECK(framed.tokens.back() == kEosId);
  CHECK(decode_tokens(framed.tokens, a) == "c12ccccc1.C2C");
}

TEST_CASE("unknown surfaces map to unk") {
  const auto v = train_bpe({{"C", "C", "O"}}, kSpecialCount + 2);
  const auto stream = encode_tokens("CNC", v);
  REQUIRE(stream.tokens.size() == 3);
  CHECK(stream.tokens[1] == kUnkId);
  CHECK(stream.text_offsets[1] == std::pair<std::size_t, std::size_t>{1, 2});
}

TEST_CASE("vocabulary files") {
  const auto v = train_bpe(corpus_safe_tokens(), 60);
  const auto dir = std::filesystem::temp_directory_path() / "safe_tok_test";
  std::filesystem::create_directories(dir);
  const std::string vp = (dir / "vocab.txt").string();
  const std::string mp = (dir / "merges.txt").string();
  v.save(vp, mp);
  const auto back = Vocabulary::load(vp, mp);
  CHECK(back.surfaces() == v.surfaces());
  CHECK(back.merges() == v.merges());
  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS(Vocabulary::from_text("C\nO\n", ""), SafeError);
  CHECK_THROWS_AS(Vocabulary::load("/nonexistent/v", "/nonexistent/m"), SafeError);
}
