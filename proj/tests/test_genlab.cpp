#include <cmath>
#include <filesystem>
#include <functional>

#include "doctest.h"
#include "safe/codec.hpp"
#include "safe/error.hpp"
#include "safe/genlab.hpp"
#include "safe/match.hpp"
#include "safe/smiles.hpp"
#include "test_util.hpp"

using namespace safe;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const SafeError& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kInvalidArgument;
}

TaskPrompt prompt_for(Task task, std::vector<std::string> smiles, int sites = 1, std::uint64_t seed = 0) {
  PromptInputs in;
  for (const auto& s : smiles) in.molecules.push_back(parse_smiles(s));
  in.sites = sites;
  in.seed = seed;
  return make_prompt(task, in);
}

Vocabulary vocab_for(const std::vector<std::string>& texts, std::size_t extra) {
  std::vector<std::vector<std::string>> pre;
  for (const auto& t : texts) pre.push_back(pretokenize(t));
  return train_bpe(pre, base_vocab_size(pre) + extra);
}

const NGramModel& corpus_model() {
  static const NGramModel model = [] {
    std::vector<std::string> texts;
    for (const auto& line : testutil::corpus()) texts.push_back(encode_safe(parse_smiles(line)).safe.text);
    return train_ngram(texts, vocab_for(texts, 64), 3);
  }();
  return model;
}

}  // namespace

TEST_CASE("task names") {
  CHECK(parse_task("decorate") == Task::kScaffoldDecoration);
  CHECK(parse_task("linker") == Task::kLinkerDesign);
  CHECK(parse_task(task_name(Task::kScaffoldMorphing)) == Task::kScaffoldMorphing);
  CHECK_THROWS_AS(parse_task("fly"), SafeError);
}

TEST_CASE("prompt construction") {
  const auto deco = prompt_for(Task::kScaffoldDecoration, {"[*]c1ccc([*])cc1"});
  CHECK(deco.prefix == "c12ccc3cc1.");
  CHECK(deco.open_labels == std::vector<int>{2, 3});

  const auto linker = prompt_for(Task::kLinkerDesign, {"*c1ccccc1", "*C1CCNCC1"});
  CHECK(linker.prefix.back() == '.');
  CHECK(linker.open_labels.size() == 2);
  CHECK(std::count(linker.prefix.begin(), linker.prefix.end(), '.') == 2);

  const auto super = prompt_for(Task::kSuperstructure, {"c1ccccc1"}, 2, 5);
  CHECK(super.open_labels.size() == 2);
  CHECK(super.prefix == prompt_for(Task::kSuperstructure, {"c1ccccc1"}, 2, 5).prefix);

  CHECK(code_of([] { prompt_for(Task::kScaffoldDecoration, {"c1ccccc1"}); }) == ErrorCode::kNoWildcard);
  CHECK(code_of([] { prompt_for(Task::kMotifExtension, {"*CC*"}); }) == ErrorCode::kTooManyWildcards);
  CHECK(code_of([] { prompt_for(Task::kSuperstructure, {"C(F)(F)(F)F"}); }) == ErrorCode::kNoEligibleSite);
  CHECK(code_of([] { prompt_for(Task::kLinkerDesign, {"*C"}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("superstructure sites are distinct eligible atoms") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = prompt_for(Task::kSuperstructure, {"Cc1ccncc1"}, 3, seed);
    CHECK(p.open_labels.size() == 3);
    std::vector<int> owners;
    for (int a = 0; a < static_cast<int>(p.constraint.size()); ++a) {
      if (!p.constraint.atom(a).is_wildcard()) continue;
      const int owner = p.constraint.neighbors(a)[0].atom;
      CHECK(p.constraint.atom(owner).element != 7);
      owners.push_back(owner);
    }
    std::sort(owners.begin(), owners.end());
    CHECK(std::adjacent_find(owners.begin(), owners.end()) == owners.end());
  }
}

TEST_CASE("verification examples") {
  const auto deco = prompt_for(Task::kScaffoldDecoration, {"[*]c1ccc([*])cc1"});
  CHECK(verify_completion(deco, "c12ccc3cc1.C2.O3").accepted);
  const auto open = verify_completion(deco, "c12ccc3cc1.C2");
  CHECK(!open.accepted);
  CHECK(open.reason == "open label 3");
  CHECK(!verify_completion(deco, "c12ccc3cc1.").accepted);
  CHECK(!verify_completion(deco, "c12ccc3cc1.C2Q3").accepted);
  CHECK(verify_completion(deco, "c12ccc3cc1.C23").accepted);
  CHECK(code_of([&] { verify_completion(deco, "CC"); }) == ErrorCode::kPrefixMismatch);

  const auto linker = prompt_for(Task::kLinkerDesign, {"*c1ccccc1", "*C1CCNCC1"});
  const int a = linker.open_labels[0];
  const int b = linker.open_labels[1];
  const std::string la = ring_label_text(a);
  const std::string lb = ring_label_text(b);
  CHECK(verify_completion(linker, linker.prefix + "C" + la + "C" + lb).accepted);
  CHECK(!verify_completion(linker, linker.prefix + "C" + la + ".C" + lb).accepted);

  PromptInputs in;
  in.molecules = {parse_smiles("*c1ccccc1"), parse_smiles("*C")};
  in.reference = parse_smiles("*CC*");
  const auto morph = make_prompt(Task::kScaffoldMorphing, in);
  const std::string ma = ring_label_text(morph.open_labels[0]);
  const std::string mb = ring_label_text(morph.open_labels[1]);
  CHECK(!verify_completion(morph, morph.prefix + "C" + ma + "C" + mb).accepted);
  CHECK(verify_completion(morph, morph.prefix + "C" + ma + "OC" + mb).accepted);
}

TEST_CASE("core strings") {
  CHECK(fragment_core_string(parse_smiles("*CC*")) == fragment_core_string(parse_smiles("C(*)C*")));
  CHECK(fragment_core_string(parse_smiles("*CC*")) != fragment_core_string(parse_smiles("*COC*")));
}

TEST_CASE("ngram model") {
  const std::vector<std::string> texts{"CCO"};
  const auto vocab = vocab_for(texts, 0);
  const auto model = train_ngram(texts, vocab, 3);
  const auto p = model.distribution({kBosId});
  double total = 0.0;
  for (double x : p) total += x;
  CHECK(total == doctest::Approx(1.0));
  CHECK(p[kBosId] == 0.0);
  CHECK(p[kUnkId] == 0.0);
  CHECK(p[kMaskId] == 0.0);
  CHECK(p[kPadId] == 0.0);

  SampleOptions greedy;
  greedy.temperature = 0.0;
  greedy.n_samples = 3;
  for (const auto& s : sample_denovo(model, greedy)) {
    CHECK(s.text == "CCO");
    CHECK(s.accepted);
    CHECK(!s.forced_closure);
  }

  const auto back = NGramModel::from_json(model.to_json());
  CHECK(back.order() == 3);
  CHECK(back.distribution({kBosId, vocab.id_of("C")}) == model.distribution({kBosId, vocab.id_of("C")}));
  CHECK_THROWS_AS(train_ngram({}, vocab, 3), SafeError);
  CHECK_THROWS_AS(NGramModel::from_json("{"), SafeError);
}

TEST_CASE("sampling is deterministic and respects the prefix") {
  const auto& model = corpus_model();
  const auto deco = prompt_for(Task::kScaffoldDecoration, {"*c1ccc(*)cc1"});
  SampleOptions opt;
  opt.n_samples = 30;
  opt.seed = 4;
  opt.max_len = 48;
  const auto a = complete_prefix(model, deco, opt);
  const auto b = complete_prefix(model, deco, opt);
  REQUIRE(a.size() == 30);
  int accepted = 0;
  MatchOptions mo;
  mo.wildcards_injective = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].text == b[k].text);
    CHECK(a[k].text.rfind(deco.prefix, 0) == 0);
    CHECK(verify_completion(deco, a[k].text).accepted == a[k].accepted);
    if (!a[k].accepted) continue;
    ++accepted;
    CHECK(has_substructure(deco.constraint, decode_safe(a[k].text), mo));
  }
  CHECK(accepted >= 1);

  const auto denovo = sample_denovo(model, opt);
  for (const auto& s : denovo) {
    for (int id : encode_tokens(s.text, model.vocab()).tokens) CHECK(id < static_cast<int>(model.vocab().size()));
  }
}

TEST_CASE("model files") {
  const auto& model = corpus_model();
  const auto path = (std::filesystem::temp_directory_path() / "safe_ngram_test.json").string();
  model.save(path);
  const auto back = NGramModel::load(path);
  std::filesystem::remove(path);
  SampleOptions opt;
  opt.n_samples = 5;
  opt.seed = 9;
  const auto x = sample_denovo(model, opt);
  const auto y = sample_denovo(back, opt);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(x[k].text == y[k].text);
}

TEST_CASE("metrics") {
  const auto a = evaluate_set({"C", "C"});
  CHECK(a.validity == 1.0);
  CHECK(a.uniqueness == 0.5);
  CHECK(a.diversity == 0.0);
  CHECK(!a.distance_to_reference);
  CHECK(evaluate_set({"C", "not_a_molecule"}).validity == 0.5);
  CHECK(evaluate_set({"CCO", "OCC", "C(O)C"}).diversity == 0.0);
  const auto none = evaluate_set({});
  CHECK(none.validity == 0.0);
  CHECK(none.uniqueness == 0.0);

  const auto ref = parse_smiles("CCO");
  const auto d = evaluate_set({"CCO", "c1ccccc1"}, &ref);
  REQUIRE(d.distance_to_reference);
  CHECK(*d.distance_to_reference > 0.0);
  CHECK(*d.distance_to_reference < 1.0);
  CHECK(d.diversity > 0.0);
  CHECK(d.diversity <= 1.0);
}

TEST_CASE("reward") {
  CHECK(reward_for_value(3.0, {3.0, 0.5}) == 1.0);
  CHECK(reward_for_value(5.0, {3.0, 0.5}) == 0.5);
  CHECK(std::abs(reward_for_value(-1.0, {3.0, 0.5}) - 1.0 / 3.0) < 1e-15);
  CHECK(reward_for_value(10.0, {0.0, 0.5}) < reward_for_value(9.0, {0.0, 0.5}));
  const auto mol = parse_smiles("C");
  CHECK(property_reward(mol, {16.043, 0.5}) == doctest::Approx(1.0));
  CHECK(property_reward(mol, {100.0, 0.5}) > 0.0);
}
