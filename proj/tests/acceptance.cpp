// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "safe/codec.hpp"
#include "safe/error.hpp"
#include "safe/genlab.hpp"
#include "safe/match.hpp"
#include "safe/pipeline.hpp"
#include "safe/properties.hpp"
#include "safe/smiles.hpp"
#include "safe/tokenizer.hpp"
#include "test_util.hpp"

using namespace safe;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
};

int failed = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && dt > limit_s) {
    out.ok = false;
    out.note += " (over time limit)";
  }
  if (!out.ok) ++failed;
  std::printf("[%s] %2d %-32s %7.2fs  %s\n", out.ok ? "PASS" : "FAIL", id, title.c_str(), dt, out.note.c_str());
  std::fflush(stdout);
}

std::vector<std::string> split_blocks(const std::string& text) {
  std::vector<std::string> blocks;
  std::stringstream ss(text);
  std::string b;
  while (std::getline(ss, b, '.')) blocks.push_back(b);
  return blocks;
}

std::string join_blocks(const std::vector<std::string>& blocks) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) out += (i ? "." : "") + blocks[i];
  return out;
}

// Largest ring-closure number written in a SMILES string, read off the text.
int max_ring_digit_in_text(const std::string& smi) {
  int best = 0;
  bool in_bracket = false;
  for (std::size_t i = 0; i < smi.size(); ++i) {
    const char c = smi[i];
    if (c == '[') in_bracket = true;
    else if (c == ']') in_bracket = false;
    else if (in_bracket) continue;
    else if (c == '%') {
      best = std::max(best, std::stoi(smi.substr(i + 1, 2)));
      i += 2;
    } else if (c >= '0' && c <= '9') {
      best = std::max(best, c - '0');
    }
  }
  return best;
}

struct Encoded {
  MolecularGraph mol;
  EncodeResult enc;
};

const std::vector<Encoded>& corpus_encoded() {
  static const std::vector<Encoded> all = [] {
    std::vector<Encoded> out;
    for (const auto& line : testutil::corpus()) {
      auto mol = parse_smiles(line);
      auto enc = encode_safe(mol);
      out.push_back({std::move(mol), std::move(enc)});
    }
    return out;
  }();
  return all;
}

MolecularGraph without_wildcards(const MolecularGraph& g) {
  std::vector<int> keep;
  for (int a = 0; a < static_cast<int>(g.size()); ++a) {
    if (!g.atom(a).is_wildcard()) keep.push_back(a);
  }
  return g.subgraph(keep);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const auto& corpus = corpus_encoded();
  const std::string n = std::to_string(corpus.size());

  report(1, "SAFE strings parse as SMILES", 10.0, [&] {
    int bad = 0;
    for (const auto& e : corpus) {
      try {
        parse_smiles(e.enc.safe.text);
      } catch (const SafeError&) {
        ++bad;
      }
    }
    return Outcome{bad == 0 && corpus.size() == 1000, std::to_string(bad) + " of " + n + " failed"};
  });

  report(2, "round-trip fidelity", 30.0, [&] {
    int bad = 0;
    for (const auto& e : corpus) {
      if (canonical_smiles(decode_safe(e.enc.safe.text)) != canonical_smiles(e.mol)) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + " of " + n + " differ"};
  });

  report(3, "fragment permutation invariance", 60.0, [&] {
    int bad = 0;
    int checked = 0;
    for (const auto& e : corpus) {
      const std::string expected = canonical_smiles(e.mol);
      auto blocks = split_blocks(e.enc.safe.text);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::mt19937_64 rng(seed * 7919 + 1);
        std::shuffle(blocks.begin(), blocks.end(), rng);
        ++checked;
        if (canonical_smiles(decode_safe(join_blocks(blocks))) != expected) ++bad;
        ++checked;
        if (canonical_smiles(decode_safe(randomize_safe(e.enc.safe.text, seed).text)) != expected) ++bad;
      }
    }
    return Outcome{bad == 0, std::to_string(bad) + " of " + std::to_string(checked) + " differ"};
  });

  report(4, "attachment numbering and order", 0.0, [&] {
    int bad = 0;
    int multi = 0;
    for (const auto& e : corpus) {
      const auto blocks = split_blocks(e.enc.safe.text);
      ParseOptions opt;
      opt.allow_open_rings = true;
      int prev = 1 << 30;
      for (const auto& b : blocks) {
        const int heavy = parse_smiles_detailed(b, opt).graph.heavy_atom_count();
        if (heavy > prev) ++bad;
        prev = heavy;
      }
      const auto& digits = e.enc.safe.attachment_digits;
      if (digits.empty()) continue;
      ++multi;
      const int expected = max_ring_digit_in_text(canonical_smiles(e.mol)) + 1;
      if (*std::min_element(digits.begin(), digits.end()) != expected) ++bad;
      if (e.enc.report.first_attachment_digit != expected) ++bad;
    }
    return Outcome{bad == 0, std::to_string(bad) + " violations, " + std::to_string(multi) + " multi-fragment"};
  });

  report(5, "constraint satisfaction", 120.0, [&] {
    std::vector<std::string> texts;
    for (const auto& e : corpus) texts.push_back(e.enc.safe.text);
    std::vector<std::vector<std::string>> pre;
    for (const auto& t : texts) pre.push_back(pretokenize(t));
    const auto vocab = train_bpe(pre, base_vocab_size(pre) + 64);
    const auto model = train_ngram(texts, vocab, 3);

    struct Spec {
      Task task;
      std::vector<std::string> mols;
      std::string reference;
      int sites = 1;
    };
    const std::vector<Spec> specs = {
        {Task::kScaffoldDecoration, {"*c1ccc(*)cc1"}},
        {Task::kScaffoldDecoration, {"*C1CCN(*)CC1"}},
        {Task::kScaffoldDecoration, {"O=C(*)c1ccccc1"}},
        {Task::kScaffoldDecoration, {"*c1ccncc1"}},
        {Task::kScaffoldDecoration, {"*c1ccc2[nH]ccc2c1"}},
        {Task::kMotifExtension, {"*C(=O)Nc1ccccc1"}},
        {Task::kMotifExtension, {"*c1ccsc1"}},
        {Task::kMotifExtension, {"*OC"}},
        {Task::kMotifExtension, {"*N1CCOCC1"}},
        {Task::kMotifExtension, {"*c1cccnc1"}},
        {Task::kLinkerDesign, {"*c1ccccc1", "*C1CCNCC1"}},
        {Task::kLinkerDesign, {"*c1ccncc1", "*c1ccco1"}},
        {Task::kLinkerDesign, {"*C(=O)O", "*c1ccccc1"}},
        {Task::kLinkerDesign, {"*N1CCOCC1", "*c1ccc(F)cc1"}},
        {Task::kLinkerDesign, {"*c1ccsc1", "*C1CC1"}},
        {Task::kScaffoldMorphing, {"*c1ccccc1", "*C"}, "*c1ccc(*)cc1"},
        {Task::kScaffoldMorphing, {"*c1ccncc1", "*OC"}, "*C1CCN(*)CC1"},
        {Task::kScaffoldMorphing, {"*F", "*c1ccccc1"}, "*C(=O)N*"},
        {Task::kScaffoldMorphing, {"*N1CCOCC1", "*C"}, "*c1ccccc1*"},
        {Task::kScaffoldMorphing, {"*Cl", "*c1ccco1"}, "*CC*"},
        {Task::kSuperstructure, {"c1ccccc1"}, "", 1},
        {Task::kSuperstructure, {"C1CCNCC1"}, "", 2},
        {Task::kSuperstructure, {"c1ccncc1"}, "", 1},
        {Task::kSuperstructure, {"CC(=O)N"}, "", 1},
        {Task::kSuperstructure, {"c1ccoc1"}, "", 2},
    };

    int accepted = 0;
    int total = 0;
    int unsatisfied = 0;
    int open = 0;
    std::vector<int> per_task(6, 0);
    std::uint64_t seed = 11;
    for (const auto& s : specs) {
      PromptInputs in;
      for (const auto& m : s.mols) in.molecules.push_back(parse_smiles(m));
      if (!s.reference.empty()) in.reference = parse_smiles(s.reference);
      in.sites = s.sites;
      in.seed = seed;
      const auto prompt = make_prompt(s.task, in);
      SampleOptions opt;
      opt.n_samples = 40;
      opt.seed = seed++;
      opt.max_len = 64;
      const auto core = without_wildcards(prompt.constraint);
      for (const auto& sample : complete_prefix(model, prompt, opt)) {
        ++total;
        if (!sample.accepted) continue;
        ++accepted;
        ++per_task[static_cast<int>(s.task)];
        ParseOptions po;
        po.allow_open_rings = true;
        const auto parsed = parse_smiles_detailed(sample.text, po);
        if (!parsed.open_rings.empty()) ++open;
        MatchOptions mo;
        mo.max_results = 1;
        if (match_substructure(core, parsed.graph, mo).empty()) ++unsatisfied;
      }
    }
    const bool every_task =
        std::all_of(per_task.begin() + 1, per_task.end(), [](int c) { return c > 0; });
    std::string note = std::to_string(accepted) + "/" + std::to_string(total) + " accepted, " +
                       std::to_string(unsatisfied) + " unsatisfied, " + std::to_string(open) + " open; per task";
    for (int t = 1; t < 6; ++t) note += " " + std::to_string(per_task[t]);
    return Outcome{unsatisfied == 0 && open == 0 && every_task, note};
  });

  report(6, "matcher oracle equivalence", 0.0, [&] {
    const std::vector<std::string> patterns = {
        "C", "O", "N", "c", "*", "CC", "C=O", "C#N", "CO", "C*", "cc", "c:c", "CCC", "CC=O", "C(C)C",
        "*C*", "CCO", "C1CC1", "NC=O", "OCCO", "C(C)(C)C", "cccc", "CC(=O)O", "C1CCC1", "[O-]",
    };
    const std::vector<std::string> targets = {
        "C", "CC", "CCO", "CC(=O)O", "CC(C)C", "C1CC1", "C1CCC1", "c1ccccc1", "Cc1ccccc1", "OCCO",
        "CC#N", "NC(=O)C", "C1CCCCC1", "CC(C)(C)C", "CCCCCCCC", "C1CC1C1CC1", "OC1CCCC1O", "C=CC=C",
        "CC(=O)[O-]", "c1ccoc1", "C1CCC2CC12", "NCCN", "CCOCC", "OC(=O)C(=O)O", "CC(C)(O)C#N", "*CC*",
    };
    int pairs = 0;
    int mismatches = 0;
    for (const auto& p : patterns) {
      const auto pg = parse_smiles(p);
      for (const auto& t : targets) {
        const auto tg = parse_smiles(t);
        if (pg.size() > 8 || tg.size() > 8) continue;
        ++pairs;
        const auto got = match_substructure(pg, tg);
        const std::set<std::vector<int>> mine(got.begin(), got.end());
        if (mine != oracle::all_matches(pg, tg)) ++mismatches;
      }
    }
    return Outcome{pairs >= 500 && mismatches == 0,
                   std::to_string(pairs) + " pairs, " + std::to_string(mismatches) + " discrepancies"};
  });

  report(7, "louvain quality", 60.0, [&] {
    const auto graphs = oracle::connected_graphs_up_to(8);
    int count = 0;
    int below = 0;
    double worst = 1.0;
    for (int size = 2; size <= 8; ++size) {
      for (const auto& sg : graphs[size]) {
        const auto g = oracle::to_community_graph(sg);
        std::vector<int> order(static_cast<std::size_t>(g.node_count));
        std::iota(order.begin(), order.end(), 0);
        const double got = louvain(g, order).modularity;
        const double best = oracle::best_modularity(g);
        ++count;
        if (best <= 1e-12) {
          if (got < best - 1e-9) ++below;
          continue;
        }
        worst = std::min(worst, got / best);
        if (got < 0.95 * best - 1e-12) ++below;
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d graphs, %d below 0.95, worst ratio %.4f", count, below, worst);
    return Outcome{below == 0 && count == 1 + 2 + 6 + 21 + 112 + 853 + 11117, buf};
  });

  report(8, "tokenizer losslessness", 0.0, [&] {
    int bad = 0;
    std::vector<std::vector<std::string>> pre;
    for (const auto& e : corpus) {
      for (const auto& line : {canonical_smiles(e.mol), e.enc.safe.text}) {
        const auto toks = pretokenize(line);
        std::string joined;
        for (const auto& t : toks) joined += t;
        if (joined != line) ++bad;
      }
      pre.push_back(pretokenize(e.enc.safe.text));
    }
    const auto a = train_bpe(pre, base_vocab_size(pre) + 100);
    const auto b = train_bpe(pre, base_vocab_size(pre) + 100);
    const bool same = a.vocab_text() == b.vocab_text() && a.merges_text() == b.merges_text();
    return Outcome{bad == 0 && same, std::to_string(bad) + " lossy lines, training " +
                                         (same ? "deterministic" : "NOT deterministic")};
  });

  report(9, "reward formula", 0.0, [&] {
    const auto mol = parse_smiles("CCO");
    const double mw = molecular_weight(mol);
    const double expected[] = {1.0, 0.5, 1.0 / 3.0};
    const double deviations[] = {0.0, 2.0, 4.0};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (double sign : {1.0, -1.0}) {
        worst = std::max(worst, std::abs(property_reward(mol, {mw + sign * deviations[i], 0.5}) - expected[i]));
        worst = std::max(worst, std::abs(reward_for_value(10.0, {10.0 + sign * deviations[i], 0.5}) - expected[i]));
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max error %.3g", worst);
    return Outcome{worst <= 1e-12, buf};
  });

  report(10, "metrics definitions", 0.0, [&] {
    bool ok = true;
    const auto a = evaluate_set({"C", "C"});
    ok = ok && a.validity == 1.0 && a.uniqueness == 0.5 && a.diversity == 0.0;
    const auto b = evaluate_set({"C", "not_a_molecule"});
    ok = ok && b.validity == 0.5;
    const auto c = evaluate_set({"c12ccccc1.C2C", "C(C)c1ccccc1", "CCc1ccccc1", "c1ccccc1CC"});
    ok = ok && c.validity == 1.0 && c.uniqueness == 0.25 && c.diversity == 0.0;
    const auto d = evaluate_set({"bad", "also bad"});
    ok = ok && d.validity == 0.0 && d.uniqueness == 0.0 && d.diversity == 0.0;
    return Outcome{ok, ok ? "all examples exact" : "mismatch"};
  });

  report(11, "parallel determinism", 0.0, [&] {
    const auto dir = std::filesystem::temp_directory_path() / "safe_acceptance";
    std::filesystem::create_directories(dir);
    std::string outputs[2];
    std::string reports[2];
    const int threads[2] = {1, 8};
    for (int k = 0; k < 2; ++k) {
      ConvertConfig cfg;
      cfg.input_path = std::string(SAFE_DATA_DIR) + "/corpus.smi";
      cfg.output_path = (dir / ("out" + std::to_string(k) + ".safe")).string();
      cfg.report_path = (dir / ("report" + std::to_string(k) + ".tsv")).string();
      cfg.threads = threads[k];
      cfg.chunk_lines = 97;
      const auto stats = run_convert(cfg);
      if (!stats.passed || stats.n_ok != stats.n_in) return Outcome{false, "conversion failed"};
      outputs[k] = read_file(cfg.output_path);
      reports[k] = read_file(cfg.report_path);
    }
    std::filesystem::remove_all(dir);
    const bool same = outputs[0] == outputs[1] && reports[0] == reports[1] && !outputs[0].empty();
    return Outcome{same, same ? "1 vs 8 threads byte-identical" : "outputs differ"};
  });

  std::printf("%d criteria failed\n", failed);
  return failed;
}
