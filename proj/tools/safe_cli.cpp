// Command-line front end: corpus conversion, checks, tokenizer and sampler
// training, sampling, design tasks and metrics.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "safe/codec.hpp"
#include "safe/error.hpp"
#include "safe/genlab.hpp"
#include "safe/parallel.hpp"
#include "safe/pipeline.hpp"
#include "safe/smiles.hpp"
#include "safe/tokenizer.hpp"

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw safe::SafeError(safe::ErrorCode::kIoError, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) return fields;
    start = tab + 1;
  }
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw safe::SafeError(safe::ErrorCode::kIoError, "cannot write " + path);
  return file;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_samples(std::ostream& out, const std::string& prompt_id,
                   const std::vector<safe::Sample>& samples) {
  for (const auto& s : samples) {
    out << prompt_id << '\t' << s.text << '\t' << (s.accepted ? 1 : 0) << '\t' << s.reason << '\n';
  }
}

void write_metrics_row(std::ostream& out, const std::string& prompt_id,
                       const std::vector<safe::Sample>& samples) {
  std::vector<std::string> texts;
  int accepted = 0;
  for (const auto& s : samples) {
    texts.push_back(s.text);
    accepted += s.accepted ? 1 : 0;
  }
  const auto m = safe::evaluate_set(texts);
  out << prompt_id << '\t' << samples.size() << '\t' << accepted << '\t' << fmt(m.validity) << '\t'
      << fmt(m.uniqueness) << '\t' << fmt(m.diversity) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAFE molecular notation toolkit"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads (SAFE_THREADS overrides)")->check(CLI::PositiveNumber);

  // convert
  safe::ConvertConfig conv;
  double max_exclusion = 1.0;
  bool non_canonical = false;
  std::string rule_file;
  auto* convert = app.add_subcommand("convert", "SMILES lines to SAFE lines");
  convert->add_option("-i,--input", conv.input_path)->required();
  convert->add_option("-o,--output", conv.output_path)->required();
  convert->add_option("--report", conv.report_path, "TSV report");
  convert->add_option("--rules", rule_file, "rule file (name TAB left TAB right)");
  convert->add_flag("--non-canonical", non_canonical);
  convert->add_flag("--exclude-unfragmentable", conv.exclude_unfragmentable);
  convert->add_option("--max-exclusion", max_exclusion, "fail above this excluded fraction");
  convert->add_option("--chunk", conv.chunk_lines)->check(CLI::PositiveNumber);

  // check
  safe::CheckConfig check_cfg;
  auto* check = app.add_subcommand("check", "round-trip check of SAFE lines");
  check->add_option("-i,--input", check_cfg.input_path)->required();
  check->add_option("--report", check_cfg.report_path);

  // tokenizer
  std::string tok_in, vocab_path, merges_path, tok_out;
  std::size_t vocab_size = 0;
  bool framed = false;
  auto* tok_train = app.add_subcommand("tokenize-train", "train BPE merges");
  tok_train->add_option("-i,--input", tok_in)->required();
  tok_train->add_option("--vocab-size", vocab_size)->required();
  tok_train->add_option("--vocab", vocab_path)->required();
  tok_train->add_option("--merges", merges_path)->required();
  auto* tok_apply = app.add_subcommand("tokenize-apply", "text lines to token id lines");
  tok_apply->add_option("-i,--input", tok_in)->required();
  tok_apply->add_option("--vocab", vocab_path)->required();
  tok_apply->add_option("--merges", merges_path)->required();
  tok_apply->add_option("-o,--output", tok_out);
  tok_apply->add_flag("--framed", framed, "add BOS/EOS");

  // sampler
  int order = 3;
  std::string model_path, samples_out;
  auto* sampler_train = app.add_subcommand("sampler-train", "train the n-gram sampler");
  sampler_train->add_option("-i,--input", tok_in)->required();
  sampler_train->add_option("--vocab", vocab_path)->required();
  sampler_train->add_option("--merges", merges_path)->required();
  sampler_train->add_option("--order", order)->check(CLI::Range(1, 5));
  sampler_train->add_option("-o,--output", model_path)->required();

  safe::SampleOptions sopt;
  sopt.n_samples = 10;
  auto* sample = app.add_subcommand("sample", "de novo sampling");
  sample->add_option("--model", model_path)->required();
  sample->add_option("--n", sopt.n_samples)->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", sopt.seed);
  sample->add_option("--temperature", sopt.temperature)->check(CLI::NonNegativeNumber);
  sample->add_option("--max-len", sopt.max_len)->check(CLI::PositiveNumber);
  sample->add_option("-o,--output", samples_out);

  std::string task, spec_path, metrics_out;
  auto* design = app.add_subcommand("design", "fragment-constrained design");
  design->add_option("--task", task)
      ->required()
      ->check(CLI::IsMember({"decorate", "motif", "linker", "morph", "super"}));
  design->add_option("--spec", spec_path, "TSV: task, inputs..., key=value options")->required();
  design->add_option("--model", model_path)->required();
  design->add_option("--n", sopt.n_samples)->check(CLI::NonNegativeNumber);
  design->add_option("--seed", sopt.seed);
  design->add_option("--temperature", sopt.temperature)->check(CLI::NonNegativeNumber);
  design->add_option("--max-len", sopt.max_len)->check(CLI::PositiveNumber);
  design->add_option("-o,--output", samples_out);
  design->add_option("--metrics", metrics_out, "per-prompt metrics TSV");

  std::string metrics_in, reference;
  auto* metrics = app.add_subcommand("metrics", "validity, uniqueness, diversity of SAFE lines");
  metrics->add_option("-i,--input", metrics_in)->required();
  metrics->add_option("--reference", reference, "reference SMILES");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert) {
      conv.threads = threads;
      conv.canonical = !non_canonical;
      conv.max_exclusion_ratio = max_exclusion;
      if (!rule_file.empty()) conv.rule_file = rule_file;
      const auto stats = safe::run_convert(conv);
      std::cerr << "n_in=" << stats.n_in << " n_ok=" << stats.n_ok << " n_fallback=" << stats.n_fallback
                << " n_excluded=" << stats.n_excluded << " wall_time=" << fmt(stats.wall_time) << "s\n";
      return stats.passed ? 0 : 1;
    }
    if (*check) {
      check_cfg.threads = threads;
      const auto report = safe::run_roundtrip_check(check_cfg);
      for (const auto& f : report.failures) {
        std::cerr << "line " << f.line << ": " << f.reason << '\n';
      }
      std::cerr << report.n_lines << " lines, " << report.failures.size() << " failures\n";
      return report.passed() ? 0 : 1;
    }
    if (*tok_train) {
      std::vector<std::vector<std::string>> corpus;
      for (const auto& line : read_lines(tok_in)) corpus.push_back(safe::pretokenize(line));
      const auto vocab = safe::train_bpe(corpus, vocab_size);
      vocab.save(vocab_path, merges_path);
      std::cerr << "vocabulary " << vocab.size() << ", merges " << vocab.merges().size() << '\n';
      return 0;
    }
    if (*tok_apply) {
      const auto vocab = safe::Vocabulary::load(vocab_path, merges_path);
      const auto lines = read_lines(tok_in);
      const auto encoded = safe::ordered_map(lines, safe::resolve_threads(threads), [&](const std::string& l) {
        return safe::encode_tokens(l, vocab, framed).tokens;
      });
      std::ofstream file;
      std::ostream& out = output(tok_out, file);
      for (const auto& ids : encoded) {
        for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? " " : "") << ids[k];
        out << '\n';
      }
      return 0;
    }
    if (*sampler_train) {
      const auto vocab = safe::Vocabulary::load(vocab_path, merges_path);
      safe::train_ngram(read_lines(tok_in), vocab, order).save(model_path);
      return 0;
    }
    if (*sample) {
      const auto model = safe::NGramModel::load(model_path);
      const auto samples = safe::sample_denovo(model, sopt);
      std::ofstream file;
      std::ostream& out = output(samples_out, file);
      out << "prompt\ttext\taccepted\treason\n";
      write_samples(out, "denovo", samples);
      return 0;
    }
    if (*design) {
      const auto model = safe::NGramModel::load(model_path);
      const safe::Task wanted = safe::parse_task(task);
      std::ofstream file;
      std::ostream& out = output(samples_out, file);
      out << "prompt\ttext\taccepted\treason\n";
      std::ofstream mfile;
      if (!metrics_out.empty()) {
        mfile.open(metrics_out, std::ios::binary);
        if (!mfile) throw safe::SafeError(safe::ErrorCode::kIoError, "cannot write " + metrics_out);
        mfile << "prompt\tn\taccepted\tvalidity\tuniqueness\tdiversity\n";
      }
      int index = 0;
      for (const auto& line : read_lines(spec_path)) {
        if (line[0] == '#') continue;
        const auto fields = split_tabs(line);
        if (safe::parse_task(fields[0]) != wanted) continue;
        safe::PromptInputs inputs;
        for (std::size_t k = 1; k < fields.size(); ++k) {
          const auto eq = fields[k].find('=');
          const std::string key = eq == std::string::npos ? "" : fields[k].substr(0, eq);
          const std::string value = eq == std::string::npos ? "" : fields[k].substr(eq + 1);
          if (key == "k") inputs.sites = std::stoi(value);
          else if (key == "seed") inputs.seed = std::stoull(value);
          else if (key == "reference") inputs.reference = safe::parse_smiles(value);
          else inputs.molecules.push_back(safe::parse_smiles(fields[k]));
        }
        const auto prompt = safe::make_prompt(wanted, inputs);
        auto opts = sopt;
        opts.seed = sopt.seed + static_cast<std::uint64_t>(index);
        const auto samples = safe::complete_prefix(model, prompt, opts);
        const std::string id = std::to_string(index++);
        write_samples(out, id, samples);
        if (mfile.is_open()) write_metrics_row(mfile, id, samples);
      }
      return 0;
    }
    if (*metrics) {
      std::optional<safe::MolecularGraph> ref;
      if (!reference.empty()) ref = safe::parse_smiles(reference);
      const auto m = safe::evaluate_set(read_lines(metrics_in), ref ? &*ref : nullptr);
      std::cout << "validity\tuniqueness\tdiversity\tdistance_to_reference\n"
                << fmt(m.validity) << '\t' << fmt(m.uniqueness) << '\t' << fmt(m.diversity) << '\t'
                << (m.distance_to_reference ? fmt(*m.distance_to_reference) : "") << '\n';
      return 0;
    }
  } catch (const safe::SafeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
