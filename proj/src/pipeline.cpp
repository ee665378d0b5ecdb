#include "safe/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "safe/error.hpp"
#include "safe/parallel.hpp"
#include "safe/smiles.hpp"

namespace safe {

int resolve_threads(int requested) {
  if (const char* env = std::getenv("SAFE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(requested, 1);
}

namespace {

// Reads up to `limit` lines; false once the stream is exhausted and nothing
// was read.
bool read_chunk(std::istream& in, std::size_t limit, std::vector<std::string>& lines) {
  lines.clear();
  std::string line;
  while (lines.size() < limit && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return !lines.empty();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SafeError(ErrorCode::kIoError, "cannot write " + path);
  return out;
}

}  // namespace

LineResult convert_line(const std::string& smiles, const std::vector<BondCutRule>& rules,
                        bool canonical, bool exclude_unfragmentable) {
  LineResult r;
  try {
    const MolecularGraph mol = parse_smiles(smiles);
    const EncodeResult enc = encode_safe(mol, rules, canonical);
    r.safe = enc.safe.text;
    r.n_fragments = enc.report.n_fragments;
    r.source = enc.report.cut_rule_source;
    r.status = exclude_unfragmentable && enc.report.cut_rule_source == CutSource::kNone
                   ? "Unfragmentable"
                   : "ok";
  } catch (const SafeError& e) {
    r.status = std::string(error_code_name(e.code()));
  }
  return r;
}

ConversionStats run_convert(const ConvertConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.input_path == config.output_path) {
    throw SafeError(ErrorCode::kInvalidArgument, "input and output paths must differ");
  }
  const std::vector<BondCutRule> rules =
      config.rule_file ? load_rules(*config.rule_file) : default_rules();
  std::ifstream in(config.input_path, std::ios::binary);
  if (!in) throw SafeError(ErrorCode::kIoError, "cannot open " + config.input_path);
  std::ofstream out = open_out(config.output_path);
  std::ofstream report;
  if (!config.report_path.empty()) {
    report = open_out(config.report_path);
    report << "input_smiles\tsafe\tn_fragments\tsource\tstatus\n";
  }
  const int threads = resolve_threads(config.threads);

  ConversionStats stats;
  std::vector<std::string> lines;
  while (read_chunk(in, std::max<std::size_t>(config.chunk_lines, 1), lines)) {
    const auto results = ordered_map(lines, threads, [&](const std::string& line) {
      return convert_line(line, rules, config.canonical, config.exclude_unfragmentable);
    });
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const LineResult& r = results[i];
      ++stats.n_in;
      if (r.status == "ok") {
        ++stats.n_ok;
        if (r.source == CutSource::kLouvain) ++stats.n_fallback;
        out << r.safe << '\n';
      } else {
        ++stats.n_excluded;
      }
      if (report.is_open()) {
        report << lines[i] << '\t' << r.safe << '\t' << r.n_fragments << '\t'
               << cut_source_name(r.source) << '\t' << r.status << '\n';
      }
    }
  }
  stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  stats.passed = stats.n_in == 0 ||
                 static_cast<double>(stats.n_excluded) / static_cast<double>(stats.n_in) <=
                     config.max_exclusion_ratio;
  return stats;
}

std::string check_line(const std::string& safe_text) {
  try {
    const MolecularGraph mol = decode_safe(safe_text);
    const std::string expected = canonical_smiles(mol);
    const EncodeResult again = encode_safe(mol);
    const std::string got = canonical_smiles(decode_safe(again.safe.text));
    if (got != expected) return "re-encoding changed the molecule: " + expected + " -> " + got;
    return "";
  } catch (const SafeError& e) {
    return std::string(error_code_name(e.code()));
  }
}

CheckReport run_roundtrip_check(const CheckConfig& config) {
  std::ifstream in(config.input_path, std::ios::binary);
  if (!in) throw SafeError(ErrorCode::kIoError, "cannot open " + config.input_path);
  std::ofstream report;
  if (!config.report_path.empty()) {
    report = open_out(config.report_path);
    report << "line\ttext\treason\n";
  }
  const int threads = resolve_threads(config.threads);
  CheckReport result;
  std::vector<std::string> lines;
  while (read_chunk(in, std::max<std::size_t>(config.chunk_lines, 1), lines)) {
    const auto reasons = ordered_map(lines, threads, [](const std::string& l) { return check_line(l); });
    for (std::size_t i = 0; i < lines.size(); ++i) {
      ++result.n_lines;
      if (reasons[i].empty()) continue;
      result.failures.push_back({result.n_lines, lines[i], reasons[i]});
      if (report.is_open()) report << result.n_lines << '\t' << lines[i] << '\t' << reasons[i] << '\n';
    }
  }
  return result;
}

}  // namespace safe
