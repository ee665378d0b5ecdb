#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "safe/codec.hpp"
#include "safe/fragmenter.hpp"

namespace safe {

struct ConvertConfig {
  std::string input_path;
  std::string output_path;
  // TSV: input_smiles, safe, n_fragments, source, status. Skipped when empty.
  std::string report_path;
  int threads = 1;
  std::optional<std::string> rule_file;
  bool canonical = true;
  // Count single-block results as excluded.
  bool exclude_unfragmentable = false;
  // The run fails when n_excluded / n_in exceeds this.
  double max_exclusion_ratio = 1.0;
  std::size_t chunk_lines = 10000;
};

struct ConversionStats {
  std::size_t n_in = 0;
  std::size_t n_ok = 0;
  std::size_t n_fallback = 0;
  std::size_t n_excluded = 0;
  double wall_time = 0.0;
  bool passed = true;
};

struct LineResult {
  std::string safe;
  int n_fragments = 0;
  CutSource source = CutSource::kNone;
  // "ok" or a machine-readable exclusion code.
  std::string status;
};

LineResult convert_line(const std::string& smiles, const std::vector<BondCutRule>& rules,
                        bool canonical, bool exclude_unfragmentable);

// Streams the input in chunks; output holds one SAFE per converted line, in
// input order, whatever the thread count.
ConversionStats run_convert(const ConvertConfig& config);

struct CheckConfig {
  std::string input_path;
  std::string report_path;  // TSV: line, text, reason. Skipped when empty.
  int threads = 1;
  std::size_t chunk_lines = 10000;
};

struct CheckFailure {
  std::size_t line;  // 1-based
  std::string text;
  std::string reason;
};

struct CheckReport {
  std::size_t n_lines = 0;
  std::vector<CheckFailure> failures;
  bool passed() const { return failures.empty(); }
};

// Empty string when `safe_text` decodes, re-encodes and compares equal
// canonically; the failure reason otherwise.
std::string check_line(const std::string& safe_text);

CheckReport run_roundtrip_check(const CheckConfig& config);

}  // namespace safe
