#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lemur/config.hpp"
#include "lemur/evaluation.hpp"
#include "lemur/pipeline.hpp"

namespace lemur {

/// Command-line overrides applied on top of a DatasetConfig.
struct RunOptions {
  std::optional<std::filesystem::path> output_dir;  // default: next to the log file
  std::optional<CotMode> cot;
  std::optional<SamplingStrategy> strategy;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> ground_truth;
};

Pipeline make_pipeline(const DatasetConfig& cfg, const RunOptions& options);

struct ParseOutputPaths {
  std::filesystem::path structured;
  std::filesystem::path templates;
};

/// LogHub-style "<log>_structured.csv" and "<log>_templates.csv".
ParseOutputPaths write_parse_output(const ParseResult& result, const DatasetConfig& cfg,
                                    const std::filesystem::path& output_dir);

struct ParseRun {
  ParseResult result;
  ParseOutputPaths paths;
};

ParseRun cmd_parse(const DatasetConfig& cfg, const RunOptions& options);

/// Parses, writes outputs, and scores against the ground truth. The ground
/// truth is loaded before parsing so a missing file aborts without output.
EvaluationReport cmd_eval(const DatasetConfig& cfg, const RunOptions& options);

Assignment assignment_of(const ParseResult& result);
std::map<std::size_t, std::string> template_text_of(const ParseResult& result);

struct BenchRow {
  std::string dataset;
  std::size_t size = 0;
  double wall_seconds = 0.0;  // best of the repeats
  std::size_t templates = 0;
};

/// Times the pipeline on the first `size` lines for each requested size.
/// Sizes beyond the file length are skipped with a warning.
std::vector<BenchRow> cmd_bench(const DatasetConfig& cfg, const std::vector<std::size_t>& sizes,
                                const RunOptions& options, std::ostream& warnings,
                                int repeats = 3);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

}  // namespace lemur
