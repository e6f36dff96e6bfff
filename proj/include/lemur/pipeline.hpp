#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lemur/bucketing.hpp"
#include "lemur/cot_merging.hpp"
#include "lemur/preprocessing.hpp"
#include "lemur/template_generation.hpp"

namespace lemur {

enum class CotMode { off, offline, remote };

std::string to_string(CotMode mode);
CotMode parse_cot_mode(std::string_view name);  // throws ConfigError

struct PipelineOptions {
  SamplingConfig sampling;
  double jaccard_threshold = 0.7;
  double theta = 0.0;
  CotMode cot = CotMode::offline;
  double candidate_min_similarity = 0.7;
  unsigned jobs = 1;
  unsigned backend_concurrency = 4;
  RetryPolicy retry;
};

struct ParseResult {
  std::vector<LogRecord> records;
  std::vector<Template> templates;           // ordered by (bucket length, center index)
  std::vector<std::size_t> record_template;  // records[i] -> templates index
  double wall_seconds = 0.0;                 // preprocessing through merging
  double backend_seconds = 0.0;              // share spent waiting on a remote backend
  CotStats cot_stats;

  const Template& template_of(std::size_t record_index) const {
    return templates[record_template[record_index]];
  }
};

/// preprocess -> bucket -> sample/merge centers -> cluster -> templates ->
/// optional cross-length merging.
class Pipeline {
 public:
  /// `backend` is used only when options.cot != off; it may be null then.
  Pipeline(Preprocessor preprocessor, PipelineOptions options,
           std::shared_ptr<CompletionBackend> backend);

  ParseResult run(std::span<const std::string> lines) const;

  const PipelineOptions& options() const { return options_; }

 private:
  Preprocessor preprocessor_;
  PipelineOptions options_;
  std::shared_ptr<CompletionBackend> backend_;
};

}  // namespace lemur
