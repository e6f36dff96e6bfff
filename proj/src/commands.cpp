#include "lemur/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "lemur/csv.hpp"

namespace lemur {

Pipeline make_pipeline(const DatasetConfig& cfg, const RunOptions& options) {
  PipelineOptions p;
  p.sampling.k = cfg.k;
  p.sampling.n_layers = cfg.n_layers;
  p.sampling.strategy = options.strategy.value_or(SamplingStrategy::entropy_first_token);
  p.sampling.seed = options.seed;
  p.jaccard_threshold = cfg.jaccard_threshold;
  p.theta = cfg.theta;
  p.cot = options.cot.value_or(cfg.cot);
  p.candidate_min_similarity = cfg.candidate_min_similarity;
  p.jobs = std::max(1u, options.jobs);
  p.backend_concurrency = cfg.remote.max_concurrency;

  std::shared_ptr<CompletionBackend> backend;
  if (p.cot == CotMode::offline) {
    backend = std::make_shared<OfflineBackend>();
  } else if (p.cot == CotMode::remote) {
    if (cfg.remote.base_url.empty() || cfg.remote.model.empty()) {
      throw ConfigError("dataset '" + cfg.name + "': remote cot needs remote.base_url and remote.model");
    }
    backend = std::make_shared<HttpChatBackend>(cfg.remote);
  }
  return Pipeline(Preprocessor(compile_header_pattern(cfg.header_pattern), cfg.mask_rules,
                               cfg.split_tokens),
                  std::move(p), std::move(backend));
}

ParseOutputPaths write_parse_output(const ParseResult& result, const DatasetConfig& cfg,
                                    const std::filesystem::path& output_dir) {
  std::filesystem::create_directories(output_dir);
  const auto stem = cfg.log_file.filename().string();
  ParseOutputPaths paths{output_dir / (stem + "_structured.csv"),
                         output_dir / (stem + "_templates.csv")};

  const auto pattern = compile_header_pattern(cfg.header_pattern);
  std::vector<std::string> header_fields;
  for (const auto& f : pattern.field_names()) {
    if (f != "Content") header_fields.push_back(f);
  }

  std::ofstream structured(paths.structured, std::ios::binary);
  if (!structured) throw InputError("cannot write " + paths.structured.string());
  std::vector<std::string> row = {"LineId"};
  row.insert(row.end(), header_fields.begin(), header_fields.end());
  row.insert(row.end(), {"Content", "EventId", "EventTemplate"});
  structured << csv_row(row);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    const auto& t = result.template_of(i);
    row = {std::to_string(r.line_id)};
    for (const auto& f : header_fields) {
      const auto it = r.header_fields.find(f);
      row.push_back(it == r.header_fields.end() ? std::string{} : it->second);
    }
    row.insert(row.end(), {r.message, t.event_id, t.text});
    structured << csv_row(row);
  }

  std::ofstream templates(paths.templates, std::ios::binary);
  if (!templates) throw InputError("cannot write " + paths.templates.string());
  templates << csv_row({"EventId", "EventTemplate", "Occurrences"});
  for (const auto& t : result.templates) {
    templates << csv_row({t.event_id, t.text, std::to_string(t.support)});
  }
  if (!structured || !templates) throw InputError("error writing parse output");
  return paths;
}

ParseRun cmd_parse(const DatasetConfig& cfg, const RunOptions& options) {
  const auto pipeline = make_pipeline(cfg, options);
  const auto lines = read_lines(cfg.log_file);
  ParseRun run{pipeline.run(lines), {}};
  run.paths = write_parse_output(run.result, cfg,
                                 options.output_dir.value_or(cfg.log_file.parent_path()));
  return run;
}

Assignment assignment_of(const ParseResult& result) {
  Assignment a;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    a.emplace(result.records[i].line_id, result.template_of(i).event_id);
  }
  return a;
}

std::map<std::size_t, std::string> template_text_of(const ParseResult& result) {
  std::map<std::size_t, std::string> text;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    text.emplace(result.records[i].line_id, result.template_of(i).text);
  }
  return text;
}

EvaluationReport cmd_eval(const DatasetConfig& cfg, const RunOptions& options) {
  const auto truth_path = options.ground_truth ? options.ground_truth : cfg.ground_truth;
  if (!truth_path) throw ConfigError("dataset '" + cfg.name + "': no ground_truth configured");
  const auto truth = load_ground_truth(*truth_path);

  const auto run = cmd_parse(cfg, options);
  auto report = evaluate(assignment_of(run.result), template_text_of(run.result), truth);
  report.dataset = cfg.name;
  report.wall_seconds = run.result.wall_seconds;
  report.backend_seconds = run.result.backend_seconds;
  return report;
}

std::vector<BenchRow> cmd_bench(const DatasetConfig& cfg, const std::vector<std::size_t>& sizes,
                                const RunOptions& options, std::ostream& warnings, int repeats) {
  const auto pipeline = make_pipeline(cfg, options);
  const auto lines = read_lines(cfg.log_file);
  auto ordered = sizes;
  std::sort(ordered.begin(), ordered.end());

  std::vector<BenchRow> rows;
  for (const auto size : ordered) {
    if (size > lines.size()) {
      warnings << "warning: " << cfg.name << ": size " << size << " exceeds the "
               << lines.size() << " available lines; skipped\n";
      continue;
    }
    const std::span<const std::string> prefix(lines.data(), size);
    BenchRow row{cfg.name, size, 0.0, 0};
    for (int r = 0; r < std::max(1, repeats); ++r) {
      const auto result = pipeline.run(prefix);
      if (r == 0 || result.wall_seconds < row.wall_seconds) row.wall_seconds = result.wall_seconds;
      row.templates = result.templates.size();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv_header() { return "dataset,size,wall_seconds,templates\n"; }

std::string bench_csv_row(const BenchRow& row) {
  char seconds[32];
  std::snprintf(seconds, sizeof seconds, "%.6f", row.wall_seconds);
  return csv_row({row.dataset, std::to_string(row.size), seconds, std::to_string(row.templates)});
}

}  // namespace lemur
