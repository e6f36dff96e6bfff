#include "lemur/pipeline.hpp"

#include <chrono>
#include <unordered_map>

#include "lemur/clustering.hpp"
#include "lemur/parallel.hpp"

namespace lemur {

std::string to_string(CotMode mode) {
  switch (mode) {
    case CotMode::off: return "off";
    case CotMode::offline: return "offline";
    case CotMode::remote: return "remote";
  }
  return "unknown";
}

CotMode parse_cot_mode(std::string_view name) {
  for (auto m : {CotMode::off, CotMode::offline, CotMode::remote}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown cot mode '" + std::string(name) + "' (expected off|offline|remote)");
}

Pipeline::Pipeline(Preprocessor preprocessor, PipelineOptions options,
                   std::shared_ptr<CompletionBackend> backend)
    : preprocessor_(std::move(preprocessor)),
      options_(std::move(options)),
      backend_(std::move(backend)) {
  options_.sampling.validate();
  if (options_.cot != CotMode::off && !backend_) {
    throw ConfigError("cot mode " + to_string(options_.cot) + " needs a completion backend");
  }
}

namespace {

std::vector<GeneratedTemplate> parse_bucket(Bucket& bucket, const PipelineOptions& options) {
  if (bucket.length == 0) {
    // Messages with no tokens share one empty template.
    GeneratedTemplate g;
    g.tmpl.event_id = event_id_for({});
    g.tmpl.support = bucket.records.size();
    g.members = bucket.records;
    return {std::move(g)};
  }
  const auto sample = sample_centers(bucket, options.sampling);
  bucket.centers = merge_centers(sample, options.jaccard_threshold);

  std::vector<GeneratedTemplate> out;
  for (const auto& cluster : assign_clusters(bucket)) {
    for (auto& g : generate_templates(cluster, options.theta)) out.push_back(std::move(g));
  }
  return consolidate_templates(std::move(out));
}

}  // namespace

ParseResult Pipeline::run(std::span<const std::string> lines) const {
  const auto started = std::chrono::steady_clock::now();
  ParseResult result;
  result.records = preprocessor_.process_all(lines);

  auto buckets = build_buckets(result.records);
  std::vector<std::vector<GeneratedTemplate>> per_bucket(buckets.size());
  parallel_for(buckets.size(), options_.jobs,
               [&](std::size_t i) { per_bucket[i] = parse_bucket(buckets[i], options_); });

  // Identical token sequences from different clusters share one event.
  result.record_template.assign(result.records.size(), 0);
  std::unordered_map<std::string, std::size_t> by_id;
  TemplateMembers members;
  for (auto& bucket_templates : per_bucket) {
    for (auto& g : bucket_templates) {
      auto [it, inserted] = by_id.try_emplace(g.tmpl.event_id, result.templates.size());
      if (inserted) {
        result.templates.push_back(g.tmpl);
      } else {
        result.templates[it->second].support += g.tmpl.support;
      }
      auto& member_list = members[g.tmpl.event_id];
      for (const auto* m : g.members) {
        result.record_template[static_cast<std::size_t>(m - result.records.data())] = it->second;
        member_list.emplace_back(m->tokens);
      }
    }
  }

  if (options_.cot != CotMode::off && result.templates.size() > 1) {
    CotOptions cot;
    cot.min_similarity = options_.candidate_min_similarity;
    cot.split_chars = preprocessor_.split_chars();
    cot.max_in_flight = options_.cot == CotMode::remote ? options_.backend_concurrency : 1;
    cot.retry = options_.retry;
    auto merged = run_cot_merging(result.templates, members, *backend_, cot, &result.cot_stats);
    if (!merged.rewrites.empty()) {
      std::unordered_map<std::string, std::size_t> new_index;
      for (std::size_t i = 0; i < merged.templates.size(); ++i) {
        new_index.emplace(merged.templates[i].event_id, i);
      }
      for (auto& slot : result.record_template) {
        const auto& old_id = result.templates[slot].event_id;
        const auto rw = merged.rewrites.find(old_id);
        slot = new_index.at(rw == merged.rewrites.end() ? old_id : rw->second);
      }
      result.templates = std::move(merged.templates);
    }
    if (options_.cot == CotMode::remote) result.backend_seconds = result.cot_stats.backend_seconds;
  }

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  result.wall_seconds = elapsed.count();
  return result;
}

}  // namespace lemur
