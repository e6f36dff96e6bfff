#include "lemur/cot_merging.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <thread>

#include "lemur/bucketing.hpp"
#include "lemur/parallel.hpp"

namespace lemur {

CandidatePair CandidatePair::make(Template a, Template b, double similarity) {
  const bool swap = a.length() != b.length() ? a.length() > b.length() : a.event_id > b.event_id;
  if (swap) std::swap(a, b);
  return CandidatePair{std::move(a), std::move(b), similarity};
}

Tokens constant_tokens(TokenView tokens) {
  Tokens out;
  for (const auto& t : tokens) {
    if (!is_wildcard(t)) out.push_back(t);
  }
  return out;
}

std::vector<CandidatePair> find_candidate_pairs(std::span<const Template> templates,
                                                double min_similarity) {
  std::vector<Tokens> constants;
  constants.reserve(templates.size());
  for (const auto& t : templates) constants.push_back(constant_tokens(t.tokens));

  std::vector<CandidatePair> pairs;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    for (std::size_t j = i + 1; j < templates.size(); ++j) {
      if (templates[i].length() == templates[j].length()) continue;
      if (constants[i].empty() && constants[j].empty()) continue;
      const double sim = jaccard_similarity(constants[i], constants[j]);
      if (sim >= min_similarity) pairs.push_back(CandidatePair::make(templates[i], templates[j], sim));
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const CandidatePair& a, const CandidatePair& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.first.event_id != b.first.event_id) return a.first.event_id < b.first.event_id;
    return a.second.event_id < b.second.event_id;
  });
  return pairs;
}

PromptBundle build_prompt(const CandidatePair& pair) {
  const std::string a = join_tokens(pair.first.tokens);
  const std::string b = join_tokens(pair.second.tokens);

  PromptBundle bundle;
  bundle.pair = pair;
  bundle.hop_texts[0] =
      "Infer the token structure of each template. List the constant tokens of each template "
      "in order, and mark every position where a variable <*> appears. Note where the two "
      "templates differ in length.";
  bundle.hop_texts[1] =
      "Infer the semantics of each template. Decide whether both templates describe the same "
      "event from the same logging statement, differing only in how many tokens a variable "
      "value spans, or whether they describe different events.";
  bundle.hop_texts[2] =
      "Infer the solution. If the templates describe the same event, give one unified template "
      "that covers every log of both, using <*> for variables and single spaces between "
      "tokens. End your answer with exactly one verdict line:\n"
      "MERGE: yes\n"
      "or\n"
      "MERGE: no\n"
      "If the verdict is yes, follow it with one line:\n"
      "TEMPLATE: <unified template>";

  std::string& r = bundle.rendered;
  r += "You are an expert in log parsing. Two log templates were extracted from the same "
       "system. Tokens written as <*> are variables; all other tokens are constants.\n\n";
  r += "Template A: \"" + a + "\"\n";
  r += "Template B: \"" + b + "\"\n";
  for (std::size_t i = 0; i < 3; ++i) {
    r += "\n";
    r += kHopMarkers[i];
    r += "\n";
    r += bundle.hop_texts[i];
    r += "\n";
  }
  return bundle;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view kTrim = " \t\r\n*`\"'";
  const auto b = s.find_first_not_of(kTrim);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(kTrim);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// Value after `key` (lowercase, with colon) on this line, if present.
std::optional<std::string_view> field_value(std::string_view line, std::string_view key) {
  const auto pos = lower(line).find(key);
  if (pos == std::string::npos) return std::nullopt;
  return trim(line.substr(pos + key.size()));
}

bool is_subsequence(TokenView needle, TokenView hay) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < hay.size() && j < needle.size(); ++i) {
    if (hay[i] == needle[j]) ++j;
  }
  return j == needle.size();
}

}  // namespace

bool validate_unified(TokenView unified, const CandidatePair& pair, const MergeContext& ctx) {
  if (unified.empty()) return false;
  const bool sources_have_constants = !constant_tokens(pair.first.tokens).empty() ||
                                      !constant_tokens(pair.second.tokens).empty();
  if (sources_have_constants && constant_tokens(unified).empty()) return false;

  for (const auto* tmpl : {&pair.first, &pair.second}) {
    if (ctx.members != nullptr) {
      const auto it = ctx.members->find(tmpl->event_id);
      if (it != ctx.members->end()) {
        for (const auto& m : it->second) {
          if (!matches_variable_length(unified, m)) return false;
        }
        continue;
      }
    }
    // No member list: the template itself stands in for its members.
    if (!matches_variable_length(unified, tmpl->tokens)) return false;
  }
  return true;
}

MergeDecision parse_decision(std::string_view completion, const CandidatePair& pair,
                             const MergeContext& ctx) {
  MergeDecision decision;
  decision.rationale = std::string(completion);

  const auto lines = split_lines(completion);
  std::optional<std::size_t> verdict_line;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lower(lines[i]).find("merge:") != std::string::npos) verdict_line = i;
  }
  if (!verdict_line) return decision;

  const auto verdict = lower(*field_value(lines[*verdict_line], "merge:"));
  if (verdict.rfind("yes", 0) != 0) return decision;

  for (std::size_t i = *verdict_line + 1; i < lines.size(); ++i) {
    const auto value = field_value(lines[i], "template:");
    if (!value) continue;
    Tokens unified = tokenize(*value, ctx.split_chars);
    if (validate_unified(unified, pair, ctx)) {
      decision.merge = true;
      decision.unified_template = std::move(unified);
    }
    break;
  }
  return decision;
}

MergeDecision offline_merge_oracle(const CandidatePair& pair) {
  MergeDecision decision;
  const Tokens short_constants = constant_tokens(pair.first.tokens);
  const Tokens long_constants = constant_tokens(pair.second.tokens);
  const std::set<std::string> short_set(short_constants.begin(), short_constants.end());
  const std::set<std::string> long_set(long_constants.begin(), long_constants.end());

  if (pair.first.length() == pair.second.length() || short_set != long_set ||
      !is_subsequence(short_constants, long_constants)) {
    decision.rationale = "offline: constant tokens differ";
    return decision;
  }
  Tokens unified;
  for (const auto& t : pair.second.tokens) {
    if (is_wildcard(t) && !unified.empty() && is_wildcard(unified.back())) continue;
    unified.push_back(t);
  }
  decision.merge = true;
  decision.unified_template = std::move(unified);
  decision.rationale = "offline: same constants in order";
  return decision;
}

std::string format_decision(const MergeDecision& decision) {
  if (!decision.merge || !decision.unified_template) return "MERGE: no\n";
  return "MERGE: yes\nTEMPLATE: " + join_tokens(*decision.unified_template) + "\n";
}

std::string OfflineBackend::complete(const PromptBundle& prompt) {
  return format_decision(offline_merge_oracle(prompt.pair));
}

std::optional<std::string> complete_with_retry(CompletionBackend& backend,
                                               const PromptBundle& prompt,
                                               const RetryPolicy& policy) {
  auto delay = policy.base_delay;
  for (int attempt = 0;; ++attempt) {
    try {
      return backend.complete(prompt);
    } catch (const TransportError&) {
      if (attempt >= policy.max_retries) return std::nullopt;
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

MergeResult apply_merges(std::span<const Template> templates,
                         std::span<const CandidatePair> pairs,
                         std::span<const MergeDecision> decisions) {
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < templates.size(); ++i) position.emplace(templates[i].event_id, i);

  // slot -> replacement; nullopt entries are removed
  std::vector<std::optional<Template>> slots(templates.begin(), templates.end());
  std::set<std::string> consumed;
  MergeResult result;

  const std::size_t n = std::min(pairs.size(), decisions.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = decisions[i];
    if (!d.merge || !d.unified_template) continue;
    const auto& a = pairs[i].first;
    const auto& b = pairs[i].second;
    if (consumed.contains(a.event_id) || consumed.contains(b.event_id)) continue;
    const auto pa = position.find(a.event_id);
    const auto pb = position.find(b.event_id);
    if (pa == position.end() || pb == position.end()) continue;

    Template merged;
    merged.tokens = *d.unified_template;
    merged.event_id = event_id_for(merged.tokens);
    merged.text = join_tokens(merged.tokens);
    merged.support = slots[pa->second]->support + slots[pb->second]->support;
    merged.variable_length = true;

    consumed.insert(a.event_id);
    consumed.insert(b.event_id);
    result.rewrites[a.event_id] = merged.event_id;
    result.rewrites[b.event_id] = merged.event_id;
    const auto keep = std::min(pa->second, pb->second);
    const auto drop = std::max(pa->second, pb->second);
    slots[keep] = std::move(merged);
    slots[drop].reset();
  }

  // A unified template may coincide with an untouched one; coalesce by id.
  std::unordered_map<std::string, std::size_t> out_index;
  for (auto& slot : slots) {
    if (!slot) continue;
    auto [it, inserted] = out_index.try_emplace(slot->event_id, result.templates.size());
    if (inserted) {
      result.templates.push_back(std::move(*slot));
    } else {
      auto& existing = result.templates[it->second];
      existing.support += slot->support;
      existing.variable_length = existing.variable_length || slot->variable_length;
    }
  }
  return result;
}

MergeResult run_cot_merging(std::span<const Template> templates, const TemplateMembers& members,
                            CompletionBackend& backend, const CotOptions& options,
                            CotStats* stats) {
  const auto pairs = find_candidate_pairs(templates, options.min_similarity);
  const MergeContext ctx{&members, options.split_chars};

  std::vector<MergeDecision> decisions(pairs.size());
  std::atomic<std::size_t> failures{0};
  const auto started = std::chrono::steady_clock::now();
  parallel_for(pairs.size(), options.max_in_flight, [&](std::size_t i) {
    const auto bundle = build_prompt(pairs[i]);
    const auto completion = complete_with_retry(backend, bundle, options.retry);
    if (!completion) {
      ++failures;
      decisions[i].rationale = "backend unavailable";
      return;
    }
    decisions[i] = parse_decision(*completion, pairs[i], ctx);
  });
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

  auto result = apply_merges(templates, pairs, decisions);
  if (stats != nullptr) {
    stats->candidates = pairs.size();
    stats->merged = result.rewrites.size() / 2;
    stats->failed_queries = failures.load();
    stats->backend_seconds = elapsed.count();
  }
  return result;
}

}  // namespace lemur
