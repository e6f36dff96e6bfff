#pragma once

#include <array>
#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lemur/template_generation.hpp"

namespace lemur {

/// Two templates of different lengths that may describe one event.
/// `first` is always the shorter one (ties broken by event_id), so the pair
/// is canonical regardless of argument order.
struct CandidatePair {
  Template first;
  Template second;
  double similarity = 0.0;

  static CandidatePair make(Template a, Template b, double similarity);
};

/// Non-wildcard tokens in order.
Tokens constant_tokens(TokenView tokens);

/// Cross-length pairs with constant-token Jaccard >= min_similarity, sorted
/// by descending similarity, then by event_id pair.
std::vector<CandidatePair> find_candidate_pairs(std::span<const Template> templates,
                                                double min_similarity);

struct PromptBundle {
  CandidatePair pair;
  std::array<std::string, 3> hop_texts;  // structure, semantics, solution
  std::string rendered;
};

inline constexpr std::array<std::string_view, 3> kHopMarkers = {
    "### Hop 1: Structure", "### Hop 2: Semantics", "### Hop 3: Solution"};

PromptBundle build_prompt(const CandidatePair& pair);

struct MergeDecision {
  bool merge = false;
  std::optional<Tokens> unified_template;
  std::string rationale;
};

/// Member token sequences per event_id, used to validate unified templates.
using TemplateMembers = std::unordered_map<std::string, std::vector<TokenView>>;

struct MergeContext {
  const TemplateMembers* members = nullptr;
  std::string split_chars;
};

/// True when every member of both templates matches `unified` with
/// variable-length wildcards, and `unified` keeps at least one constant
/// whenever the sources have any.
bool validate_unified(TokenView unified, const CandidatePair& pair, const MergeContext& ctx);

/// Reads the last "MERGE:" verdict. Anything unparseable or failing
/// validation becomes merge=false; this never throws.
MergeDecision parse_decision(std::string_view completion, const CandidatePair& pair,
                             const MergeContext& ctx);

/// Deterministic rule-based stand-in for the language model.
MergeDecision offline_merge_oracle(const CandidatePair& pair);

/// The response-protocol text for a decision ("MERGE: yes\nTEMPLATE: ...").
std::string format_decision(const MergeDecision& decision);

class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string name() const = 0;
  /// Returns completion text; throws TransportError when unreachable.
  /// Must be safe to call from several threads at once.
  virtual std::string complete(const PromptBundle& prompt) = 0;
};

/// Answers with offline_merge_oracle in the response protocol. No network.
class OfflineBackend final : public CompletionBackend {
 public:
  std::string name() const override { return "offline"; }
  std::string complete(const PromptBundle& prompt) override;
};

struct RetryPolicy {
  int max_retries = 2;
  std::chrono::milliseconds base_delay{500};
};

/// nullopt once all retries failed with TransportError.
std::optional<std::string> complete_with_retry(CompletionBackend& backend,
                                               const PromptBundle& prompt,
                                               const RetryPolicy& policy);

struct MergeResult {
  std::vector<Template> templates;
  std::unordered_map<std::string, std::string> rewrites;  // consumed id -> merged id
};

/// Applies positive decisions in candidate order. A template consumed by one
/// merge is skipped by every later pair.
MergeResult apply_merges(std::span<const Template> templates,
                         std::span<const CandidatePair> pairs,
                         std::span<const MergeDecision> decisions);

struct CotOptions {
  double min_similarity = 0.7;
  std::string split_chars;
  unsigned max_in_flight = 1;
  RetryPolicy retry;
};

struct CotStats {
  std::size_t candidates = 0;
  std::size_t merged = 0;
  std::size_t failed_queries = 0;
  double backend_seconds = 0.0;
};

/// find_candidate_pairs -> build_prompt -> backend -> parse_decision ->
/// apply_merges. Backend calls may overlap; decisions are applied in the
/// precomputed candidate order.
MergeResult run_cot_merging(std::span<const Template> templates, const TemplateMembers& members,
                            CompletionBackend& backend, const CotOptions& options,
                            CotStats* stats = nullptr);

}  // namespace lemur
