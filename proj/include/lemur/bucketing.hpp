#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "lemur/common.hpp"
#include "lemur/preprocessing.hpp"

namespace lemur {

/// All records of one token length plus the centers picked for them.
/// Records are non-owning; the pipeline keeps the LogRecord storage alive.
struct Bucket {
  std::size_t length = 0;
  std::vector<const LogRecord*> records;
  std::vector<const LogRecord*> centers;
};

enum class SamplingStrategy { entropy_first_token, entropy_only, first_token_only, random };

std::string to_string(SamplingStrategy strategy);
SamplingStrategy parse_sampling_strategy(std::string_view name);  // throws ConfigError

struct SamplingConfig {
  std::size_t k = 1;
  std::size_t n_layers = 3;
  SamplingStrategy strategy = SamplingStrategy::entropy_first_token;
  std::uint64_t seed = 0;  // only read by SamplingStrategy::random

  void validate() const;
};

struct SampleSet {
  std::vector<const LogRecord*> selected;
  std::unordered_set<std::string> seen_first_tokens;
  std::size_t accepted_count = 0;
};

/// One bucket per distinct token length, ascending; input order kept inside.
std::vector<Bucket> build_buckets(std::span<const LogRecord> records);

/// Base-2 Shannon entropy of the token distribution within one sequence.
double shannon_entropy(TokenView tokens);

/// Picks up to cfg.k representatives of a bucket.
///
/// entropy_first_token sorts by entropy (descending, line_id ascending on
/// ties), cuts the order into cfg.n_layers contiguous layers, takes records
/// with an unseen first token layer by layer, then refills any free slots
/// from the global entropy order.
SampleSet sample_centers(const Bucket& bucket, const SamplingConfig& cfg);

/// |set(a) ∩ set(b)| / |set(a) ∪ set(b)|.
double jaccard_similarity(TokenView a, TokenView b);

/// Drops every center whose similarity to an earlier survivor exceeds
/// `threshold`. Survivors keep selection order.
std::vector<const LogRecord*> merge_centers(const SampleSet& sample, double threshold);

}  // namespace lemur
