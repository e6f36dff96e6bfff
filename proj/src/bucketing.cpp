#include "lemur/bucketing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>

namespace lemur {

std::string to_string(SamplingStrategy strategy) {
  switch (strategy) {
    case SamplingStrategy::entropy_first_token: return "entropy_first_token";
    case SamplingStrategy::entropy_only: return "entropy_only";
    case SamplingStrategy::first_token_only: return "first_token_only";
    case SamplingStrategy::random: return "random";
  }
  return "unknown";
}

SamplingStrategy parse_sampling_strategy(std::string_view name) {
  for (auto s : {SamplingStrategy::entropy_first_token, SamplingStrategy::entropy_only,
                 SamplingStrategy::first_token_only, SamplingStrategy::random}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown sampling strategy '" + std::string(name) + "'");
}

void SamplingConfig::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (n_layers < 1) throw ConfigError("n_layers must be >= 1");
}

std::vector<Bucket> build_buckets(std::span<const LogRecord> records) {
  std::map<std::size_t, Bucket> by_length;
  for (const auto& record : records) {
    auto& bucket = by_length[record.tokens.size()];
    bucket.length = record.tokens.size();
    bucket.records.push_back(&record);
  }
  std::vector<Bucket> buckets;
  buckets.reserve(by_length.size());
  for (auto& [length, bucket] : by_length) buckets.push_back(std::move(bucket));
  return buckets;
}

double shannon_entropy(TokenView tokens) {
  if (tokens.empty()) throw DomainError("shannon_entropy: empty token sequence");
  std::unordered_map<std::string_view, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  const double n = static_cast<double>(tokens.size());
  double h = 0.0;
  for (const auto& [token, count] : counts) {
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return h;
}

namespace {

struct Ranked {
  const LogRecord* record;
  double entropy;
};

std::vector<const LogRecord*> entropy_order(const Bucket& bucket) {
  std::vector<Ranked> ranked;
  ranked.reserve(bucket.records.size());
  for (const auto* r : bucket.records) ranked.push_back({r, shannon_entropy(r->tokens)});
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.entropy != b.entropy) return a.entropy > b.entropy;
    return a.record->line_id < b.record->line_id;
  });
  std::vector<const LogRecord*> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(r.record);
  return out;
}

// Contiguous near-equal split; the first (size % n) layers get one extra.
std::vector<std::span<const LogRecord* const>> split_layers(
    const std::vector<const LogRecord*>& order, std::size_t n_layers) {
  std::vector<std::span<const LogRecord* const>> layers;
  const std::size_t base = order.size() / n_layers;
  const std::size_t extra = order.size() % n_layers;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const std::size_t size = base + (i < extra ? 1 : 0);
    layers.emplace_back(order.data() + offset, size);
    offset += size;
  }
  return layers;
}

class Selector {
 public:
  explicit Selector(std::size_t k) : k_(k) {}

  bool full() const { return sample_.selected.size() >= k_; }

  bool contains(const LogRecord* r) const {
    return std::find(sample_.selected.begin(), sample_.selected.end(), r) !=
           sample_.selected.end();
  }

  void take(const LogRecord* r) {
    sample_.selected.push_back(r);
    if (!r->tokens.empty()) sample_.seen_first_tokens.insert(r->tokens.front());
    ++sample_.accepted_count;
  }

  // Diversity pass: only records whose first token is new.
  void first_token_pass(std::span<const LogRecord* const> records) {
    for (const auto* r : records) {
      if (full()) return;
      if (r->tokens.empty() || sample_.seen_first_tokens.contains(r->tokens.front())) continue;
      take(r);
    }
  }

  void refill(std::span<const LogRecord* const> records) {
    for (const auto* r : records) {
      if (full()) return;
      if (!contains(r)) take(r);
    }
  }

  SampleSet release() { return std::move(sample_); }

 private:
  std::size_t k_;
  SampleSet sample_;
};

// Bounded draw that does not depend on the standard library's distributions.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

SampleSet sample_centers(const Bucket& bucket, const SamplingConfig& cfg) {
  cfg.validate();
  if (bucket.records.empty()) throw DomainError("sample_centers: empty bucket");

  Selector selector(cfg.k);
  switch (cfg.strategy) {
    case SamplingStrategy::entropy_first_token: {
      const auto order = entropy_order(bucket);
      for (const auto& layer : split_layers(order, cfg.n_layers)) {
        if (selector.full()) break;
        selector.first_token_pass(layer);
      }
      selector.refill(order);
      break;
    }
    case SamplingStrategy::entropy_only: {
      selector.refill(entropy_order(bucket));
      break;
    }
    case SamplingStrategy::first_token_only: {
      selector.first_token_pass(bucket.records);
      selector.refill(bucket.records);
      break;
    }
    case SamplingStrategy::random: {
      std::vector<const LogRecord*> pool = bucket.records;
      std::mt19937_64 rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (bucket.length + 1)));
      // Partial Fisher-Yates over the first min(k, n) slots.
      const std::size_t take = std::min(cfg.k, pool.size());
      for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + draw_below(rng, pool.size() - i);
        std::swap(pool[i], pool[j]);
        selector.take(pool[i]);
      }
      break;
    }
  }
  return selector.release();
}

double jaccard_similarity(TokenView a, TokenView b) {
  if (a.empty() && b.empty()) throw DomainError("jaccard_similarity: both sequences empty");
  std::vector<std::string_view> sa(a.begin(), a.end());
  std::vector<std::string_view> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < sa.size() && j < sb.size();) {
    if (sa[i] == sb[j]) {
      ++common, ++i, ++j;
    } else if (sa[i] < sb[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = sa.size() + sb.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<const LogRecord*> merge_centers(const SampleSet& sample, double threshold) {
  std::vector<const LogRecord*> survivors;
  for (const auto* candidate : sample.selected) {
    const bool redundant = std::any_of(survivors.begin(), survivors.end(), [&](const LogRecord* s) {
      return jaccard_similarity(s->tokens, candidate->tokens) > threshold;
    });
    if (!redundant) survivors.push_back(candidate);
  }
  return survivors;
}

}  // namespace lemur
