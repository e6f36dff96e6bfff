#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "lemur/bucketing.hpp"

using namespace lemur;
using testing::record_of;

namespace {

double entropy_oracle(const Tokens& tokens) {
  std::map<std::string, double> counts;
  for (const auto& t : tokens) counts[t] += 1;
  double h = 0;
  for (const auto& [_, c] : counts) {
    const double p = c / static_cast<double>(tokens.size());
    h -= p * std::log(p) / std::log(2.0);
  }
  return h;
}

double jaccard_oracle(const Tokens& a, const Tokens& b) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::size_t both = 0;
  for (const auto& t : sa) both += sb.count(t);
  return static_cast<double>(both) / static_cast<double>(sa.size() + sb.size() - both);
}

Bucket bucket_of(const std::vector<LogRecord>& records) {
  auto buckets = build_buckets(records);
  REQUIRE(buckets.size() == 1);
  return buckets.front();
}

std::vector<std::string> first_tokens(const SampleSet& s) {
  std::vector<std::string> out;
  for (const auto* r : s.selected) out.push_back(r->tokens.front());
  return out;
}

}  // namespace

TEST_CASE("build buckets partitions by length") {
  std::vector<LogRecord> records = {record_of(1, "a b c"), record_of(2, "a b c d e"),
                                    record_of(3, "x y z")};
  const auto buckets = build_buckets(records);
  REQUIRE(buckets.size() == 2);
  CHECK(buckets[0].length == 3);
  REQUIRE(buckets[0].records.size() == 2);
  CHECK(buckets[0].records[0]->line_id == 1);
  CHECK(buckets[0].records[1]->line_id == 3);
  CHECK(buckets[1].length == 5);
  CHECK(buckets[1].records[0]->line_id == 2);
  CHECK(build_buckets({}).empty());
}

TEST_CASE("bucket partition property") {
  testing::Gen g(3);
  for (int round = 0; round < 100; ++round) {
    std::vector<LogRecord> records;
    for (std::size_t i = 0, n = g.between(1, 60); i < n; ++i) {
      records.push_back(record_of(i + 1, g.tokens(g.between(1, 6), 5)));
    }
    const auto buckets = build_buckets(records);
    std::size_t total = 0;
    std::set<std::size_t> lengths;
    for (const auto& b : buckets) {
      total += b.records.size();
      lengths.insert(b.length);
      for (const auto* r : b.records) CHECK(r->tokens.size() == b.length);
      for (std::size_t i = 1; i < b.records.size(); ++i) {
        CHECK(b.records[i - 1]->line_id < b.records[i]->line_id);
      }
    }
    CHECK(total == records.size());
    CHECK(lengths.size() == buckets.size());
    for (std::size_t i = 1; i < buckets.size(); ++i) CHECK(buckets[i - 1].length < buckets[i].length);
  }
}

TEST_CASE("shannon entropy examples") {
  CHECK(shannon_entropy(Tokens{"a", "a", "a", "a"}) == doctest::Approx(0.0));
  CHECK(shannon_entropy(Tokens{"a", "b"}) == doctest::Approx(1.0));
  CHECK(shannon_entropy(Tokens{"a", "a", "b", "c"}) == doctest::Approx(1.5));
  CHECK_THROWS_AS(shannon_entropy(Tokens{}), DomainError);
}

TEST_CASE("shannon entropy matches frequency oracle") {
  testing::Gen g(17);
  for (int i = 0; i < 1000; ++i) {
    const auto t = g.tokens(g.between(1, 40), g.between(1, 12));
    const double h = shannon_entropy(t);
    CHECK(std::abs(h - entropy_oracle(t)) <= 1e-9);
    CHECK(h <= std::log2(static_cast<double>(t.size())) + 1e-12);
  }
}

TEST_CASE("jaccard examples") {
  CHECK(jaccard_similarity(Tokens{"a", "b"}, Tokens{"b", "a"}) == 1.0);
  CHECK(jaccard_similarity(Tokens{"a"}, Tokens{"b"}) == 0.0);
  CHECK(jaccard_similarity(Tokens{"a", "b", "c"}, Tokens{"b", "c", "d"}) == 0.5);
  CHECK(jaccard_similarity(Tokens{"a", "a", "b"}, Tokens{"a", "b"}) == 1.0);
  CHECK_THROWS_AS(jaccard_similarity(Tokens{}, Tokens{}), DomainError);
}

TEST_CASE("jaccard matches set oracle") {
  testing::Gen g(19);
  for (int i = 0; i < 1000; ++i) {
    const auto a = g.tokens(g.between(1, 15), 10);
    const auto b = g.tokens(g.between(1, 15), 10);
    CHECK(jaccard_similarity(a, b) == jaccard_oracle(a, b));
  }
}

TEST_CASE("sampling keeps an undersized bucket whole") {
  std::vector<LogRecord> records = {record_of(1, "only one")};
  const auto s = sample_centers(bucket_of(records), {.k = 2});
  REQUIRE(s.selected.size() == 1);
  CHECK(s.selected[0]->line_id == 1);
}

TEST_CASE("two pass sampling trace") {
  // Entropies 2.0, 1.5 and 0.811 keep the listed order.
  std::vector<LogRecord> records = {record_of(1, "open x y z"), record_of(2, "open x x y"),
                                    record_of(3, "close x x x")};
  const auto bucket = bucket_of(records);
  const auto s = sample_centers(bucket, {.k = 2});
  CHECK(first_tokens(s) == std::vector<std::string>{"open", "close"});
  CHECK(s.seen_first_tokens == std::unordered_set<std::string>{"open", "close"});
  CHECK(s.accepted_count == 2);

  const auto plain = sample_centers(bucket, {.k = 2, .strategy = SamplingStrategy::entropy_only});
  CHECK(plain.selected[0]->line_id == 1);
  CHECK(plain.selected[1]->line_id == 2);
}

TEST_CASE("refill pass takes remaining slots by entropy") {
  std::vector<LogRecord> records = {record_of(1, "open a a a"), record_of(2, "open a b c"),
                                    record_of(3, "open a a b"), record_of(4, "close a a a")};
  const auto s = sample_centers(bucket_of(records), {.k = 3, .n_layers = 2});
  // Entropy order: 2 (2.0), 3 (1.5), 1 (0.811), 4 (0.811; larger line_id).
  // Layers {2,3} {1,4}: pass one picks 2 and 4, the refill adds 3.
  REQUIRE(s.selected.size() == 3);
  CHECK(s.selected[0]->line_id == 2);
  CHECK(s.selected[1]->line_id == 4);
  CHECK(s.selected[2]->line_id == 3);
}

TEST_CASE("first token only ignores entropy") {
  std::vector<LogRecord> records = {record_of(1, "open a a a"), record_of(2, "open a b c"),
                                    record_of(3, "close a b c")};
  const auto s =
      sample_centers(bucket_of(records), {.k = 2, .strategy = SamplingStrategy::first_token_only});
  REQUIRE(s.selected.size() == 2);
  CHECK(s.selected[0]->line_id == 1);
  CHECK(s.selected[1]->line_id == 3);
}

TEST_CASE("random sampling is seeded") {
  std::vector<LogRecord> records;
  for (std::size_t i = 0; i < 50; ++i) records.push_back(record_of(i + 1, "r" + std::to_string(i) + " x"));
  const auto bucket = bucket_of(records);
  SamplingConfig cfg{.k = 5, .strategy = SamplingStrategy::random, .seed = 7};
  const auto a = sample_centers(bucket, cfg);
  const auto b = sample_centers(bucket, cfg);
  CHECK(a.selected == b.selected);
  std::set<const LogRecord*> distinct(a.selected.begin(), a.selected.end());
  CHECK(distinct.size() == 5);
  cfg.seed = 8;
  CHECK(sample_centers(bucket, cfg).selected != a.selected);
}

TEST_CASE("sampling bounds and first token diversity") {
  testing::Gen g(23);
  for (int round = 0; round < 300; ++round) {
    const auto len = g.between(1, 5);
    std::vector<LogRecord> records;
    for (std::size_t i = 0, n = g.between(1, 40); i < n; ++i) {
      records.push_back(record_of(i + 1, g.tokens(len, g.between(2, 8))));
    }
    const auto bucket = bucket_of(records);
    SamplingConfig cfg{.k = g.between(1, 8), .n_layers = g.between(1, 4)};
    const auto s = sample_centers(bucket, cfg);
    CHECK(s.selected.size() == std::min(cfg.k, records.size()));
    std::set<std::string> firsts;
    for (const auto& r : records) firsts.insert(r.tokens.front());
    if (firsts.size() >= cfg.k) {
      const auto picked = first_tokens(s);
      CHECK(std::set<std::string>(picked.begin(), picked.end()).size() == picked.size());
    }
    const auto survivors = merge_centers(s, 0.7);
    CHECK(!survivors.empty());
    CHECK(survivors.size() <= s.selected.size());
  }
}

TEST_CASE("merge centers") {
  std::vector<LogRecord> r = {record_of(1, "a b c"), record_of(2, "a b c"), record_of(3, "x y z"),
                              record_of(4, "b c d")};
  SampleSet same;
  same.selected = {&r[0], &r[1]};
  CHECK(merge_centers(same, 0.7) == std::vector<const LogRecord*>{&r[0]});

  SampleSet disjoint;
  disjoint.selected = {&r[0], &r[2]};
  CHECK(merge_centers(disjoint, 0.7).size() == 2);

  SampleSet boundary;
  boundary.selected = {&r[0], &r[3]};
  CHECK(merge_centers(boundary, 0.5).size() == 2);
  CHECK(merge_centers(boundary, 0.49).size() == 1);
}

TEST_CASE("sampling config validation") {
  CHECK_THROWS_AS(SamplingConfig{.k = 0}.validate(), ConfigError);
  CHECK_THROWS_AS(SamplingConfig{.n_layers = 0}.validate(), ConfigError);
  CHECK(parse_sampling_strategy("entropy_only") == SamplingStrategy::entropy_only);
  CHECK_THROWS_AS(parse_sampling_strategy("bogus"), ConfigError);
  for (auto s : {SamplingStrategy::entropy_first_token, SamplingStrategy::entropy_only,
                 SamplingStrategy::first_token_only, SamplingStrategy::random}) {
    CHECK(parse_sampling_strategy(to_string(s)) == s);
  }
}
