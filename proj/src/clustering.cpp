#include "lemur/clustering.hpp"

#include <algorithm>
#include <limits>

namespace lemur {

std::size_t token_distance(TokenView a, TokenView b) {
  if (a.size() != b.size()) {
    throw DomainError("token_distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

std::vector<Cluster> assign_clusters(const Bucket& bucket) {
  if (bucket.centers.empty()) throw DomainError("assign_clusters: bucket has no centers");

  std::vector<Cluster> clusters(bucket.centers.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    clusters[i].center = bucket.centers[i];
    clusters[i].bucket_length = bucket.length;
  }
  for (const auto* record : bucket.records) {
    std::size_t best = 0;
    std::size_t best_distance = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < bucket.centers.size(); ++i) {
      const auto d = token_distance(record->tokens, bucket.centers[i]->tokens);
      if (d < best_distance) {
        best_distance = d;
        best = i;
      }
    }
    clusters[best].members.push_back(record);
  }
  for (auto& c : clusters) {
    std::sort(c.members.begin(), c.members.end(),
              [](const LogRecord* a, const LogRecord* b) { return a->line_id < b->line_id; });
  }
  std::erase_if(clusters, [](const Cluster& c) { return c.members.empty(); });
  return clusters;
}

}  // namespace lemur
