#pragma once

#include <vector>

#include "lemur/bucketing.hpp"

namespace lemur {

struct Cluster {
  const LogRecord* center = nullptr;
  std::vector<const LogRecord*> members;  // includes the center, line_id order
  std::size_t bucket_length = 0;
};

/// Number of positions at which two equal-length sequences differ.
/// "<*>" compares as an ordinary token here.
std::size_t token_distance(TokenView a, TokenView b);

/// Single-pass nearest-center assignment; ties go to the lowest center index.
/// Clusters come back in center order and empty clusters are dropped.
std::vector<Cluster> assign_clusters(const Bucket& bucket);

}  // namespace lemur
