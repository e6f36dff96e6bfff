#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lemur::testing {

/// A generated log file with LogHub-style ground truth.
struct SyntheticDataset {
  std::string name;
  std::vector<std::string> lines;
  std::vector<std::string> contents;
  std::vector<std::string> event_ids;
  std::vector<std::string> event_templates;
};

/// Names: HDFS, Apache, Proxifier, Zookeeper, Spark, BGL, MultiLength.
/// Output depends only on (name, size, seed).
SyntheticDataset generate_dataset(const std::string& name, std::size_t size, std::uint64_t seed);

/// Writes <dir>/<name>/<name>_2k.log and <name>_2k.log_structured.csv, the
/// layout the shipped config expects.
void write_dataset(const SyntheticDataset& dataset, const std::filesystem::path& dir);

}  // namespace lemur::testing
