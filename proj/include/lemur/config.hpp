#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lemur/pipeline.hpp"
#include "lemur/preprocessing.hpp"
#include "lemur/remote_backend.hpp"

namespace lemur {

/// One dataset's hyperparameters and inputs.
struct DatasetConfig {
  std::string name;
  std::filesystem::path log_file;
  std::optional<std::filesystem::path> ground_truth;
  std::string header_pattern = "<Content>";
  std::string split_tokens;  // each character is a delimiter
  std::size_t k = 1;
  double jaccard_threshold = 0.7;
  double theta = 0.0;
  std::size_t n_layers = 3;
  double candidate_min_similarity = 0.7;
  std::vector<MaskRule> mask_rules = default_mask_rules();
  CotMode cot = CotMode::offline;
  RemoteBackendSettings remote;

  /// Throws ConfigError naming the dataset and the offending field.
  void validate() const;
};

/// Parses a YAML document with a `datasets:` list and optional `defaults:`
/// and `data_root:` keys. Relative paths resolve against data_root, which
/// itself defaults to `base_dir`.
/// A given `data_root` overrides the document's own.
std::vector<DatasetConfig> parse_config(const std::string& yaml_text,
                                        const std::filesystem::path& base_dir,
                                        const std::optional<std::filesystem::path>& data_root = {});

std::vector<DatasetConfig> load_config(const std::filesystem::path& path,
                                       const std::optional<std::filesystem::path>& data_root = {});

/// Throws ConfigError when no dataset has this name.
const DatasetConfig& find_dataset(const std::vector<DatasetConfig>& configs,
                                  std::string_view name);

}  // namespace lemur
