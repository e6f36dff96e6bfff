#include "lemur/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace lemur {

void DatasetConfig::validate() const {
  auto fail = [&](std::string_view field, std::string_view what) {
    throw ConfigError("dataset '" + name + "': field '" + std::string(field) + "' " +
                      std::string(what));
  };
  if (name.empty()) throw ConfigError("dataset without a name");
  if (log_file.empty()) fail("log_file", "is required");
  if (k < 1) fail("k", "must be >= 1");
  if (!(jaccard_threshold >= 0.0 && jaccard_threshold <= 1.0)) {
    fail("jaccard_threshold", "must lie in [0, 1]");
  }
  if (!(theta >= 0.0)) fail("theta", "must be >= 0");
  if (n_layers < 1) fail("n_layers", "must be >= 1");
  if (!(candidate_min_similarity >= 0.0 && candidate_min_similarity <= 1.0)) {
    fail("candidate_min_similarity", "must lie in [0, 1]");
  }
  try {
    (void)compile_header_pattern(header_pattern);
  } catch (const ConfigError& e) {
    fail("header_pattern", e.what());
  }
  if (cot == CotMode::remote) {
    if (remote.base_url.empty()) fail("remote.base_url", "is required when cot is remote");
    if (remote.model.empty()) fail("remote.model", "is required when cot is remote");
    if (remote.max_concurrency < 1) fail("remote.max_concurrency", "must be >= 1");
  }
}

namespace {

const std::set<std::string> kDatasetKeys = {
    "name",  "log_file", "ground_truth", "header_pattern", "split_tokens",
    "k",     "jaccard_threshold", "theta", "n_layers", "candidate_min_similarity",
    "mask_rules", "cot", "remote"};

template <typename T>
T scalar(const YAML::Node& node, const std::string& dataset, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("dataset '" + dataset + "': field '" + field + "' has the wrong type");
  }
}

std::size_t count_field(const YAML::Node& node, const std::string& dataset,
                        const std::string& field) {
  const auto v = scalar<long long>(node, dataset, field);
  if (v < 0) throw ConfigError("dataset '" + dataset + "': field '" + field + "' must be >= 1");
  return static_cast<std::size_t>(v);
}

std::string split_chars(const YAML::Node& node, const std::string& dataset) {
  if (node.IsNull()) return {};
  if (node.IsScalar()) return node.as<std::string>();
  if (!node.IsSequence()) {
    throw ConfigError("dataset '" + dataset + "': field 'split_tokens' must be a string or list");
  }
  std::string out;
  for (const auto& item : node) {
    const auto s = item.as<std::string>();
    if (s.size() != 1) {
      throw ConfigError("dataset '" + dataset + "': field 'split_tokens' entry '" + s +
                        "' is not a single character");
    }
    out += s;
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& root, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : root / path;
}

void apply(DatasetConfig& cfg, const YAML::Node& node, const std::filesystem::path& root) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!kDatasetKeys.contains(key)) {
      throw ConfigError("dataset '" + cfg.name + "': unknown field '" + key + "'");
    }
  }
  const std::string& ds = cfg.name;
  if (node["log_file"]) cfg.log_file = resolve(root, scalar<std::string>(node["log_file"], ds, "log_file"));
  if (node["ground_truth"]) {
    cfg.ground_truth = resolve(root, scalar<std::string>(node["ground_truth"], ds, "ground_truth"));
  }
  if (node["header_pattern"]) cfg.header_pattern = scalar<std::string>(node["header_pattern"], ds, "header_pattern");
  if (node["split_tokens"]) cfg.split_tokens = split_chars(node["split_tokens"], ds);
  if (node["k"]) cfg.k = count_field(node["k"], ds, "k");
  if (node["jaccard_threshold"]) cfg.jaccard_threshold = scalar<double>(node["jaccard_threshold"], ds, "jaccard_threshold");
  if (node["theta"]) cfg.theta = scalar<double>(node["theta"], ds, "theta");
  if (node["n_layers"]) cfg.n_layers = count_field(node["n_layers"], ds, "n_layers");
  if (node["candidate_min_similarity"]) {
    cfg.candidate_min_similarity =
        scalar<double>(node["candidate_min_similarity"], ds, "candidate_min_similarity");
  }
  if (node["cot"]) {
    try {
      cfg.cot = parse_cot_mode(scalar<std::string>(node["cot"], ds, "cot"));
    } catch (const ConfigError& e) {
      throw ConfigError("dataset '" + ds + "': field 'cot': " + e.what());
    }
  }
  if (const auto masks = node["mask_rules"]) {
    if (!masks.IsSequence() && !masks.IsNull()) {
      throw ConfigError("dataset '" + ds + "': field 'mask_rules' must be a list");
    }
    cfg.mask_rules.clear();
    for (const auto& m : masks) {
      if (!m["pattern"]) {
        throw ConfigError("dataset '" + ds + "': field 'mask_rules' entry lacks 'pattern'");
      }
      const auto pattern = scalar<std::string>(m["pattern"], ds, "mask_rules.pattern");
      const auto name = m["name"] ? scalar<std::string>(m["name"], ds, "mask_rules.name")
                                  : "rule" + std::to_string(cfg.mask_rules.size() + 1);
      try {
        cfg.mask_rules.push_back(MaskRule::make(name, pattern));
      } catch (const ConfigError& e) {
        throw ConfigError("dataset '" + ds + "': field 'mask_rules': " + e.what());
      }
    }
  }
  if (const auto r = node["remote"]) {
    if (r["base_url"]) cfg.remote.base_url = scalar<std::string>(r["base_url"], ds, "remote.base_url");
    if (r["model"]) cfg.remote.model = scalar<std::string>(r["model"], ds, "remote.model");
    if (r["api_key"]) cfg.remote.api_key = scalar<std::string>(r["api_key"], ds, "remote.api_key");
    if (r["api_key_env"]) cfg.remote.api_key_env = scalar<std::string>(r["api_key_env"], ds, "remote.api_key_env");
    if (r["timeout_seconds"]) cfg.remote.timeout_seconds = scalar<int>(r["timeout_seconds"], ds, "remote.timeout_seconds");
    if (r["max_concurrency"]) {
      cfg.remote.max_concurrency = static_cast<unsigned>(count_field(r["max_concurrency"], ds, "remote.max_concurrency"));
    }
  }
}

}  // namespace

std::vector<DatasetConfig> parse_config(const std::string& yaml_text,
                                        const std::filesystem::path& base_dir,
                                        const std::optional<std::filesystem::path>& data_root) {
  YAML::Node doc;
  try {
    doc = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!doc.IsMap() || !doc["datasets"] || !doc["datasets"].IsSequence()) {
    throw ConfigError("config needs a top-level 'datasets' list");
  }
  std::filesystem::path root = base_dir;
  if (data_root) {
    root = *data_root;
  } else if (doc["data_root"]) {
    root = resolve(base_dir, doc["data_root"].as<std::string>());
  }

  std::vector<DatasetConfig> configs;
  std::set<std::string> names;
  for (const auto& entry : doc["datasets"]) {
    DatasetConfig cfg;
    if (!entry.IsMap() || !entry["name"]) throw ConfigError("dataset entry without a 'name'");
    cfg.name = entry["name"].as<std::string>();
    if (!names.insert(cfg.name).second) throw ConfigError("duplicate dataset '" + cfg.name + "'");
    if (const auto defaults = doc["defaults"]) apply(cfg, defaults, root);
    apply(cfg, entry, root);
    cfg.validate();
    configs.push_back(std::move(cfg));
  }
  return configs;
}

std::vector<DatasetConfig> load_config(const std::filesystem::path& path,
                                       const std::optional<std::filesystem::path>& data_root) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path(), data_root);
}

const DatasetConfig& find_dataset(const std::vector<DatasetConfig>& configs,
                                  std::string_view name) {
  for (const auto& c : configs) {
    if (c.name == name) return c;
  }
  throw ConfigError("no dataset named '" + std::string(name) + "' in config");
}

}  // namespace lemur
