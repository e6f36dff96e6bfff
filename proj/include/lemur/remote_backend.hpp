#pragma once

#include <string>

#include "lemur/cot_merging.hpp"

namespace lemur {

struct RemoteBackendSettings {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string model;
  std::string api_key;
  std::string api_key_env = "LEMUR_API_KEY";
  int timeout_seconds = 60;
  unsigned max_concurrency = 4;
};

/// OpenAI-style chat completion client: POST {base_url}/chat/completions with
/// one user message and temperature 0; the answer is
/// choices[0].message.content.
class HttpChatBackend final : public CompletionBackend {
 public:
  /// Reads the key from settings.api_key, falling back to the environment
  /// variable named by settings.api_key_env.
  explicit HttpChatBackend(RemoteBackendSettings settings);

  std::string name() const override { return "remote:" + settings_.model; }
  std::string complete(const PromptBundle& prompt) override;

  /// Request body for a prompt; exposed for tests.
  std::string request_body(const std::string& prompt) const;

 private:
  RemoteBackendSettings settings_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // path part of base_url without trailing '/'
};

/// Extracts choices[0].message.content; empty on malformed bodies.
std::string extract_completion(const std::string& response_body);

}  // namespace lemur
