#include "lemur/remote_backend.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace lemur {

HttpChatBackend::HttpChatBackend(RemoteBackendSettings settings) : settings_(std::move(settings)) {
  if (settings_.api_key.empty() && !settings_.api_key_env.empty()) {
    if (const char* key = std::getenv(settings_.api_key_env.c_str())) settings_.api_key = key;
  }
  const auto scheme_end = settings_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("remote backend base_url '" + settings_.base_url + "' lacks a scheme");
  }
  const auto path_start = settings_.base_url.find('/', scheme_end + 3);
  origin_ = settings_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : settings_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpChatBackend::request_body(const std::string& prompt) const {
  nlohmann::json body = {
      {"model", settings_.model},
      {"temperature", 0},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
  };
  return body.dump();
}

std::string HttpChatBackend::complete(const PromptBundle& prompt) {
  httplib::Client client(origin_);
  client.set_connection_timeout(settings_.timeout_seconds, 0);
  client.set_read_timeout(settings_.timeout_seconds, 0);
  client.set_write_timeout(settings_.timeout_seconds, 0);

  httplib::Headers headers;
  if (!settings_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + settings_.api_key);
  }
  auto res = client.Post(path_prefix_ + "/chat/completions", headers,
                         request_body(prompt.rendered), "application/json");
  if (!res) {
    throw TransportError("chat backend " + origin_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("chat backend " + origin_ + ": HTTP " + std::to_string(res->status));
  }
  return extract_completion(res->body);
}

std::string extract_completion(const std::string& response_body) {
  const auto json = nlohmann::json::parse(response_body, nullptr, false);
  if (json.is_discarded() || !json.is_object()) return {};
  const auto choices = json.find("choices");
  if (choices == json.end() || !choices->is_array() || choices->empty()) return {};
  const auto& first = (*choices)[0];
  if (!first.is_object() || !first.contains("message")) return {};
  const auto& message = first["message"];
  if (!message.is_object() || !message.contains("content") || !message["content"].is_string()) {
    return {};
  }
  return message["content"].get<std::string>();
}

}  // namespace lemur
