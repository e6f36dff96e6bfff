#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lemur {

using Tokens = std::vector<std::string>;
using TokenView = std::span<const std::string>;

inline constexpr std::string_view kWildcard = "<*>";

inline bool is_wildcard(std::string_view token) { return token == kWildcard; }

/// Bad configuration: unreadable pattern, invalid hyperparameter, bad regex.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A kernel was called outside its domain (empty sequence, length mismatch).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent input data (ground truth, log files).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A completion backend could not be reached. Retryable.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lemur
