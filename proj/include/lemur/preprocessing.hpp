#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "lemur/common.hpp"

namespace lemur {

/// Compiled form of a LogHub-style header format such as
/// "<Date> <Time> <Pid> <Level> <Component>: <Content>".
///
/// Literal text between placeholders must match exactly, except that a run of
/// whitespace matches any non-empty whitespace run. Non-Content placeholders
/// match lazily up to the next literal; <Content> takes the rest of the line.
class HeaderPattern {
 public:
  struct Match {
    std::map<std::string, std::string> header_fields;  // excludes Content
    std::string content;
  };

  static HeaderPattern compile(std::string_view template_text);

  std::optional<Match> match(std::string_view line) const;

  const std::string& template_text() const { return template_text_; }
  const std::vector<std::string>& field_names() const { return field_names_; }

 private:
  std::string template_text_;
  std::vector<std::string> field_names_;
  std::size_t content_group_ = 0;
  boost::regex regex_;
};

inline HeaderPattern compile_header_pattern(std::string_view template_text) {
  return HeaderPattern::compile(template_text);
}

struct MaskRule {
  std::string name;
  std::string pattern;
  boost::regex compiled;

  /// Throws ConfigError when the pattern does not compile.
  static MaskRule make(std::string name, std::string pattern);
};

/// IPv4 with optional port and scheme-prefixed URLs.
std::vector<MaskRule> default_mask_rules();

std::string mask_variables(std::string_view content, std::span<const MaskRule> rules);

/// Removes one wrapping pair of identical quotes (' or ").
std::string strip_quotes(std::string_view content);

/// Splits on whitespace and on every character in `split_chars` (dropped).
/// The wildcard "<*>" is never split.
Tokens tokenize(std::string_view content, std::string_view split_chars);

struct LogRecord {
  std::size_t line_id = 0;  // 1-based
  std::string raw;
  std::map<std::string, std::string> header_fields;
  std::string message;  // extracted content before masking
  std::string content;  // after masking and quote stripping
  Tokens tokens;
};

class Preprocessor {
 public:
  Preprocessor(HeaderPattern header, std::vector<MaskRule> rules, std::string split_chars);

  /// Lines that do not match the header keep the whole line as content.
  LogRecord process(std::size_t line_id, std::string_view raw) const;

  std::vector<LogRecord> process_all(std::span<const std::string> lines) const;

  const std::string& split_chars() const { return split_chars_; }

 private:
  HeaderPattern header_;
  std::vector<MaskRule> rules_;
  std::string split_chars_;
};

/// Reads a text file line by line; invalid UTF-8 is replaced with U+FFFD and
/// a trailing '\r' is dropped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

std::string sanitize_utf8(std::string_view bytes);

}  // namespace lemur
