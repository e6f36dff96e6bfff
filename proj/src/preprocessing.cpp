#include "lemur/preprocessing.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace lemur {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_placeholder_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

void append_literal(std::string& regex, std::string_view literal) {
  static constexpr std::string_view kSpecial = R"(\^$.|?*+()[]{}/)";
  for (std::size_t i = 0; i < literal.size();) {
    const char c = literal[i];
    if (is_space(c)) {
      while (i < literal.size() && is_space(literal[i])) ++i;
      regex += R"(\s+)";
      continue;
    }
    if (kSpecial.find(c) != std::string_view::npos) regex += '\\';
    regex += c;
    ++i;
  }
}

}  // namespace

HeaderPattern HeaderPattern::compile(std::string_view template_text) {
  HeaderPattern pattern;
  pattern.template_text_ = std::string(template_text);

  std::string regex = "^";
  std::set<std::string> seen;
  std::size_t group = 0;
  std::size_t literal_start = 0;
  for (std::size_t i = 0; i < template_text.size(); ++i) {
    const char c = template_text[i];
    if (c == '>') {
      throw ConfigError("header pattern '" + pattern.template_text_ +
                        "': unbalanced '>' at offset " + std::to_string(i));
    }
    if (c != '<') continue;

    const auto close = template_text.find('>', i + 1);
    if (close == std::string_view::npos) {
      throw ConfigError("header pattern '" + pattern.template_text_ +
                        "': unbalanced '<' at offset " + std::to_string(i));
    }
    const auto name = template_text.substr(i + 1, close - i - 1);
    if (name.empty() || !std::all_of(name.begin(), name.end(), is_placeholder_char)) {
      throw ConfigError("header pattern '" + pattern.template_text_ +
                        "': malformed placeholder <" + std::string(name) + ">");
    }
    if (!seen.insert(std::string(name)).second) {
      throw ConfigError("header pattern '" + pattern.template_text_ +
                        "': duplicate placeholder <" + std::string(name) + ">");
    }

    append_literal(regex, template_text.substr(literal_start, i - literal_start));
    ++group;
    if (name == "Content") {
      pattern.content_group_ = group;
      regex += "(.*)";
    } else {
      regex += "(.*?)";
    }
    pattern.field_names_.emplace_back(name);
    i = close;
    literal_start = close + 1;
  }
  append_literal(regex, template_text.substr(std::min(literal_start, template_text.size())));
  regex += "$";

  if (pattern.content_group_ == 0) {
    throw ConfigError("header pattern '" + pattern.template_text_ +
                      "': missing <Content> placeholder");
  }
  pattern.regex_ = boost::regex(regex, boost::regex::perl);
  return pattern;
}

std::optional<HeaderPattern::Match> HeaderPattern::match(std::string_view line) const {
  boost::match_results<std::string_view::const_iterator> m;
  if (!boost::regex_match(line.begin(), line.end(), m, regex_)) return std::nullopt;

  Match out;
  for (std::size_t i = 0; i < field_names_.size(); ++i) {
    const auto& sub = m[static_cast<int>(i + 1)];
    if (i + 1 == content_group_) {
      out.content = sub.str();
    } else {
      out.header_fields.emplace(field_names_[i], sub.str());
    }
  }
  return out;
}

MaskRule MaskRule::make(std::string name, std::string pattern) {
  MaskRule rule;
  rule.name = std::move(name);
  rule.pattern = std::move(pattern);
  try {
    rule.compiled = boost::regex(rule.pattern, boost::regex::perl);
  } catch (const boost::regex_error& e) {
    throw ConfigError("mask rule '" + rule.name + "': invalid regular expression '" +
                      rule.pattern + "': " + e.what());
  }
  return rule;
}

std::vector<MaskRule> default_mask_rules() {
  std::vector<MaskRule> rules;
  rules.push_back(MaskRule::make("url", R"([A-Za-z][A-Za-z0-9+.\-]*://[^\s"']+)"));
  rules.push_back(
      MaskRule::make("ipv4", R"((?<![\d.])(?:\d{1,3}\.){3}\d{1,3}(?::\d+)?(?![\d.]))"));
  return rules;
}

std::string mask_variables(std::string_view content, std::span<const MaskRule> rules) {
  std::string out(content);
  for (const auto& rule : rules) {
    out = boost::regex_replace(out, rule.compiled, std::string(kWildcard),
                               boost::regex_constants::format_literal);
  }
  return out;
}

std::string strip_quotes(std::string_view content) {
  if (content.size() >= 2) {
    const char front = content.front();
    if ((front == '"' || front == '\'') && content.back() == front) {
      return std::string(content.substr(1, content.size() - 2));
    }
  }
  return std::string(content);
}

Tokens tokenize(std::string_view content, std::string_view split_chars) {
  Tokens tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < content.size();) {
    if (content.compare(i, kWildcard.size(), kWildcard) == 0) {
      current += kWildcard;
      i += kWildcard.size();
      continue;
    }
    const char c = content[i];
    if (is_space(c) || split_chars.find(c) != std::string_view::npos) {
      flush();
    } else {
      current += c;
    }
    ++i;
  }
  flush();
  return tokens;
}

Preprocessor::Preprocessor(HeaderPattern header, std::vector<MaskRule> rules,
                           std::string split_chars)
    : header_(std::move(header)), rules_(std::move(rules)), split_chars_(std::move(split_chars)) {}

LogRecord Preprocessor::process(std::size_t line_id, std::string_view raw) const {
  LogRecord record;
  record.line_id = line_id;
  record.raw = std::string(raw);
  if (auto m = header_.match(raw)) {
    record.header_fields = std::move(m->header_fields);
    record.message = std::move(m->content);
  } else {
    record.message = record.raw;
  }
  record.content = strip_quotes(mask_variables(record.message, rules_));
  record.tokens = tokenize(record.content, split_chars_);
  return record;
}

std::vector<LogRecord> Preprocessor::process_all(std::span<const std::string> lines) const {
  std::vector<LogRecord> records;
  records.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) records.push_back(process(i + 1, lines[i]));
  return records;
}

std::string sanitize_utf8(std::string_view bytes) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    std::uint32_t min_cp = 0;
    if (c < 0x80) {
      out += static_cast<char>(c);
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2, min_cp = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3, min_cp = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4, min_cp = 0x10000;
    }
    bool valid = len != 0 && i + len <= bytes.size();
    std::uint32_t cp = len ? (c & (0xFF >> (len + 1))) : 0;
    for (std::size_t j = 1; valid && j < len; ++j) {
      const auto cc = static_cast<unsigned char>(bytes[i + j]);
      if ((cc & 0xC0) != 0x80) valid = false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (valid && (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) valid = false;
    if (valid) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      out += kReplacement;
      ++i;
    }
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(sanitize_utf8(line));
  }
  if (in.bad()) throw InputError("error reading " + path.string());
  return lines;
}

}  // namespace lemur
