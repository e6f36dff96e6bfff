#pragma once

#include <map>
#include <string>
#include <vector>

#include "lemur/clustering.hpp"

namespace lemur {

/// Token statistics of one position across a cluster.
struct PositionProfile {
  std::size_t position = 0;
  std::map<std::string, std::size_t> frequencies;
  std::size_t total = 0;
  double entropy = 0.0;
  bool diverges_from_lcs = false;
  bool has_wildcard = false;  // some member already carries a masked "<*>" here
};

struct Template {
  std::string event_id;
  Tokens tokens;
  std::size_t support = 0;
  std::string text;  // display form, original delimiters kept where known
  // Set on templates produced by cross-length merging: each "<*>" then
  // absorbs a run of one or more tokens.
  bool variable_length = false;

  std::size_t length() const { return tokens.size(); }
};

/// Stable content hash of a token sequence (16 lowercase hex digits).
std::string event_id_for(TokenView tokens);

/// Pairwise LCS folded over the sequences in order. Among equally long
/// answers the leftmost alignment in the first operand wins.
Tokens longest_common_subsequence(std::span<const TokenView> sequences);

/// Positions of `member` left over after greedily aligning `lcs` into it.
std::vector<std::size_t> divergent_positions(TokenView member, TokenView lcs);

std::vector<PositionProfile> build_position_profiles(const Cluster& cluster);

/// Variable iff some member diverges from the LCS there and entropy > theta.
bool decide_variation_point(const PositionProfile& profile, double theta);

struct GeneratedTemplate {
  Template tmpl;
  std::vector<const LogRecord*> members;
};

/// Wildcards every variable position (and any position holding a masked
/// "<*>"). Members that still disagree on a non-variable position are split
/// into separate templates, so each member matches its template exactly.
/// Output is ordered by first member line_id; in the common case there is
/// one template per cluster.
std::vector<GeneratedTemplate> generate_templates(const Cluster& cluster, double theta);

/// Folds every template that a more general template of the same bucket
/// already matches into the most general such template (most wildcards,
/// earliest on ties). Members and support move along; order is kept.
std::vector<GeneratedTemplate> consolidate_templates(std::vector<GeneratedTemplate> templates);

/// Per-position match for fixed templates; variable-length wildcard runs for
/// merged templates.
bool matches_template(const Template& tmpl, TokenView tokens);
bool matches_fixed(TokenView pattern, TokenView tokens);
bool matches_variable_length(TokenView pattern, TokenView tokens);

/// Copies `content` with the tokens at wildcard positions of `pattern`
/// replaced by "<*>". `tokens` must be tokenize(content, ...).
std::string render_template_text(std::string_view content, TokenView tokens, TokenView pattern);

std::string join_tokens(TokenView tokens);

}  // namespace lemur
