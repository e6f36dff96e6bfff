#include "lemur/template_generation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace lemur {

std::string event_id_for(TokenView tokens) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& t : tokens) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix(0x1F);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Tokens pairwise_lcs(TokenView a, TokenView b) {
  const std::size_t n = a.size(), m = b.size();
  // suffix[i][j] = LCS length of a[i..] and b[j..]
  std::vector<std::size_t> suffix((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return suffix[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = a[i] == b[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
    }
  }
  Tokens out;
  out.reserve(at(0, 0));
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      out.push_back(a[i]);
      ++i, ++j;
    } else if (at(i, j + 1) == at(i, j)) {
      ++j;  // keep the earliest position in a available
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace

Tokens longest_common_subsequence(std::span<const TokenView> sequences) {
  if (sequences.empty()) return {};
  Tokens acc(sequences.front().begin(), sequences.front().end());
  for (std::size_t s = 1; s < sequences.size() && !acc.empty(); ++s) {
    if (std::equal(acc.begin(), acc.end(), sequences[s].begin(), sequences[s].end())) continue;
    acc = pairwise_lcs(acc, sequences[s]);
  }
  return acc;
}

std::vector<std::size_t> divergent_positions(TokenView member, TokenView lcs) {
  std::vector<std::size_t> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < member.size(); ++i) {
    if (j < lcs.size() && member[i] == lcs[j]) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<PositionProfile> build_position_profiles(const Cluster& cluster) {
  const std::size_t length = cluster.bucket_length;
  std::vector<PositionProfile> profiles(length);
  for (std::size_t p = 0; p < length; ++p) profiles[p].position = p;
  if (cluster.members.empty()) return profiles;

  std::vector<TokenView> views;
  views.reserve(cluster.members.size());
  for (const auto* m : cluster.members) views.emplace_back(m->tokens);
  const Tokens lcs = longest_common_subsequence(views);

  for (const auto& v : views) {
    if (v.size() != length) throw DomainError("cluster member length differs from bucket length");
    for (std::size_t p = 0; p < length; ++p) {
      ++profiles[p].frequencies[v[p]];
      if (is_wildcard(v[p])) profiles[p].has_wildcard = true;
    }
    if (lcs.size() < length) {
      for (auto p : divergent_positions(v, lcs)) profiles[p].diverges_from_lcs = true;
    }
  }
  const double n = static_cast<double>(views.size());
  for (auto& profile : profiles) {
    profile.total = views.size();
    double h = 0.0;
    for (const auto& [token, count] : profile.frequencies) {
      const double q = static_cast<double>(count) / n;
      h -= q * std::log2(q);
    }
    profile.entropy = h;
  }
  return profiles;
}

bool decide_variation_point(const PositionProfile& profile, double theta) {
  return profile.diverges_from_lcs && profile.entropy > theta;
}

std::vector<GeneratedTemplate> generate_templates(const Cluster& cluster, double theta) {
  if (cluster.members.empty()) throw DomainError("generate_templates: empty cluster");
  const auto profiles = build_position_profiles(cluster);
  std::vector<bool> variable(profiles.size());
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    variable[p] = profiles[p].has_wildcard || decide_variation_point(profiles[p], theta);
  }

  std::vector<GeneratedTemplate> out;
  std::map<Tokens, std::size_t> index;
  for (const auto* member : cluster.members) {
    Tokens key = member->tokens;
    for (std::size_t p = 0; p < key.size(); ++p) {
      if (variable[p]) key[p] = kWildcard;
    }
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      GeneratedTemplate g;
      g.tmpl.event_id = event_id_for(key);
      g.tmpl.text = render_template_text(member->content, member->tokens, key);
      g.tmpl.tokens = std::move(key);
      out.push_back(std::move(g));
    }
    auto& g = out[it->second];
    g.members.push_back(member);
    ++g.tmpl.support;
  }
  return out;
}

std::vector<GeneratedTemplate> consolidate_templates(std::vector<GeneratedTemplate> templates) {
  const auto wildcards = [](const Template& t) {
    return std::count_if(t.tokens.begin(), t.tokens.end(), is_wildcard);
  };
  const std::size_t n = templates.size();
  std::vector<std::size_t> target(n);
  for (std::size_t b = 0; b < n; ++b) {
    target[b] = b;
    for (std::size_t a = 0; a < n; ++a) {
      if (a == b || templates[a].tmpl.tokens == templates[b].tmpl.tokens) continue;
      if (!matches_fixed(templates[a].tmpl.tokens, templates[b].tmpl.tokens)) continue;
      if (target[b] == b || wildcards(templates[a].tmpl) > wildcards(templates[target[b]].tmpl)) {
        target[b] = a;
      }
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (target[b] == b) continue;
    auto& into = templates[target[b]];
    into.tmpl.support += templates[b].tmpl.support;
    into.members.insert(into.members.end(), templates[b].members.begin(), templates[b].members.end());
  }
  std::vector<GeneratedTemplate> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (target[i] != i) continue;
    auto& g = templates[i];
    std::sort(g.members.begin(), g.members.end(),
              [](const LogRecord* x, const LogRecord* y) { return x->line_id < y->line_id; });
    out.push_back(std::move(g));
  }
  return out;
}

bool matches_fixed(TokenView pattern, TokenView tokens) {
  if (pattern.size() != tokens.size()) return false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (!is_wildcard(pattern[i]) && pattern[i] != tokens[i]) return false;
  }
  return true;
}

bool matches_variable_length(TokenView pattern, TokenView tokens) {
  // reach[j]: pattern prefix processed so far can consume exactly tokens[0..j)
  std::vector<char> reach(tokens.size() + 1, 0), next(tokens.size() + 1, 0);
  reach[0] = 1;
  for (const auto& p : pattern) {
    std::fill(next.begin(), next.end(), 0);
    if (is_wildcard(p)) {
      char any = 0;  // some reach[i] with i < j
      for (std::size_t j = 1; j <= tokens.size(); ++j) {
        any |= reach[j - 1];
        next[j] = any;
      }
    } else {
      for (std::size_t j = 1; j <= tokens.size(); ++j) {
        next[j] = reach[j - 1] && tokens[j - 1] == p;
      }
    }
    reach.swap(next);
  }
  return reach[tokens.size()] != 0;
}

bool matches_template(const Template& tmpl, TokenView tokens) {
  return tmpl.variable_length ? matches_variable_length(tmpl.tokens, tokens)
                              : matches_fixed(tmpl.tokens, tokens);
}

std::string render_template_text(std::string_view content, TokenView tokens, TokenView pattern) {
  if (tokens.size() != pattern.size()) return join_tokens(pattern);
  std::string out;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto at = content.find(tokens[i], cursor);
    if (at == std::string_view::npos) return join_tokens(pattern);
    out.append(content.substr(cursor, at - cursor));
    out.append(pattern[i] == tokens[i] ? tokens[i] : std::string(kWildcard));
    cursor = at + tokens[i].size();
  }
  out.append(content.substr(cursor));
  return out;
}

std::string join_tokens(TokenView tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace lemur
