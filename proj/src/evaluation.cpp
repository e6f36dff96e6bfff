#include "lemur/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "lemur/common.hpp"
#include "lemur/csv.hpp"

namespace lemur {

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open ground truth " + path.string());
  CsvReader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) throw InputError("ground truth " + path.string() + " is empty");

  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string_view cell = row[i];
      if (cell.rfind("\xEF\xBB\xBF", 0) == 0) cell.remove_prefix(3);
      if (cell == name) return i;
    }
    return std::nullopt;
  };
  const auto line_col = column("LineId");
  const auto event_col = column("EventId");
  const auto template_col = column("EventTemplate");
  if (!line_col || !event_col) {
    throw InputError("ground truth " + path.string() + " needs LineId and EventId columns");
  }

  GroundTruth truth;
  std::size_t row_number = 1;
  while (reader.next(row)) {
    ++row_number;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() <= std::max(*line_col, *event_col)) {
      throw InputError(path.string() + ":" + std::to_string(row_number) + ": short row");
    }
    std::size_t line_id = 0;
    try {
      line_id = std::stoul(row[*line_col]);
    } catch (const std::exception&) {
      throw InputError(path.string() + ":" + std::to_string(row_number) + ": bad LineId '" +
                       row[*line_col] + "'");
    }
    if (!truth.assignments.emplace(line_id, row[*event_col]).second) {
      throw InputError(path.string() + ": duplicate LineId " + std::to_string(line_id));
    }
    if (template_col && *template_col < row.size()) {
      truth.template_text[line_id] = row[*template_col];
      truth.templates.emplace(row[*event_col], row[*template_col]);
    }
  }
  return truth;
}

namespace {

using Groups = std::unordered_map<std::string, std::vector<std::size_t>>;

void check_coverage(const Assignment& parsed, const Assignment& truth) {
  const bool same = parsed.size() == truth.size() &&
                    std::equal(parsed.begin(), parsed.end(), truth.begin(),
                               [](const auto& a, const auto& b) { return a.first == b.first; });
  if (!same) {
    throw InputError("parsed output covers " + std::to_string(parsed.size()) +
                     " lines but ground truth covers " + std::to_string(truth.size()) +
                     " (or the line ids differ)");
  }
}

Groups group_lines(const Assignment& a) {
  Groups groups;
  for (const auto& [line, event] : a) groups[event].push_back(line);
  return groups;
}

// Parsed group -> whether its member set equals a ground-truth group.
std::unordered_map<std::string, bool> exact_groups(const Assignment& parsed,
                                                   const GroundTruth& truth) {
  check_coverage(parsed, truth.assignments);
  const auto truth_groups = group_lines(truth.assignments);
  std::unordered_map<std::string, bool> exact;
  for (const auto& [event, lines] : group_lines(parsed)) {
    const auto& truth_event = truth.assignments.at(lines.front());
    bool ok = truth_groups.at(truth_event).size() == lines.size();
    for (std::size_t i = 1; ok && i < lines.size(); ++i) {
      ok = truth.assignments.at(lines[i]) == truth_event;
    }
    exact.emplace(event, ok);
  }
  return exact;
}

}  // namespace

double grouping_accuracy(const Assignment& parsed, const GroundTruth& truth) {
  const auto exact = exact_groups(parsed, truth);
  if (parsed.empty()) return 1.0;
  std::size_t correct = 0;
  for (const auto& [line, event] : parsed) correct += exact.at(event) ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(parsed.size());
}

TemplateCounts template_level_counts(const Assignment& parsed, const GroundTruth& truth) {
  const auto exact = exact_groups(parsed, truth);
  TemplateCounts counts;
  counts.n_p = exact.size();
  counts.n_g = group_lines(truth.assignments).size();
  counts.n_c = static_cast<std::size_t>(
      std::count_if(exact.begin(), exact.end(), [](const auto& e) { return e.second; }));
  return counts;
}

double precision_of_grouping(const TemplateCounts& c) {
  return c.n_p ? static_cast<double>(c.n_c) / static_cast<double>(c.n_p) : 0.0;
}

double recall_of_grouping(const TemplateCounts& c) {
  return c.n_g ? static_cast<double>(c.n_c) / static_cast<double>(c.n_g) : 0.0;
}

double f1_of_grouping(double pga, double rga) {
  return pga + rga > 0.0 ? 2.0 * pga * rga / (pga + rga) : 0.0;
}

namespace {

std::string normalize_whitespace(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::string word, out;
  while (in >> word) {
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

}  // namespace

std::optional<double> parsing_accuracy(const std::map<std::size_t, std::string>& parsed_text,
                                       const GroundTruth& truth) {
  if (truth.template_text.empty() || truth.template_text.size() != truth.assignments.size()) {
    return std::nullopt;
  }
  std::size_t correct = 0;
  for (const auto& [line, text] : truth.template_text) {
    const auto it = parsed_text.find(line);
    if (it != parsed_text.end() && normalize_whitespace(it->second) == normalize_whitespace(text)) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(truth.template_text.size());
}

EvaluationReport evaluate(const Assignment& parsed,
                          const std::map<std::size_t, std::string>& parsed_text,
                          const GroundTruth& truth) {
  EvaluationReport r;
  r.counts = template_level_counts(parsed, truth);
  r.pga = precision_of_grouping(r.counts);
  r.rga = recall_of_grouping(r.counts);
  r.fga = f1_of_grouping(r.pga, r.rga);
  r.ga = grouping_accuracy(parsed, truth);
  r.pa = parsing_accuracy(parsed_text, truth);
  return r;
}

std::string report_csv_header() {
  return "dataset,N_g,N_p,N_c,PGA,RGA,FGA,GA,wall_seconds,PA,backend_seconds\n";
}

std::string report_csv_row(const EvaluationReport& r) {
  auto fixed = [](double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return std::string(buf);
  };
  return csv_row({r.dataset, std::to_string(r.counts.n_g), std::to_string(r.counts.n_p),
                  std::to_string(r.counts.n_c), fixed(r.pga, 6), fixed(r.rga, 6),
                  fixed(r.fga, 6), fixed(r.ga, 6), fixed(r.wall_seconds, 3),
                  r.pa ? fixed(*r.pa, 6) : std::string{}, fixed(r.backend_seconds, 3)});
}

}  // namespace lemur
