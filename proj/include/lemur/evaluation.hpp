#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace lemur {

/// line_id -> event identifier.
using Assignment = std::map<std::size_t, std::string>;

struct GroundTruth {
  Assignment assignments;
  std::map<std::string, std::string> templates;      // event id -> template text
  std::map<std::size_t, std::string> template_text;  // line_id -> template text (may be empty)
};

/// LogHub "_structured" CSV: LineId and EventId are required, EventTemplate
/// is optional. Throws InputError on missing files, columns or duplicates.
GroundTruth load_ground_truth(const std::filesystem::path& path);

struct TemplateCounts {
  std::size_t n_g = 0;  // ground-truth groups
  std::size_t n_p = 0;  // parsed groups
  std::size_t n_c = 0;  // parsed groups equal to some ground-truth group
};

/// Fraction of messages whose parsed group has exactly the same members as
/// their ground-truth group. Throws InputError if line ids differ.
double grouping_accuracy(const Assignment& parsed, const GroundTruth& truth);

TemplateCounts template_level_counts(const Assignment& parsed, const GroundTruth& truth);

double precision_of_grouping(const TemplateCounts& counts);
double recall_of_grouping(const TemplateCounts& counts);
double f1_of_grouping(double pga, double rga);

/// Fraction of messages whose emitted template text equals the ground-truth
/// template after whitespace normalisation. nullopt without template text.
std::optional<double> parsing_accuracy(const std::map<std::size_t, std::string>& parsed_text,
                                       const GroundTruth& truth);

struct EvaluationReport {
  std::string dataset;
  TemplateCounts counts;
  double pga = 0.0, rga = 0.0, fga = 0.0, ga = 0.0;
  std::optional<double> pa;
  double wall_seconds = 0.0;
  double backend_seconds = 0.0;
};

EvaluationReport evaluate(const Assignment& parsed,
                          const std::map<std::size_t, std::string>& parsed_text,
                          const GroundTruth& truth);

std::string report_csv_header();
std::string report_csv_row(const EvaluationReport& report);

}  // namespace lemur
