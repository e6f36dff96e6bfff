#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lemur/commands.hpp"

namespace {

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    sizes.push_back(std::stoul(item));
  }
  if (sizes.empty()) throw lemur::ConfigError("--sizes needs at least one value");
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lemur: entropy-sampling log parser"};
  app.require_subcommand(1);

  std::string config_path, data_root, dataset, output_dir, cot, strategy, ground_truth;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "YAML dataset configuration")->required();
    cmd->add_option("--dataset", dataset, "dataset name from the config")->required();
    cmd->add_option("--data-root", data_root, "resolve relative data paths against this directory");
    cmd->add_option("--output-dir", output_dir, "where to write CSV outputs");
    cmd->add_option("--cot", cot, "cross-length merging: off, offline or remote")
        ->check(CLI::IsMember({"off", "offline", "remote"}));
    cmd->add_option("--strategy", strategy, "center sampling strategy")
        ->check(CLI::IsMember({"entropy_first_token", "entropy_only", "first_token_only", "random"}));
    cmd->add_option("--seed", seed, "seed for --strategy random");
    cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* parse = app.add_subcommand("parse", "parse a log file into templates");
  add_common(parse);
  auto* eval = app.add_subcommand("eval", "parse and score against ground truth");
  add_common(eval);
  eval->add_option("--ground-truth", ground_truth, "structured CSV (overrides config)");
  auto* bench = app.add_subcommand("bench", "time the parser on prefixes of a log file");
  add_common(bench);
  std::string sizes_text = "500,1000,2000,4000";
  int repeats = 3;
  bench->add_option("--sizes", sizes_text, "comma-separated prefix sizes");
  bench->add_option("--repeats", repeats, "runs per size; the fastest is reported")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto configs = lemur::load_config(
        config_path, data_root.empty() ? std::nullopt : std::optional<std::filesystem::path>(data_root));
    const auto& cfg = lemur::find_dataset(configs, dataset);

    lemur::RunOptions options;
    if (!output_dir.empty()) options.output_dir = output_dir;
    if (!cot.empty()) options.cot = lemur::parse_cot_mode(cot);
    if (!strategy.empty()) options.strategy = lemur::parse_sampling_strategy(strategy);
    if (!ground_truth.empty()) options.ground_truth = ground_truth;
    options.seed = seed;
    options.jobs = jobs;

    if (parse->parsed()) {
      const auto run = lemur::cmd_parse(cfg, options);
      std::cout << cfg.name << ": " << run.result.records.size() << " lines, "
                << run.result.templates.size() << " templates, " << run.result.wall_seconds
                << " s\n"
                << run.paths.structured.string() << "\n"
                << run.paths.templates.string() << "\n";
    } else if (eval->parsed()) {
      const auto report = lemur::cmd_eval(cfg, options);
      std::cout << lemur::report_csv_header() << lemur::report_csv_row(report);
    } else if (bench->parsed()) {
      const auto rows = lemur::cmd_bench(cfg, parse_sizes(sizes_text), options, std::cerr, repeats);
      std::cout << lemur::bench_csv_header();
      for (const auto& row : rows) std::cout << lemur::bench_csv_row(row);
    }
  } catch (const lemur::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
