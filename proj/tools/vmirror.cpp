// vmirror command line: analyze, correlate, export-graphs, surface, generate.
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "vmirror/config.hpp"
#include "vmirror/pipeline.hpp"
#include "vmirror/report.hpp"
#include "vmirror/synth.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("vmirror");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("VMIRROR_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

std::string config_keys_help() {
  std::string out = "Config keys (file lines `key = value`, or --set key=value):\n";
  for (const auto& k : vmirror::config_keys()) {
    out += fmt::format("  {:<22} {}{}\n", k.name, k.help,
                       k.default_value.empty() ? "" : fmt::format(" [{}]", k.default_value));
  }
  out += "\nExit codes: 0 success, 1 runtime failure, 2 invalid configuration or usage.\n"
         "Set VMIRROR_LOG=debug|info|warn|error|off to change log verbosity.";
  return out;
}

void report_diagnostics(const vmirror::Diagnostics& d) {
  for (const auto& [kind, count] : d.counts) spdlog::warn("{}: {} message(s)", kind, count);
  for (const auto& detail : d.details) spdlog::debug("{}", detail);
}

void print_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << '\n';
}

vmirror::RunConfig load(const std::string& path, std::vector<std::string> overrides,
                        const std::string& output) {
  if (!output.empty()) overrides.push_back("output=" + std::filesystem::absolute(output).string());
  spdlog::info("loading config {}", path);
  return vmirror::load_config(path, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"vmirror: e-mail network metrics for distributed project teams"};
  app.footer(config_keys_help());
  app.require_subcommand(1);
  app.set_version_flag("--version", VMIRROR_VERSION);

  std::string config_path, output;
  std::vector<std::string> overrides;

  auto* analyze = app.add_subcommand("analyze", "Compute team metrics, correlations and figures");
  analyze->add_option("-c,--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--set", overrides, "Override a config key (key=value), repeatable");
  analyze->add_option("-o,--output", output, "Output directory (overrides the config)");

  std::string metrics_csv, columns_arg;
  auto* correlate = app.add_subcommand("correlate", "Correlate columns of a team metrics CSV");
  correlate->add_option("-m,--metrics", metrics_csv, "Team metrics CSV")->required()->check(CLI::ExistingFile);
  correlate->add_option("--columns", columns_arg, "Comma-separated columns (default: all numeric)");
  correlate->add_option("-o,--output", output, "Output directory")->default_val("vmirror-out");

  int snapshots = 6;
  auto* graphs = app.add_subcommand("export-graphs", "Write edge lists and DOT files");
  graphs->add_option("-c,--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  graphs->add_option("--set", overrides, "Override a config key (key=value), repeatable");
  graphs->add_option("-o,--output", output, "Output directory")->required();
  graphs->add_option("--snapshots", snapshots, "Evenly spaced window snapshots")
      ->check(CLI::Range(0, 1000));

  std::string team;
  auto* surface = app.add_subcommand("surface", "Write betweenness surfaces and leader series");
  surface->add_option("-c,--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  surface->add_option("--set", overrides, "Override a config key (key=value), repeatable");
  surface->add_option("-o,--output", output, "Output directory")->required();
  surface->add_option("--team", team, "Only this team");

  int days = 150, chatter = 0;
  std::uint64_t seed = 42;
  bool no_noise = false;
  auto* generate = app.add_subcommand("generate", "Write a synthetic course with ground truth");
  generate->add_option("-o,--output", output, "Output directory")->required();
  generate->add_option("--days", days, "Course length in days")->check(CLI::Range(7, 3650));
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--chatter", chatter, "Extra notes per team and day")->check(CLI::Range(0, 100));
  generate->add_flag("--no-noise", no_noise, "Omit duplicates, aliases and malformed messages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*analyze) {
      auto cfg = load(config_path, overrides, output);
      auto result = vmirror::run_analysis(cfg);
      report_diagnostics(result.diagnostics);
      for (const auto& row : result.rows) {
        if (!row.art_norm_min) spdlog::warn("team {}: no replies detected, ART missing", row.team);
      }
      print_files(result.files);
    } else if (*correlate) {
      std::vector<std::string> columns;
      if (columns_arg.empty()) {
        columns = vmirror::default_correlation_columns();
      } else {
        std::string item;
        std::istringstream in(columns_arg);
        while (std::getline(in, item, ',')) {
          if (!item.empty()) columns.push_back(item);
        }
      }
      auto table = vmirror::run_correlate(metrics_csv, columns, output);
      vmirror::write_correlations_text(table, std::cout);
    } else if (*graphs) {
      auto cfg = load(config_path, overrides, "");
      print_files(vmirror::export_graphs(cfg, output, snapshots));
    } else if (*surface) {
      auto cfg = load(config_path, overrides, "");
      std::optional<vmirror::TeamId> only;
      if (!team.empty()) only = team;
      print_files(vmirror::export_surfaces(cfg, output, only));
    } else if (*generate) {
      auto params = vmirror::default_course_params(days, seed);
      params.chatter_per_day = chatter;
      params.noise = !no_noise;
      auto corpus = vmirror::generate_course(params);
      print_files(vmirror::write_course(corpus, output));
    }
  } catch (const vmirror::ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return 0;
}
