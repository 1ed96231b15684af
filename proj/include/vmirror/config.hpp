#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vmirror/metrics.hpp"

namespace vmirror {

/// One analysis run, loaded from a `key = value` file.
struct RunConfig {
  std::vector<std::filesystem::path> inputs;  // .csv = message CSV, anything else = mbox
  std::filesystem::path rosters;
  std::optional<std::filesystem::path> aliases;
  std::optional<std::filesystem::path> lexicon_positive;
  std::optional<std::filesystem::path> lexicon_negative;
  std::vector<std::string> dummy_addresses;
  MetricsConfig metrics;
  std::vector<std::string> columns;  // correlation columns
  std::filesystem::path output_dir = "vmirror-out";
  bool figures = true;

  /// Raw key/value pairs after overrides, echoed into the manifest.
  std::map<std::string, std::string> echo;
};

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;  // empty when required or unset
  std::string_view help;
};

/// Every accepted key, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Parses `key = value` lines (`#` comments, blank lines allowed) and
/// applies `key=value` overrides. Relative paths resolve against
/// `base_dir`. All problems (unknown or duplicate keys, bad values, missing
/// files) are gathered and thrown as one ConfigError.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                       const std::vector<std::string>& overrides = {});

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

/// Columns correlated by default: all numeric team metric columns.
std::vector<std::string> default_correlation_columns();

}  // namespace vmirror
