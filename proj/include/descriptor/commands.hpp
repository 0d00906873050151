#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "descriptor/spec_file.hpp"

namespace descriptor {

inline constexpr const char* kToolName = "descriptor-cli";
inline constexpr const char* kToolVersion = "0.1.0";

/// Command-line overrides; unset values fall back to the spec file, then to defaults.
struct CommandOptions {
  std::optional<double> T;
  std::optional<double> order_n;
  std::optional<long> steps;
  std::optional<double> rank_tol;
  bool project = false;
  bool crosscheck = false;
  bool exact = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct CommandOutcome {
  int exit_code = 0;  ///< 0 success, 2 domain error
  nlohmann::json bundle;
  CsvTable csv;
  std::vector<std::string> warnings;
};

/// Runs analyze, solve, discretize, fracsim or compare. Domain errors are
/// reported inside the bundle with exit code 2; other errors propagate.
CommandOutcome run_command(const std::string& command, const SystemSpecFile& spec, const CommandOptions& opts);

/// Pretty-printed bundle with a trailing newline.
std::string render_bundle(const nlohmann::json& bundle);

/// Comma-separated rows, numbers with 17 significant digits.
std::string render_csv(const CsvTable& table);

}  // namespace descriptor
