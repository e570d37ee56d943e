#pragma once

#include "config.hpp"

#include <optional>
#include <string>

namespace impwave::cli {

enum class Format { Csv, Json };

Format parse_format(const std::string& tag);

/// Rendered output of one subcommand. Commands never touch the filesystem;
/// main decides where `body` and `summary` go.
struct CommandOutput {
  std::string body;
  std::optional<std::string> summary;  // sweep only: per-family min/monotonicity table (CSV)
  int exit_code = 0;
};

CommandOutput run_simulate(const ExperimentConfig& config, Format format);
CommandOutput run_observe(const ExperimentConfig& config, Format format);
CommandOutput run_sweep(const ExperimentConfig& config, Format format);
CommandOutput run_control(const ExperimentConfig& config, Format format);
CommandOutput run_verify(const ExperimentConfig& config, Format format);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// {"code", "field", "message"} as written to stderr on failure.
nlohmann::json error_record(const std::string& code, const std::string& field,
                            const std::string& message);

}  // namespace impwave::cli
