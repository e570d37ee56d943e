#pragma once
// JSON experiment configuration shared by every subcommand. Fields are
// optional at the document level; each command applies its own defaults
// when it runs, so serialising a parsed config gives back the same document.

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace impwave::cli {

struct IntervalSpec {
  double lo = 0.0;
  double hi = 1.0;
};

struct StateSpec {
  std::vector<double> pos;
  std::vector<double> vel;
};

struct EventSpec {
  double time = 0.0;
  std::vector<double> profile;
  std::optional<IntervalSpec> mask;
};

struct ExperimentConfig {
  std::optional<int> n_modes;
  std::optional<double> horizon;
  std::optional<double> tau;
  std::optional<IntervalSpec> omega;
  std::optional<StateSpec> initial;
  std::optional<std::vector<EventSpec>> events;
  std::optional<std::vector<double>> sample_times;

  // sweep
  std::optional<std::vector<std::string>> families;
  std::optional<double> k;
  std::optional<int> n_max;

  // control
  std::optional<StateSpec> target;
  std::optional<double> epsilon;
  std::optional<std::vector<double>> alphas;
  std::optional<std::string> norm;

  // verify
  std::optional<std::vector<std::string>> checks;
  std::optional<int> fd_grid_points;
  std::optional<double> cfl;
  std::optional<int> trials;

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Validates types, finiteness and interval ordering; throws InputError
/// naming the offending key (e.g. "omega", "events[1].mask").
ExperimentConfig parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);

}  // namespace impwave::cli
