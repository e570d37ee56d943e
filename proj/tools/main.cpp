// impwave: run simulate / observe / sweep / control / verify from a JSON config.
// Exit codes: 0 success, 1 a verification check failed, 2 invalid input.

#include "commands.hpp"
#include "config.hpp"

#include "impwave/error.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace impwave::cli;

int fail(const std::string& code, const std::string& field, const std::string& message) {
  std::cerr << error_record(code, field, message).dump() << "\n";
  return 2;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw impwave::InputError("out", "cannot open output file '" + path + "'");
  out << text;
  if (!out) throw impwave::InputError("out", "failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and analysis tools for the 1-D impulsive wave equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_tag;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "write output here instead of stdout");
  app.add_option("--format", format_tag, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  CLI::Option* seed_opt = app.add_option("--seed", seed, "seed for randomised verification checks");

  const std::map<std::string, std::pair<CommandOutput (*)(const ExperimentConfig&, Format), Format>>
      commands = {
          {"simulate", {run_simulate, Format::Csv}},
          {"observe", {run_observe, Format::Json}},
          {"sweep", {run_sweep, Format::Csv}},
          {"control", {run_control, Format::Csv}},
          {"verify", {run_verify, Format::Json}},
      };
  const std::map<std::string, std::string> blurbs = {
      {"simulate", "modal trajectory under an impulse schedule"},
      {"observe", "observed energy, ratio and duality quantities for one state"},
      {"sweep", "observability ratio against truncation size for coefficient families"},
      {"control", "regularised single-impulse control towards a target"},
      {"verify", "named self-checks; exit 1 if any fails"},
  };
  for (const auto& [name, _] : commands) app.add_subcommand(name, blurbs.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", "", e.what());
  }

  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (*seed_opt) config.seed = seed;
    const std::string command = app.get_subcommands().front()->get_name();
    const auto& [run, default_format] = commands.at(command);

    Format format = default_format;
    if (!format_tag.empty()) {
      format = parse_format(format_tag);
    } else if (config.format) {
      format = parse_format(*config.format);
    }
    if (out_path.empty() && config.out) out_path = *config.out;

    const CommandOutput output = run(config, format);
    if (out_path.empty()) {
      std::cout << output.body;
      if (output.summary) std::cout << "\n" << *output.summary;
    } else {
      write_file(out_path, output.body);
      if (output.summary) write_file(out_path + ".summary.csv", *output.summary);
    }
    return output.exit_code;
  } catch (const impwave::InputError& e) {
    return fail("invalid_input", e.field(), e.what());
  } catch (const impwave::IllConditionedError& e) {
    return fail("ill_conditioned", "", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", "", e.what());
  }
}
