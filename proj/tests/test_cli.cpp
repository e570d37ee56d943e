#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "checks.hpp"
#include "commands.hpp"
#include "config.hpp"

#include "impwave/error.hpp"
#include "impwave/impulsive.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace impwave;
using namespace impwave::cli;
using nlohmann::json;

namespace {

ExperimentConfig cfg(const char* text) { return parse_config(json::parse(text)); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

struct Run {
  int exit_code;
  std::string out;
  std::string err;
};

// runs the installed binary with a config written to a scratch file
Run run_binary(const std::string& args, const std::string& config_text) {
  const auto dir = std::filesystem::temp_directory_path() / "impwave_cli_test";
  std::filesystem::create_directories(dir);
  const auto config = dir / "config.json";
  const auto err = dir / "stderr.txt";
  std::ofstream(config) << config_text;
  const std::string command = std::string(IMPWAVE_BINARY) + " " + args + " --config " + config.string() +
                              " 2>" + err.string();
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) out.append(buffer, n);
  const int status = pclose(pipe);
  std::ifstream e(err);
  std::stringstream es;
  es << e.rdbuf();
  return {WEXITSTATUS(status), out, es.str()};
}

}  // namespace

TEST_CASE("config validation names the field") {
  auto field_of = [](const char* text) {
    try {
      cfg(text);
    } catch (const InputError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  CHECK(field_of(R"({"omega": [0.5, 0.2]})") == "omega");
  CHECK(field_of(R"({"omega": [0.0, 1.5]})") == "omega");
  CHECK(field_of(R"({"bogus": 1})") == "bogus");
  CHECK(field_of(R"({"n_modes": "four"})") == "n_modes");
  CHECK(field_of(R"({"events": [{"time": 0.5, "profile": [1]}, {"time": 0.7, "profile": [1], "mask": [0.9, 0.1]}]})") ==
        "events[1].mask");
  CHECK(field_of(R"({"initial": {"pos": [1, 2], "vel": [1]}})") == "initial.vel");
  CHECK(field_of(R"({"format": "xml"})") == "format");
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InputError);
}

TEST_CASE("config round-trip") {
  const char* text = R"({
    "n_modes": 3, "horizon": 2.5, "tau": 0.7, "omega": [0.1, 0.6],
    "initial": {"pos": [1, 0, 0.5], "vel": [0, 0.25, 0]},
    "events": [{"time": 0.5, "profile": [1, 0, 0], "mask": [0, 0.5]}, {"time": 1.25, "profile": [0, 1, 0]}],
    "sample_times": [0, 1, 2.5], "families": ["linear"], "k": 2, "n_max": 7,
    "target": {"pos": [0, 0, 0], "vel": [1, 0, 0]}, "epsilon": 1e-4, "alphas": [0.1, 0.01],
    "norm": "weak", "checks": ["chebyshev_identity"], "fd_grid_points": 512, "cfl": 0.4,
    "trials": 5, "seed": 99, "out": "x.csv", "format": "json"})";
  const ExperimentConfig parsed = cfg(text);
  const json again = to_json(parsed);
  CHECK(again == json::parse(text));
  CHECK(to_json(parse_config(again)) == again);
  CHECK(to_json(cfg("{}")) == json::object());
}

TEST_CASE("format_double round-trips") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
  for (double x : {1.0 / 3.0, std::numbers::pi, -2.5e-300, 1e22}) CHECK(std::stod(format_double(x)) == x);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK_THROWS_AS(parse_format("tsv"), InputError);
}

TEST_CASE("simulate") {
  const CommandOutput none = run_simulate(cfg(R"({"initial": {"pos": [0.25, -1], "vel": [3, 0.5]}, "sample_times": [0]})"),
                                          Format::Csv);
  CHECK(lines(none.body) == std::vector<std::string>{"t,side,mode,a,b", "0,left,1,0.25,3", "0,left,2,-1,0.5"});

  const char* bench = R"({"n_modes": 1, "events": [{"time": 0.5, "profile": [1]}], "sample_times": [0.5, 1]})";
  const CommandOutput csv = run_simulate(cfg(bench), Format::Csv);
  const std::vector<std::string> rows = lines(csv.body);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1] == "0.5,left,1,0,0");
  CHECK(rows[2] == "0.5,right,1,0,1");
  const ModalState lib = value_at(solve(ModalState::zero(1), ImpulseSchedule(2.0, {{0.5, Eigen::VectorXd::Ones(1)}})), 1.0);
  CHECK(rows[3] == "1,left,1," + format_double(lib.pos()[0]) + "," + format_double(lib.vel()[0]));
  CHECK(std::abs(lib.pos()[0] - 1 / std::numbers::pi) <= 1e-12);

  const json doc = json::parse(run_simulate(cfg(bench), Format::Json).body);
  CHECK(doc["samples"].size() == 3);
  CHECK(doc["horizon"] == 2.0);
}

TEST_CASE("sweep") {
  const CommandOutput one = run_sweep(cfg(R"({"families": ["constant"], "n_max": 1})"), Format::Csv);
  const std::vector<std::string> rows = lines(one.body);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "family,N,ratio");
  CHECK(std::abs(std::stod(rows[1].substr(rows[1].rfind(',') + 1)) - 0.2270) <= 1e-3);
  REQUIRE(one.summary.has_value());
  CHECK(lines(*one.summary)[0] == "family,min_ratio,strictly_increasing");

  // the ratio column does not depend on k
  auto ratios = [](const std::string& body) {
    std::vector<std::string> out;
    for (const std::string& r : lines(body)) out.push_back(r.substr(r.rfind(',') + 1));
    return out;
  };
  const CommandOutput k1 = run_sweep(cfg(R"({"families": ["constant"], "n_max": 20})"), Format::Csv);
  const CommandOutput k7 = run_sweep(cfg(R"({"families": ["constant"], "n_max": 20, "k": 7})"), Format::Csv);
  const auto r1 = ratios(k1.body), r7 = ratios(k7.body);
  REQUIRE(r1.size() == r7.size());
  for (std::size_t i = 1; i < r1.size(); ++i) CHECK(std::stod(r1[i]) == doctest::Approx(std::stod(r7[i])).epsilon(1e-13));

  const CommandOutput linear = run_sweep(cfg(R"({"families": ["linear", "pi_linear"], "n_max": 50})"), Format::Csv);
  CHECK(lines(linear.body).size() == 101);
  const std::vector<std::string> summary = lines(*linear.summary);
  CHECK(summary[1].ends_with(",true"));
  CHECK(summary[2].ends_with(",true"));
}

TEST_CASE("observe") {
  const json doc = json::parse(
      run_observe(cfg(R"({"initial": {"pos": [1], "vel": [1]}, "omega": [0, 0.5], "tau": 2})"), Format::Json).body);
  CHECK(doc["observed_energy"].get<double>() == doctest::Approx(0.25));
  CHECK(doc["ratio"].get<double>() == doctest::Approx(0.2270000829).epsilon(1e-9));
  CHECK(doc.contains("bound_check"));
  CHECK_THROWS_AS(run_observe(cfg("{}"), Format::Json), InputError);
  CHECK(lines(run_observe(cfg(R"({"initial": {"pos": [1], "vel": [1]}})"), Format::Csv).body)[0] == "quantity,value");
}

TEST_CASE("control verdicts") {
  // free evolution of (1, 0) over T = 2 returns to itself
  const json idle = json::parse(run_control(
      cfg(R"({"initial": {"pos": [1, 0], "vel": [0, 0]}, "target": {"pos": [1, 0], "vel": [0, 0]}})"), Format::Json).body);
  CHECK(idle["verdict"] == "reached");
  CHECK(idle["residual"] == 0.0);
  for (double c : idle["control"]) CHECK(c == 0.0);

  // tau = 1, T = 2, full domain: a unit kick on mode 1 lands at (0, -1)
  const json hit = json::parse(
      run_control(cfg(R"({"omega": [0, 1], "target": {"pos": [0, 0], "vel": [-1, 0]}})"), Format::Json).body);
  CHECK(hit["verdict"] == "reached");
  CHECK(hit["residual"].get<double>() <= 1e-6);

  // position components are out of reach for a single velocity kick after a half-period flight
  const CommandOutput miss = run_control(cfg(R"({"target": {"pos": [0.1, 0], "vel": [0, 0]}})"), Format::Json);
  const json m = json::parse(miss.body);
  CHECK(m["verdict"] == "unreachable_at_truncation");
  CHECK(m["residual"].get<double>() == doctest::Approx(0.1 * std::numbers::pi / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(miss.exit_code == 0);

  const std::vector<std::string> trace =
      lines(run_control(cfg(R"({"target": {"pos": [0], "vel": [1]}, "alphas": [0.1, 0.01]})"), Format::Csv).body);
  CHECK(trace.size() == 3);
  CHECK(trace[0] == "alpha,residual");
  CHECK_THROWS_AS(run_control(cfg("{}"), Format::Json), InputError);
}

TEST_CASE("verify") {
  const CommandOutput all = run_verify(cfg("{}"), Format::Json);
  CHECK(all.exit_code == 0);
  const json report = json::parse(all.body);
  CHECK(report.size() == default_checks().size());
  for (const json& c : report) {
    INFO(c.dump());
    CHECK(c["pass"] == true);
  }

  const CommandOutput coarse = run_verify(cfg(R"({"checks": ["fd_oracle_comparison"], "fd_grid_points": 64})"), Format::Json);
  CHECK(coarse.exit_code == 1);
  const json c = json::parse(coarse.body)[0];
  CHECK(c["pass"] == false);
  CHECK(c["measured"].get<double>() > 5e-3);

  const json dual = json::parse(run_verify(cfg(R"({"checks": ["duality_energy", "duality_l2"]})"), Format::Json).body);
  for (const json& d : dual) CHECK(d["measured"].get<double>() <= 1e-10);

  CHECK_THROWS_AS(run_verify(cfg(R"({"checks": ["no_such_check"]})"), Format::Json), InputError);
  CHECK(lines(run_verify(cfg(R"({"checks": ["chebyshev_identity"]})"), Format::Csv).body)[0] ==
        "name,pass,measured,tolerance");
}

TEST_CASE("checks are independent of each other and deterministic") {
  VerifySettings s;
  s.seed = kDefaultSeed;
  const CheckResult a = run_check("jump_residuals", s);
  run_check("equal_coefficient_bound", s);
  const CheckResult b = run_check("jump_residuals", s);
  CHECK(a.measured == b.measured);
  s.seed = 7;
  CHECK(run_check("jump_residuals", s).pass);
}

TEST_CASE("binary: output is byte-identical across runs") {
  const std::string config = R"({"n_modes": 4, "omega": [0.2, 0.7],
    "initial": {"pos": [0.3, 0.1, 0, 0.05], "vel": [1, 0, -0.5, 0]},
    "events": [{"time": 0.4, "profile": [1, 1, 0, 0], "mask": [0.2, 0.7]}, {"time": 1.3, "profile": [0, 0, 1, 0]}],
    "sample_times": [0, 0.4, 1, 1.3, 2]})";
  const Run first = run_binary("simulate", config);
  const Run second = run_binary("simulate", config);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(first.out.starts_with("t,side,mode,a,b\n"));
}

TEST_CASE("binary: exit codes and error records") {
  CHECK(run_binary("verify", R"({"checks": ["chebyshev_identity"]})").exit_code == 0);
  CHECK(run_binary("verify", R"({"checks": ["fd_oracle_comparison"], "fd_grid_points": 64})").exit_code == 1);

  const Run bad = run_binary("simulate", R"({"omega": [0.5, 0.2]})");
  CHECK(bad.exit_code == 2);
  const json record = json::parse(bad.err);
  CHECK(record["code"] == "invalid_input");
  CHECK(record["field"] == "omega");
  CHECK(record.contains("message"));

  const Run broken = run_binary("sweep", "{not json");
  CHECK(broken.exit_code == 2);
  CHECK(json::parse(broken.err)["field"] == "config");

  CHECK(run_binary("sweep --format xml", "{}").exit_code == 2);
  const json swept = json::parse(run_binary("sweep --format json", R"({"n_max": 3})").out);
  CHECK_FALSE(swept.is_null());
}
