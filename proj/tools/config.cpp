#include "config.hpp"

#include "impwave/error.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace impwave::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "n_modes", "horizon", "tau",     "omega",          "initial", "events", "sample_times",
    "families", "k",      "n_max",   "target",         "epsilon", "alphas", "norm",
    "checks",  "fd_grid_points", "cfl", "trials",      "seed",    "out",    "format"};

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw InputError(field, field + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(field, field + " must be finite");
  return x;
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw InputError(field, field + " must be an integer");
  const auto x = v.get<long long>();
  if (x < -2147483647LL || x > 2147483647LL) throw InputError(field, field + " is out of range");
  return static_cast<int>(x);
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) throw InputError(field, field + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) throw InputError(field, field + " must be a string");
  return v.get<std::string>();
}

std::vector<std::string> texts(const json& v, const std::string& field) {
  if (!v.is_array()) throw InputError(field, field + " must be an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(text(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

IntervalSpec interval(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw InputError(field, field + " must be [lo, hi]");
  IntervalSpec out{number(v[0], field), number(v[1], field)};
  if (!(0.0 <= out.lo && out.lo < out.hi && out.hi <= 1.0))
    throw InputError(field, field + " must satisfy 0 <= lo < hi <= 1");
  return out;
}

StateSpec state(const json& v, const std::string& field) {
  if (!v.is_object()) throw InputError(field, field + " must be an object with pos and vel");
  for (const auto& [key, _] : v.items())
    if (key != "pos" && key != "vel") throw InputError(field + "." + key, "unknown key");
  if (!v.contains("pos") || !v.contains("vel"))
    throw InputError(field, field + " needs both pos and vel");
  StateSpec out{numbers(v["pos"], field + ".pos"), numbers(v["vel"], field + ".vel")};
  if (out.pos.empty()) throw InputError(field + ".pos", "need at least one mode");
  if (out.pos.size() != out.vel.size())
    throw InputError(field + ".vel", "pos and vel lengths differ");
  return out;
}

std::vector<EventSpec> events(const json& v) {
  if (!v.is_array()) throw InputError("events", "events must be an array");
  std::vector<EventSpec> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string base = "events[" + std::to_string(i) + "]";
    const json& e = v[i];
    if (!e.is_object()) throw InputError(base, base + " must be an object");
    for (const auto& [key, _] : e.items())
      if (key != "time" && key != "profile" && key != "mask")
        throw InputError(base + "." + key, "unknown key");
    if (!e.contains("time") || !e.contains("profile"))
      throw InputError(base, base + " needs time and profile");
    EventSpec ev;
    ev.time = number(e["time"], base + ".time");
    ev.profile = numbers(e["profile"], base + ".profile");
    if (e.contains("mask")) ev.mask = interval(e["mask"], base + ".mask");
    out.push_back(std::move(ev));
  }
  return out;
}

json interval_json(const IntervalSpec& i) { return json::array({i.lo, i.hi}); }
json state_json(const StateSpec& s) { return {{"pos", s.pos}, {"vel", s.vel}}; }

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw InputError("config", "config must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!kKnownKeys.contains(key)) throw InputError(key, "unknown config key '" + key + "'");

  ExperimentConfig c;
  if (doc.contains("n_modes")) {
    c.n_modes = integer(doc["n_modes"], "n_modes");
    if (*c.n_modes < 1) throw InputError("n_modes", "n_modes must be >= 1");
  }
  if (doc.contains("horizon")) {
    c.horizon = number(doc["horizon"], "horizon");
    if (*c.horizon <= 0.0) throw InputError("horizon", "horizon must be positive");
  }
  if (doc.contains("tau")) c.tau = number(doc["tau"], "tau");
  if (doc.contains("omega")) c.omega = interval(doc["omega"], "omega");
  if (doc.contains("initial")) c.initial = state(doc["initial"], "initial");
  if (doc.contains("events")) c.events = events(doc["events"]);
  if (doc.contains("sample_times")) c.sample_times = numbers(doc["sample_times"], "sample_times");
  if (doc.contains("families")) c.families = texts(doc["families"], "families");
  if (doc.contains("k")) c.k = number(doc["k"], "k");
  if (doc.contains("n_max")) {
    c.n_max = integer(doc["n_max"], "n_max");
    if (*c.n_max < 1) throw InputError("n_max", "n_max must be >= 1");
  }
  if (doc.contains("target")) c.target = state(doc["target"], "target");
  if (doc.contains("epsilon")) {
    c.epsilon = number(doc["epsilon"], "epsilon");
    if (*c.epsilon <= 0.0) throw InputError("epsilon", "epsilon must be positive");
  }
  if (doc.contains("alphas")) {
    c.alphas = numbers(doc["alphas"], "alphas");
    for (double a : *c.alphas)
      if (a <= 0.0) throw InputError("alphas", "every alpha must be positive");
  }
  if (doc.contains("norm")) c.norm = text(doc["norm"], "norm");
  if (doc.contains("checks")) c.checks = texts(doc["checks"], "checks");
  if (doc.contains("fd_grid_points")) {
    c.fd_grid_points = integer(doc["fd_grid_points"], "fd_grid_points");
    if (*c.fd_grid_points < 1) throw InputError("fd_grid_points", "need at least one interior point");
  }
  if (doc.contains("cfl")) {
    c.cfl = number(doc["cfl"], "cfl");
    if (!(*c.cfl > 0.0 && *c.cfl <= 1.0)) throw InputError("cfl", "cfl must lie in (0, 1]");
  }
  if (doc.contains("trials")) {
    c.trials = integer(doc["trials"], "trials");
    if (*c.trials < 1) throw InputError("trials", "trials must be >= 1");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw InputError("seed", "seed must be a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("out")) c.out = text(doc["out"], "out");
  if (doc.contains("format")) {
    c.format = text(doc["format"], "format");
    if (*c.format != "csv" && *c.format != "json") throw InputError("format", "format must be csv or json");
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json doc = json::object();
  if (c.n_modes) doc["n_modes"] = *c.n_modes;
  if (c.horizon) doc["horizon"] = *c.horizon;
  if (c.tau) doc["tau"] = *c.tau;
  if (c.omega) doc["omega"] = interval_json(*c.omega);
  if (c.initial) doc["initial"] = state_json(*c.initial);
  if (c.events) {
    json list = json::array();
    for (const EventSpec& e : *c.events) {
      json item = {{"time", e.time}, {"profile", e.profile}};
      if (e.mask) item["mask"] = interval_json(*e.mask);
      list.push_back(std::move(item));
    }
    doc["events"] = std::move(list);
  }
  if (c.sample_times) doc["sample_times"] = *c.sample_times;
  if (c.families) doc["families"] = *c.families;
  if (c.k) doc["k"] = *c.k;
  if (c.n_max) doc["n_max"] = *c.n_max;
  if (c.target) doc["target"] = state_json(*c.target);
  if (c.epsilon) doc["epsilon"] = *c.epsilon;
  if (c.alphas) doc["alphas"] = *c.alphas;
  if (c.norm) doc["norm"] = *c.norm;
  if (c.checks) doc["checks"] = *c.checks;
  if (c.fd_grid_points) doc["fd_grid_points"] = *c.fd_grid_points;
  if (c.cfl) doc["cfl"] = *c.cfl;
  if (c.trials) doc["trials"] = *c.trials;
  if (c.seed) doc["seed"] = *c.seed;
  if (c.out) doc["out"] = *c.out;
  if (c.format) doc["format"] = *c.format;
  return doc;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace impwave::cli
