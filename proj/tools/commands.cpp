#include "commands.hpp"

#include "checks.hpp"

#include "impwave/controllability.hpp"
#include "impwave/error.hpp"
#include "impwave/impulsive.hpp"
#include "impwave/observability.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace impwave::cli {
namespace {

using nlohmann::json;

SubInterval to_interval(const std::optional<IntervalSpec>& spec, SubInterval fallback) {
  return spec ? SubInterval(spec->lo, spec->hi) : fallback;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

ModalState to_state(const StateSpec& spec) { return {to_vector(spec.pos), to_vector(spec.vel)}; }

json interval_json(const SubInterval& omega) { return json::array({omega.lo(), omega.hi()}); }

json state_json(const ModalState& s) { return {{"pos", to_std(s.pos())}, {"vel", to_std(s.vel())}}; }

template <typename T>
const T& require(const std::optional<T>& value, const char* field) {
  if (!value) throw InputError(field, std::string(field) + " is required for this command");
  return *value;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// Initial state: explicit coefficients, or the zero state when only n_modes is given.
ModalState initial_state(const ExperimentConfig& c, int fallback_modes) {
  if (c.initial) {
    ModalState s = to_state(*c.initial);
    if (c.n_modes && *c.n_modes != s.n_modes())
      throw InputError("n_modes", "n_modes disagrees with the initial coefficient count");
    return s;
  }
  return ModalState::zero(c.n_modes.value_or(fallback_modes));
}

ObservationSetup observation_setup(const ExperimentConfig& c, SubInterval default_omega) {
  const double tau = c.tau.value_or(2.0);
  return {tau, c.horizon.value_or(tau + 1.0), to_interval(c.omega, default_omega)};
}

}  // namespace

Format parse_format(const std::string& tag) {
  if (tag == "csv") return Format::Csv;
  if (tag == "json") return Format::Json;
  throw InputError("format", "format must be csv or json");
}

std::string format_double(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, result.ptr};
}

json error_record(const std::string& code, const std::string& field, const std::string& message) {
  return {{"code", code}, {"field", field}, {"message", message}};
}

CommandOutput run_simulate(const ExperimentConfig& c, Format format) {
  const double horizon = c.horizon.value_or(2.0);
  if (horizon <= 0.0) throw InputError("horizon", "horizon must be positive");
  const ModalState initial = initial_state(c, 1);

  std::vector<ImpulseEvent> events;
  if (c.events) {
    for (const EventSpec& e : *c.events)
      events.push_back({e.time, to_vector(e.profile), to_interval(e.mask, SubInterval::full())});
  }
  const ImpulseSchedule schedule(horizon, std::move(events));
  const Trajectory traj = solve(initial, schedule);

  const std::vector<double> times = c.sample_times.value_or(std::vector<double>{0.0, horizon});
  struct Sample {
    double t;
    Side side;
  };
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!(t >= 0.0 && t <= horizon))
      throw InputError("sample_times[" + std::to_string(i) + "]", "sample time outside [0, T]");
    samples.push_back({t, Side::Left});
    const auto& ev = schedule.events();
    if (std::any_of(ev.begin(), ev.end(), [&](const ImpulseEvent& e) { return e.time == t; }))
      samples.push_back({t, Side::Right});
  }

  CommandOutput out;
  if (format == Format::Csv) {
    std::string body = "t,side,mode,a,b\n";
    for (const Sample& s : samples) {
      const ModalState y = value_at(traj, s.t, s.side);
      const char* side = s.side == Side::Left ? "left" : "right";
      for (int n = 0; n < y.n_modes(); ++n) {
        body += format_double(s.t) + "," + side + "," + std::to_string(n + 1) + "," +
                format_double(y.pos()[n]) + "," + format_double(y.vel()[n]) + "\n";
      }
    }
    out.body = std::move(body);
    return out;
  }

  json doc;
  doc["horizon"] = horizon;
  doc["n_modes"] = initial.n_modes();
  doc["events"] = json::array();
  for (const ImpulseEvent& e : schedule.events())
    doc["events"].push_back({{"time", e.time}, {"profile", to_std(e.profile)}, {"mask", interval_json(e.mask)}});
  doc["segments"] = json::array();
  for (const Trajectory::Segment& seg : traj.segments()) {
    json item = state_json(seg.state);
    item["start"] = seg.start;
    item["end"] = seg.end;
    doc["segments"].push_back(std::move(item));
  }
  doc["samples"] = json::array();
  for (const Sample& s : samples) {
    json item = state_json(value_at(traj, s.t, s.side));
    item["t"] = s.t;
    item["side"] = s.side == Side::Left ? "left" : "right";
    doc["samples"].push_back(std::move(item));
  }
  out.body = dump(doc);
  return out;
}

CommandOutput run_observe(const ExperimentConfig& c, Format format) {
  const ModalState x = to_state(require(c.initial, "initial"));
  const ObservationSetup setup = observation_setup(c, SubInterval::full());

  json report;
  report["tau"] = setup.tau();
  report["horizon"] = setup.horizon();
  report["omega"] = interval_json(setup.omega());
  report["n_modes"] = x.n_modes();
  report["observed_energy"] = observed_energy(x, setup);
  report["weak_norm_sq_coefficient"] = norm_sq_weak(x, WeakNorm::Coefficient);
  report["weak_norm_sq_integral"] = norm_sq_weak(x, WeakNorm::Integral);
  report["energy"] = energy_state_space(x);
  report["f_seminorm_sq"] = f_seminorm_sq(x, setup);
  report["duality_pairing"] = duality_pairing(x, setup);
  report["energy_duality_pairing"] = energy_duality_pairing(x, setup);
  report["observed_cross_term"] = observed_cross_term(x, setup);
  if (norm_sq_weak(x, WeakNorm::Coefficient) > 0.0) report["ratio"] = obs_ratio(x, setup);
  if (x.pos() == x.vel()) {
    const BoundCheck b = coefficient_level_bound_check(x, setup.tau());
    report["bound_check"] = {{"lhs", b.lhs}, {"rhs", b.rhs}, {"holds", b.holds},
                             {"per_mode_floor", b.per_mode_floor}};
  }

  CommandOutput out;
  if (format == Format::Csv) {
    std::string body = "quantity,value\n";
    for (const char* key : {"observed_energy", "weak_norm_sq_coefficient", "weak_norm_sq_integral",
                            "energy", "f_seminorm_sq", "duality_pairing", "energy_duality_pairing",
                            "observed_cross_term", "ratio"}) {
      if (report.contains(key)) body += std::string(key) + "," + format_double(report[key].get<double>()) + "\n";
    }
    out.body = std::move(body);
    return out;
  }

  const LambdaImage image = lambda_operator(x, setup);
  report["lambda"] = {{"first", to_std(image.first)}, {"second", to_std(image.second)}};
  json phases = json::array();
  const PhaseDecomposition pd = phase_decomposition(x);
  for (std::size_t i = 0; i < pd.modes.size(); ++i) {
    const ModePhase& m = pd.modes[i];
    phases.push_back({{"mode", i + 1},
                      {"amplitude", m.amplitude},
                      {"phase", m.phase ? json(*m.phase) : json(nullptr)},
                      {"sin_phase", m.sin_phase},
                      {"cos_phase", m.cos_phase}});
  }
  report["phases"] = std::move(phases);
  out.body = dump(report);
  return out;
}

CommandOutput run_sweep(const ExperimentConfig& c, Format format) {
  const ObservationSetup setup = observation_setup(c, SubInterval(0.0, 0.5));
  const int n_max = c.n_max.value_or(50);
  const std::vector<std::string> tags =
      c.families.value_or(std::vector<std::string>{"constant", "linear", "pi_linear"});
  if (tags.empty()) throw InputError("families", "need at least one family");

  std::vector<ObservabilityReport> reports;
  for (const std::string& tag : tags) reports.push_back(sweep_ratio(parse_family(tag, c.k.value_or(1.0)), n_max, setup));

  CommandOutput out;
  if (format == Format::Csv) {
    std::string body = "family,N,ratio\n";
    std::string summary = "family,min_ratio,strictly_increasing\n";
    for (const ObservabilityReport& r : reports) {
      for (std::size_t i = 0; i < r.ratios.size(); ++i)
        body += r.family + "," + std::to_string(i + 1) + "," + format_double(r.ratios[i]) + "\n";
      summary += r.family + "," + format_double(r.min_ratio) + "," +
                 (r.strictly_increasing ? "true" : "false") + "\n";
    }
    out.body = std::move(body);
    out.summary = std::move(summary);
    return out;
  }

  json doc;
  doc["tau"] = setup.tau();
  doc["omega"] = interval_json(setup.omega());
  doc["n_max"] = n_max;
  doc["families"] = json::array();
  for (const ObservabilityReport& r : reports) {
    doc["families"].push_back({{"family", r.family},
                               {"ratios", r.ratios},
                               {"min_ratio", r.min_ratio},
                               {"strictly_increasing", r.strictly_increasing}});
  }
  out.body = dump(doc);
  return out;
}

CommandOutput run_control(const ExperimentConfig& c, Format format) {
  const ModalState target = to_state(require(c.target, "target"));
  const ModalState initial = c.initial ? to_state(*c.initial) : ModalState::zero(target.n_modes());
  const double horizon = c.horizon.value_or(2.0);
  const double tau = c.tau.value_or(horizon / 2.0);
  const double epsilon = c.epsilon.value_or(1e-6);
  const StateNorm norm = parse_state_norm(c.norm.value_or("energy"));
  const ControlProblem problem(tau, horizon, to_interval(c.omega, SubInterval::full()), initial, target);

  ControlOutcome outcome;
  if (c.alphas) {
    const GramianOperator g = build_gramian(problem);
    const Eigen::VectorXd z = problem.drift_gap();
    outcome.control = Eigen::VectorXd::Zero(problem.n_modes());
    outcome.residual = state_norm(ModalState::from_stacked(z), norm);
    for (double alpha : *c.alphas) {
      RegularizedControl step;
      try {
        step = regularized_solve(g, z, alpha, norm);
      } catch (const IllConditionedError&) {
        break;
      }
      outcome.trace.push_back({alpha, step.residual});
      outcome.control = step.control;
      outcome.residual = step.residual;
      outcome.alpha = alpha;
      if (step.residual < epsilon) {
        outcome.reached = true;
        break;
      }
    }
  } else {
    outcome = approx_control(problem, epsilon, norm);
  }

  CommandOutput out;
  if (format == Format::Csv) {
    std::string body = "alpha,residual\n";
    for (const AlphaStep& s : outcome.trace)
      body += format_double(s.alpha) + "," + format_double(s.residual) + "\n";
    out.body = std::move(body);
    return out;
  }

  json doc;
  doc["verdict"] = outcome.reached ? "reached" : "unreachable_at_truncation";
  doc["control"] = to_std(outcome.control);
  doc["residual"] = outcome.residual;
  doc["alpha"] = outcome.alpha;
  doc["epsilon"] = epsilon;
  doc["norm"] = std::string(to_string(norm));
  doc["trace"] = json::array();
  for (const AlphaStep& s : outcome.trace) doc["trace"].push_back({{"alpha", s.alpha}, {"residual", s.residual}});
  out.body = dump(doc);
  return out;
}

CommandOutput run_verify(const ExperimentConfig& c, Format format) {
  VerifySettings settings;
  settings.fd_grid_points = c.fd_grid_points.value_or(settings.fd_grid_points);
  settings.cfl = c.cfl.value_or(settings.cfl);
  settings.trials = c.trials.value_or(settings.trials);
  settings.seed = c.seed.value_or(kDefaultSeed);
  const std::vector<std::string> names = c.checks.value_or(default_checks());

  // validate every name before running anything
  const std::vector<std::string> known = known_checks();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (std::find(known.begin(), known.end(), names[i]) == known.end())
      throw InputError("checks[" + std::to_string(i) + "]", "unknown check '" + names[i] + "'");
  }

  std::vector<CheckResult> results;
  for (const std::string& name : names) results.push_back(run_check(name, settings));

  CommandOutput out;
  out.exit_code = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; }) ? 0 : 1;
  if (format == Format::Csv) {
    std::string body = "name,pass,measured,tolerance\n";
    for (const CheckResult& r : results) {
      body += r.name + "," + (r.pass ? "true" : "false") + "," + format_double(r.measured) + "," +
              format_double(r.tolerance) + "\n";
    }
    out.body = std::move(body);
    return out;
  }
  json doc = json::array();
  for (const CheckResult& r : results) {
    doc.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"measured", r.measured},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail}});
  }
  out.body = dump(doc);
  return out;
}

}  // namespace impwave::cli
