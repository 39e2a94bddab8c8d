#include "ionramp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ionramp {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BellTrace: return "bell_trace";
    case ExperimentKind::BellSweep: return "bell_sweep";
    case ExperimentKind::WTrace: return "w_trace";
    case ExperimentKind::CoolingTrace: return "cooling_trace";
    case ExperimentKind::CoolingSweep: return "cooling_sweep";
    case ExperimentKind::CorrelationSnapshot: return "correlation_snapshot";
    case ExperimentKind::FidelityTrace: return "fidelity_trace";
    case ExperimentKind::Custom: return "custom";
  }
  return "custom";
}

bool is_trace(ExperimentKind kind) {
  return kind == ExperimentKind::BellTrace || kind == ExperimentKind::WTrace ||
         kind == ExperimentKind::FidelityTrace || kind == ExperimentKind::Custom;
}

bool is_cooling(ExperimentKind kind) {
  return kind == ExperimentKind::CoolingTrace || kind == ExperimentKind::CoolingSweep;
}

namespace {

std::string to_string(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::U0: return "U0";
    case TimeUnit::U1: return "U1";
    case TimeUnit::Internal: return "internal";
  }
  return "U1";
}

std::string to_string(Propagator p) {
  switch (p) {
    case Propagator::Eigenbasis: return "eigenbasis";
    case Propagator::Direct: return "direct";
    case Propagator::Auto: return "auto";
  }
  return "auto";
}

[[noreturn]] void fail(const std::string& key, const std::string& what) { throw ConfigError(key + ": " + what); }

void reject_unknown(const json& section, const std::string& where, std::initializer_list<const char*> known) {
  if (!section.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : section.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<int>();
}

std::string string_value(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string (this field cannot be swept)");
  return v.get<std::string>();
}

std::vector<int> int_list(const json& v, const std::string& key) {
  if (!v.is_array()) fail(key, "expected a list of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

double tidy(double x) { return std::round(x * 1e12) / 1e12; }

// number | [numbers] | {"start", "stop", "step"} | {"values": [...]}
std::vector<double> numeric_values(const json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    if (v.empty()) fail(key, "sweep list must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], key + "[" + std::to_string(i) + "]"));
  } else if (v.is_object() && v.contains("values")) {
    reject_unknown(v, key, {"values"});
    return numeric_values(v["values"], key + ".values");
  } else if (v.is_object()) {
    reject_unknown(v, key, {"start", "stop", "step"});
    if (!v.contains("start") || !v.contains("stop") || !v.contains("step")) {
      fail(key, "range needs start, stop and step");
    }
    const double start = number(v["start"], key + ".start");
    const double stop = number(v["stop"], key + ".stop");
    const double step = number(v["step"], key + ".step");
    if (!(step > 0) || stop < start) fail(key, "range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) fail(key, "range has too many points");
    for (long k = 0; k < count; ++k) out.push_back(tidy(start + static_cast<double>(k) * step));
  } else {
    fail(key, "expected a number, a list or a range (this field cannot be swept otherwise)");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExperimentKind parse_kind(const std::string& name) {
  static const std::pair<const char*, ExperimentKind> kinds[] = {
      {"bell_trace", ExperimentKind::BellTrace},
      {"bell_sweep", ExperimentKind::BellSweep},
      {"w_trace", ExperimentKind::WTrace},
      {"cooling_trace", ExperimentKind::CoolingTrace},
      {"cooling_sweep", ExperimentKind::CoolingSweep},
      {"correlation_snapshot", ExperimentKind::CorrelationSnapshot},
      {"fidelity_trace", ExperimentKind::FidelityTrace},
      {"custom", ExperimentKind::Custom},
  };
  for (const auto& [n, k] : kinds) {
    if (name == n) return k;
  }
  fail("experiment", "unknown experiment kind '" + name + "'");
}

struct KindDefaults {
  int sites;
  int bosons;
  double j_over_u0;
  double j_over_u1;
  std::vector<int> ramped;
  double tau;
  std::size_t ramp_count;  // 0: any
};

std::optional<KindDefaults> defaults_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BellTrace:
    case ExperimentKind::BellSweep:
    case ExperimentKind::CorrelationSnapshot:
    case ExperimentKind::FidelityTrace:
      return KindDefaults{6, 2, 0.2, -0.2, {1, 4}, 500, 2};
    case ExperimentKind::WTrace:
      return KindDefaults{8, 2, 0.2, -0.2, {2, 4, 6}, 500, 3};
    case ExperimentKind::CoolingTrace:
    case ExperimentKind::CoolingSweep:
      return KindDefaults{8, 3, 0.5, -0.2, {2}, 500, 1};
    case ExperimentKind::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::size_t required_ramp_count(ExperimentKind kind) {
  auto d = defaults_for(kind);
  return d ? d->ramp_count : 0;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  reject_unknown(doc, "", {"experiment", "model", "protocol", "integrator", "observe", "output"});
  if (!doc.contains("experiment")) fail("experiment", "missing");
  ExperimentConfig cfg;
  cfg.kind = parse_kind(string_value(doc["experiment"], "experiment"));
  const auto defaults = defaults_for(cfg.kind);

  const json model = doc.value("model", json::object());
  const json protocol = doc.value("protocol", json::object());
  const json integrator = doc.value("integrator", json::object());
  const json observe = doc.value("observe", json::object());
  const json output = doc.value("output", json::object());
  reject_unknown(model, "model", {"L", "N", "J_over_U0", "J_over_U1", "J", "U0", "U1"});
  reject_unknown(protocol, "protocol", {"sites", "tau", "time_unit", "hold"});
  reject_unknown(integrator, "integrator",
                 {"method", "dt", "samples", "norm_drift_tol", "max_halvings", "auto_direct_above"});
  reject_unknown(observe, "observe", {"pair", "snapshot_times", "target_fraction", "u1_khz", "degeneracy_tol"});
  reject_unknown(output, "output", {"directory", "prefix", "emit_plots"});

  auto require = [&](const json& section, const char* key, const std::string& where) -> const json& {
    if (!section.contains(key)) fail(where, "missing (required for experiment '" + to_string(cfg.kind) + "')");
    return section[key];
  };

  // model
  if (model.contains("L")) {
    cfg.sites = integer(model["L"], "model.L");
  } else if (defaults) {
    cfg.sites = defaults->sites;
  } else {
    require(model, "L", "model.L");
  }
  if (cfg.sites < 1) fail("model.L", "must be >= 1");

  std::vector<double> n_values =
      model.contains("N") ? numeric_values(model["N"], "model.N")
                          : (defaults ? std::vector<double>{double(defaults->bosons)}
                                      : numeric_values(require(model, "N", "model.N"), "model.N"));
  for (double n : n_values) {
    if (n < 0 || n != std::floor(n)) fail("model.N", "boson numbers must be non-negative integers");
  }

  const bool absolute = model.contains("J") || model.contains("U0") || model.contains("U1");
  std::vector<double> j0_values;
  std::vector<double> j1_values;
  if (absolute) {
    if (!model.contains("J") || !model.contains("U0") || !model.contains("U1")) {
      fail("model", "absolute energies need all of J, U0 and U1");
    }
    if (model.contains("J_over_U0") || model.contains("J_over_U1")) {
      fail("model", "give either ratios (J_over_U0, J_over_U1) or absolute energies (J, U0, U1), not both");
    }
    AbsoluteEnergies e{number(model["J"], "model.J"), number(model["U0"], "model.U0"),
                       number(model["U1"], "model.U1")};
    cfg.absolute = e;
    j0_values = {e.u_initial != 0 ? e.hopping / e.u_initial : std::nan("")};
    j1_values = {e.u_final != 0 ? e.hopping / e.u_final : std::nan("")};
  } else {
    j0_values = model.contains("J_over_U0") ? numeric_values(model["J_over_U0"], "model.J_over_U0")
                : defaults ? std::vector<double>{defaults->j_over_u0}
                           : numeric_values(require(model, "J_over_U0", "model.J_over_U0"), "model.J_over_U0");
    j1_values = model.contains("J_over_U1") ? numeric_values(model["J_over_U1"], "model.J_over_U1")
                : defaults ? std::vector<double>{defaults->j_over_u1}
                           : numeric_values(require(model, "J_over_U1", "model.J_over_U1"), "model.J_over_U1");
    for (double r : j0_values) {
      if (r == 0) fail("model.J_over_U0", "must be non-zero in ratio mode (use J, U0, U1 for J = 0)");
    }
    for (double r : j1_values) {
      if (r == 0) fail("model.J_over_U1", "must be non-zero in ratio mode (use J, U0, U1 for J = 0)");
    }
  }

  // protocol
  std::vector<std::vector<int>> site_sets;
  if (protocol.contains("sites")) {
    const json& s = protocol["sites"];
    if (!s.is_array()) fail("protocol.sites", "expected a list of site indices or a list of such lists");
    if (!s.empty() && s[0].is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        site_sets.push_back(int_list(s[i], "protocol.sites[" + std::to_string(i) + "]"));
      }
    } else {
      site_sets.push_back(int_list(s, "protocol.sites"));
    }
  } else if (defaults) {
    site_sets.push_back(defaults->ramped);
  } else {
    require(protocol, "sites", "protocol.sites");
  }
  const std::size_t needed = required_ramp_count(cfg.kind);
  for (auto& set : site_sets) {
    std::sort(set.begin(), set.end());
    for (int s : set) {
      if (s < 0 || s >= cfg.sites) fail("protocol.sites", "site " + std::to_string(s) + " outside chain of L sites");
    }
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) fail("protocol.sites", "sites must be distinct");
    if (needed && set.size() != needed) {
      fail("protocol.sites", "experiment '" + to_string(cfg.kind) + "' ramps exactly " + std::to_string(needed) +
                                 " site(s)");
    }
  }
  std::sort(site_sets.begin(), site_sets.end());
  site_sets.erase(std::unique(site_sets.begin(), site_sets.end()), site_sets.end());

  std::vector<double> tau_values =
      protocol.contains("tau") ? numeric_values(protocol["tau"], "protocol.tau")
      : defaults               ? std::vector<double>{defaults->tau}
                               : numeric_values(require(protocol, "tau", "protocol.tau"), "protocol.tau");
  for (double t : tau_values) {
    if (!(t > 0)) fail("protocol.tau", "ramp durations must be positive");
  }

  if (protocol.contains("time_unit")) {
    const auto unit = string_value(protocol["time_unit"], "protocol.time_unit");
    if (unit == "U0") {
      cfg.time_unit = TimeUnit::U0;
    } else if (unit == "U1") {
      cfg.time_unit = TimeUnit::U1;
    } else if (unit == "internal") {
      cfg.time_unit = TimeUnit::Internal;
    } else {
      fail("protocol.time_unit", "expected U0, U1 or internal");
    }
  }
  if (protocol.contains("hold") && !protocol["hold"].is_null()) {
    cfg.hold = number(protocol["hold"], "protocol.hold");
    if (*cfg.hold < 0) fail("protocol.hold", "must be >= 0");
  }

  // axes
  auto add_axis = [&](const std::string& field, std::vector<double> values) {
    if (values.size() > 1) cfg.axes.push_back({field, std::move(values), {}});
  };
  add_axis("N", n_values);
  add_axis("J_over_U0", j0_values);
  add_axis("J_over_U1", j1_values);
  if (site_sets.size() > 1) cfg.axes.push_back({"sites", {}, site_sets});
  add_axis("tau", tau_values);
  if (cfg.axes.size() > 2) fail("model/protocol", "at most two fields may be swept at once");

  cfg.base = {static_cast<int>(n_values.front()), j0_values.front(), j1_values.front(), tau_values.front(),
              site_sets.front()};

  // integrator
  if (integrator.contains("method")) {
    const auto m = string_value(integrator["method"], "integrator.method");
    if (m == "eigenbasis") {
      cfg.propagator = Propagator::Eigenbasis;
    } else if (m == "direct") {
      cfg.propagator = Propagator::Direct;
    } else if (m == "auto") {
      cfg.propagator = Propagator::Auto;
    } else {
      fail("integrator.method", "expected eigenbasis, direct or auto");
    }
  }
  if (integrator.contains("dt")) {
    cfg.integrator.dt = number(integrator["dt"], "integrator.dt");
    if (cfg.integrator.dt < 0) fail("integrator.dt", "must be >= 0 (0 selects the default)");
  }
  if (integrator.contains("samples")) {
    const int s = integer(integrator["samples"], "integrator.samples");
    if (s < 2) fail("integrator.samples", "must be >= 2");
    cfg.integrator.samples = static_cast<std::size_t>(s);
  }
  if (integrator.contains("norm_drift_tol")) {
    cfg.integrator.norm_drift_tol = number(integrator["norm_drift_tol"], "integrator.norm_drift_tol");
    if (!(cfg.integrator.norm_drift_tol > 0)) fail("integrator.norm_drift_tol", "must be positive");
  }
  if (integrator.contains("max_halvings")) {
    cfg.integrator.max_halvings = integer(integrator["max_halvings"], "integrator.max_halvings");
    if (cfg.integrator.max_halvings < 0) fail("integrator.max_halvings", "must be >= 0");
  }
  if (integrator.contains("auto_direct_above")) {
    const int a = integer(integrator["auto_direct_above"], "integrator.auto_direct_above");
    if (a < 0) fail("integrator.auto_direct_above", "must be >= 0");
    cfg.auto_direct_above = static_cast<std::size_t>(a);
  }

  // observe
  if (observe.contains("pair")) {
    cfg.pair = int_list(observe["pair"], "observe.pair");
    if (cfg.pair.size() != 2) fail("observe.pair", "expected two site indices");
    for (int s : cfg.pair) {
      if (s < 0 || s >= cfg.sites) fail("observe.pair", "site outside chain");
    }
  }
  if (observe.contains("snapshot_times")) {
    cfg.snapshot_times = numeric_values(observe["snapshot_times"], "observe.snapshot_times");
    for (double t : cfg.snapshot_times) {
      if (t < 0) fail("observe.snapshot_times", "times must be >= 0");
    }
  } else if (cfg.kind == ExperimentKind::CorrelationSnapshot) {
    cfg.snapshot_times = {0.0, cfg.base.tau};
  }
  if (observe.contains("target_fraction")) {
    cfg.target_fraction = number(observe["target_fraction"], "observe.target_fraction");
    if (!(cfg.target_fraction > 0 && cfg.target_fraction <= 1)) fail("observe.target_fraction", "must be in (0, 1]");
  }
  if (observe.contains("u1_khz")) {
    cfg.u1_khz = number(observe["u1_khz"], "observe.u1_khz");
    if (!(cfg.u1_khz > 0)) fail("observe.u1_khz", "must be positive");
  }
  if (observe.contains("degeneracy_tol") && !observe["degeneracy_tol"].is_null()) {
    cfg.degeneracy_tol = number(observe["degeneracy_tol"], "observe.degeneracy_tol");
    if (!(*cfg.degeneracy_tol >= 0)) fail("observe.degeneracy_tol", "must be >= 0");
  }

  // output
  if (output.contains("directory")) cfg.output_dir = string_value(output["directory"], "output.directory");
  cfg.prefix = output.contains("prefix") ? string_value(output["prefix"], "output.prefix") : to_string(cfg.kind);
  if (output.contains("emit_plots")) {
    if (!output["emit_plots"].is_boolean()) fail("output.emit_plots", "expected true or false");
    cfg.emit_plots = output["emit_plots"].get<bool>();
  }

  // Every point must resolve to finite energies and durations.
  for (const auto& p : cfg.points()) cfg.resolve(p);
  if (cfg.kind == ExperimentKind::CorrelationSnapshot && !cfg.axes.empty()) {
    fail("model/protocol", "correlation_snapshot needs a single parameter point");
  }
  return cfg;
}

std::vector<ParameterPoint> ExperimentConfig::points() const {
  std::vector<ParameterPoint> out{base};
  for (const auto& axis : axes) {
    std::vector<ParameterPoint> next;
    for (const auto& p : out) {
      for (std::size_t i = 0; i < axis.size(); ++i) {
        ParameterPoint q = p;
        if (axis.field == "N") q.bosons = static_cast<int>(axis.values[i]);
        if (axis.field == "J_over_U0") q.j_over_u0 = axis.values[i];
        if (axis.field == "J_over_U1") q.j_over_u1 = axis.values[i];
        if (axis.field == "tau") q.tau = axis.values[i];
        if (axis.field == "sites") q.sites = axis.site_sets[i];
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

ResolvedPoint ExperimentConfig::resolve(const ParameterPoint& p) const {
  ResolvedPoint r;
  r.point = p;
  if (absolute) {
    r.hopping = absolute->hopping;
    r.u_initial = absolute->u_initial;
    r.u_final = absolute->u_final;
  } else {
    // Energy unit |U1| = 1.
    r.hopping = std::abs(p.j_over_u1);
    r.u_final = r.hopping / p.j_over_u1;
    r.u_initial = r.hopping / p.j_over_u0;
  }
  r.duration = to_internal_time(r, p.tau);
  const bool hold_tau = kind == ExperimentKind::BellTrace || kind == ExperimentKind::BellSweep ||
                        kind == ExperimentKind::WTrace || kind == ExperimentKind::FidelityTrace ||
                        kind == ExperimentKind::CorrelationSnapshot;
  r.hold = hold ? to_internal_time(r, *hold) : (hold_tau ? r.duration : 0.0);
  if (!(r.duration > 0) || !std::isfinite(r.duration)) fail("protocol.tau", "does not resolve to a finite duration");
  if (!std::isfinite(r.hold)) fail("protocol.hold", "does not resolve to a finite duration");
  return r;
}

double ExperimentConfig::to_internal_time(const ResolvedPoint& r, double t) const {
  switch (time_unit) {
    case TimeUnit::Internal: return t;
    case TimeUnit::U0:
      if (r.u_initial == 0) fail("protocol.time_unit", "U0 = 0 cannot set the time unit");
      return t / std::abs(r.u_initial);
    case TimeUnit::U1:
      if (r.u_final == 0) fail("protocol.time_unit", "U1 = 0 cannot set the time unit");
      return t / std::abs(r.u_final);
  }
  return t;
}

json to_json(const ExperimentConfig& cfg) {
  auto axis_or = [&](const std::string& field, const json& scalar) -> json {
    for (const auto& a : cfg.axes) {
      if (a.field == field) return a.field == "sites" ? json(a.site_sets) : json(a.values);
    }
    return scalar;
  };
  json model = {{"L", cfg.sites}, {"N", axis_or("N", cfg.base.bosons)}};
  if (cfg.absolute) {
    model["J"] = cfg.absolute->hopping;
    model["U0"] = cfg.absolute->u_initial;
    model["U1"] = cfg.absolute->u_final;
  } else {
    model["J_over_U0"] = axis_or("J_over_U0", cfg.base.j_over_u0);
    model["J_over_U1"] = axis_or("J_over_U1", cfg.base.j_over_u1);
  }
  json protocol = {{"sites", axis_or("sites", cfg.base.sites)},
                   {"tau", axis_or("tau", cfg.base.tau)},
                   {"time_unit", to_string(cfg.time_unit)},
                   {"hold", cfg.hold ? json(*cfg.hold) : json(nullptr)}};
  json integrator = {{"method", to_string(cfg.propagator)},
                     {"dt", cfg.integrator.dt},
                     {"samples", cfg.integrator.samples},
                     {"norm_drift_tol", cfg.integrator.norm_drift_tol},
                     {"max_halvings", cfg.integrator.max_halvings},
                     {"auto_direct_above", cfg.auto_direct_above}};
  json observe = {{"target_fraction", cfg.target_fraction},
                  {"u1_khz", cfg.u1_khz},
                  {"degeneracy_tol", cfg.degeneracy_tol ? json(*cfg.degeneracy_tol) : json(nullptr)}};
  if (!cfg.pair.empty()) observe["pair"] = cfg.pair;
  if (!cfg.snapshot_times.empty()) observe["snapshot_times"] = cfg.snapshot_times;
  json output = {{"directory", cfg.output_dir.string()}, {"prefix", cfg.prefix}, {"emit_plots", cfg.emit_plots}};
  return {{"experiment", to_string(cfg.kind)}, {"model", model},       {"protocol", protocol},
          {"integrator", integrator},          {"observe", observe},   {"output", output}};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::string json_text = text;
  if (!text.empty() && text.front() == '#') {
    std::istringstream lines(text);
    std::string line;
    json_text.clear();
    const std::string tag = "# config: ";
    while (std::getline(lines, line) && line.starts_with("#")) {
      if (line.starts_with(tag)) {
        json_text = line.substr(tag.size());
        break;
      }
    }
    if (json_text.empty()) throw ConfigError(path.string() + ": result table has no '# config:' header line");
  }
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

PlanConfig parse_plan(const json& doc) {
  reject_unknown(doc, "", {"trap", "hopping_kHz", "laser", "delta", "U1_kHz", "J_over_U1", "tau", "heating_rate_Hz",
                           "heating_margin"});
  PlanConfig plan;
  if (doc.contains("trap")) {
    const json& t = doc["trap"];
    reject_unknown(t, "trap", {"omega_x_MHz", "omega_axial_kHz", "spacing_um", "q", "rf_MHz"});
    if (t.contains("omega_x_MHz")) plan.trap.omega_x_mhz = number(t["omega_x_MHz"], "trap.omega_x_MHz");
    if (t.contains("omega_axial_kHz")) plan.trap.omega_axial_khz = number(t["omega_axial_kHz"], "trap.omega_axial_kHz");
    if (t.contains("spacing_um")) plan.trap.spacing_um = number(t["spacing_um"], "trap.spacing_um");
    if (t.contains("q")) plan.trap.q = number(t["q"], "trap.q");
    if (t.contains("rf_MHz")) plan.trap.rf_mhz = number(t["rf_MHz"], "trap.rf_MHz");
  }
  try {
    physical::validate(plan.trap);
  } catch (const std::invalid_argument& e) {
    fail("trap", e.what());
  }
  if (doc.contains("hopping_kHz")) plan.hopping_khz = number(doc["hopping_kHz"], "hopping_kHz");

  if (!doc.contains("laser")) fail("laser", "missing");
  const json& l = doc["laser"];
  reject_unknown(l, "laser", {"F_kHz", "eta_x"});
  if (!l.contains("F_kHz") || !l.contains("eta_x")) fail("laser", "needs F_kHz and eta_x");
  const double force = number(l["F_kHz"], "laser.F_kHz");
  const double eta = number(l["eta_x"], "laser.eta_x");
  if (!doc.contains("delta")) fail("delta", "missing per-site standing-wave parity list");
  for (int d : int_list(doc["delta"], "delta")) {
    physical::LaserParams p{force, eta, d};
    try {
      physical::validate(p);
    } catch (const std::invalid_argument& e) {
      fail("laser/delta", e.what());
    }
    plan.lasers.push_back(p);
  }
  if (plan.lasers.empty()) fail("delta", "needs at least one site");

  if (doc.contains("U1_kHz")) plan.u1_khz = number(doc["U1_kHz"], "U1_kHz");
  if (!(plan.u1_khz > 0)) fail("U1_kHz", "must be positive (magnitude of the final interaction)");
  if (doc.contains("J_over_U1")) plan.j_over_u1 = number(doc["J_over_U1"], "J_over_U1");
  if (doc.contains("tau")) plan.taus = numeric_values(doc["tau"], "tau");
  for (double t : plan.taus) {
    if (!(t > 0)) fail("tau", "ramp durations must be positive");
  }
  if (doc.contains("heating_rate_Hz")) plan.heating_rate_hz = number(doc["heating_rate_Hz"], "heating_rate_Hz");
  if (doc.contains("heating_margin")) plan.heating_margin = number(doc["heating_margin"], "heating_margin");
  if (!(plan.heating_rate_hz > 0)) fail("heating_rate_Hz", "must be positive");
  if (!(plan.heating_margin > 0)) fail("heating_margin", "must be positive");
  return plan;
}

}  // namespace ionramp
