#ifndef IONRAMP_CONFIG_HPP
#define IONRAMP_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ionramp/evolve.hpp"
#include "ionramp/physical.hpp"

namespace ionramp {

enum class ExperimentKind {
  BellTrace,
  BellSweep,
  WTrace,
  CoolingTrace,
  CoolingSweep,
  CorrelationSnapshot,
  FidelityTrace,
  Custom,
};

std::string to_string(ExperimentKind kind);
bool is_trace(ExperimentKind kind);
bool is_cooling(ExperimentKind kind);

// Unit in which ramp and hold durations are quoted: tau U0 / hbar, tau |U1| / hbar, or raw internal time.
enum class TimeUnit { U0, U1, Internal };

enum class Propagator { Eigenbasis, Direct, Auto };

// One point of parameter space. Durations are in the config's time unit.
struct ParameterPoint {
  int bosons = 0;
  double j_over_u0 = 0;
  double j_over_u1 = 0;
  double tau = 0;
  std::vector<int> sites;
};

struct SweepAxis {
  std::string field;  // tau | J_over_U0 | J_over_U1 | N | sites
  std::vector<double> values;
  std::vector<std::vector<int>> site_sets;

  std::size_t size() const { return field == "sites" ? site_sets.size() : values.size(); }
};

struct AbsoluteEnergies {
  double hopping = 0;
  double u_initial = 0;
  double u_final = 0;
};

// Energies (hbar = 1) and durations of a single simulation.
struct ResolvedPoint {
  ParameterPoint point;
  double hopping = 0;
  double u_initial = 0;
  double u_final = 0;
  double duration = 0;
  double hold = 0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Custom;
  int sites = 0;
  ParameterPoint base;
  std::optional<AbsoluteEnergies> absolute;
  std::vector<SweepAxis> axes;
  TimeUnit time_unit = TimeUnit::U1;
  std::optional<double> hold;

  Propagator propagator = Propagator::Auto;
  std::size_t auto_direct_above = 64;   // Auto picks the direct integrator above this dimension
  IntegratorOptions integrator;

  std::vector<int> pair;  // empty: first two ramped sites
  std::vector<double> snapshot_times;
  double target_fraction = 0.9;
  double u1_khz = 1.1;
  std::optional<double> degeneracy_tol;

  std::filesystem::path output_dir = "out";
  std::string prefix;
  bool emit_plots = false;

  std::vector<ParameterPoint> points() const;  // Cartesian product, sorted by axis values
  ResolvedPoint resolve(const ParameterPoint& p) const;
  double to_internal_time(const ResolvedPoint& r, double t) const;  // config unit -> internal
};

/// Parses and validates a config document; errors name the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Fully resolved canonical form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Reads a JSON config, or a CSV result table whose '# config:' header line holds one.
ExperimentConfig load_config(const std::filesystem::path& path);

struct PlanConfig {
  physical::TrapParams trap;
  double hopping_khz = 0.55;
  std::vector<physical::LaserParams> lasers;  // one per site
  double u1_khz = 1.1;
  std::optional<double> j_over_u1;
  std::vector<double> taus;  // tau |U1| / hbar
  double heating_rate_hz = 3.0;
  double heating_margin = 10.0;
};

PlanConfig parse_plan(const nlohmann::json& doc);

}  // namespace ionramp

#endif  // IONRAMP_CONFIG_HPP
