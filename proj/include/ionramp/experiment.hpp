#ifndef IONRAMP_EXPERIMENT_HPP
#define IONRAMP_EXPERIMENT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ionramp/config.hpp"
#include "ionramp/table.hpp"

namespace ionramp {

// Observables sampled along one simulated ramp.
struct PointResult {
  ResolvedPoint resolved;
  std::size_t dimension = 0;
  Propagator propagator = Propagator::Eigenbasis;
  double dt = 0;
  double max_norm_drift = 0;
  std::size_t ground_manifold_size = 0;
  std::vector<int> pair;

  std::vector<double> times;  // internal units
  std::size_t ramp_end = 0;
  std::vector<Eigen::VectorXd> occupations;
  std::vector<Eigen::MatrixXd> correlations;
  std::vector<double> fidelity;        // against the equal-phase superposition of the ramped sites
  std::vector<double> ground_overlap;  // with the ground manifold of H(tau)
  std::vector<double> final_energy;    // <H(tau)>

  double pair_correlation(std::size_t sample) const { return correlations[sample](pair[0], pair[1]); }
  double site_fraction(std::size_t sample) const;  // sum over ramped sites of <n_i> / N
  double c_max() const;
};

/// Simulates one parameter point. `extra_times` (internal units) are sampled exactly.
PointResult simulate_point(const ExperimentConfig& config, const ParameterPoint& point,
                           const std::vector<double>& extra_times = {});

/// All points of the config, evaluated by `threads` workers. Output order follows config.points().
std::vector<PointResult> simulate_all(const ExperimentConfig& config, unsigned threads,
                                      const std::vector<double>& extra_times_in_config_units = {});

ResultTable summary_table(const ExperimentConfig& config, const std::vector<PointResult>& results);
ResultTable trace_table(const ExperimentConfig& config, const std::vector<PointResult>& results);
ResultTable threshold_table(const ExperimentConfig& config, const std::vector<PointResult>& results);
ResultTable snapshot_table(const ExperimentConfig& config, const PointResult& result,
                           const std::vector<double>& times_in_config_units);

struct RunOutput {
  std::vector<std::filesystem::path> files;
  double max_norm_drift = 0;
};

// Kind-specific tables: traces (+ summary), sweep summaries (+ cooling thresholds) or snapshots.
RunOutput run(const ExperimentConfig& config, unsigned threads);
// One summary row per point of the Cartesian product, whatever the kind.
RunOutput sweep(const ExperimentConfig& config, unsigned threads);
// Correlation matrix at `time` (config time unit) for a single-point config.
RunOutput snapshot(const ExperimentConfig& config, double time, unsigned threads);

ResultTable plan_table(const PlanConfig& plan);

}  // namespace ionramp

#endif  // IONRAMP_EXPERIMENT_HPP
