#include "ionramp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <numbers>
#include <thread>

#include "ionramp/evolve.hpp"
#include "ionramp/model.hpp"
#include "ionramp/observe.hpp"
#include "ionramp/physical.hpp"
#include "ionramp/ramp.hpp"

namespace ionramp {

double PointResult::site_fraction(std::size_t sample) const {
  const int n = resolved.point.bosons;
  if (n == 0) return 0;
  double sum = 0;
  for (int s : resolved.point.sites) sum += occupations[sample](s);
  return sum / n;
}

double PointResult::c_max() const {
  std::vector<double> series(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) series[k] = pair_correlation(k);
  return cmax<double>(series);
}

namespace {

std::vector<int> observed_pair(const ExperimentConfig& cfg, const std::vector<int>& sites) {
  if (!cfg.pair.empty()) return cfg.pair;
  if (sites.size() >= 2) return {sites[0], sites[1]};
  return {sites[0], sites[0]};
}

std::string join_sites(const std::vector<int>& sites) {
  std::string s;
  for (std::size_t i = 0; i < sites.size(); ++i) s += (i ? ";" : "") + std::to_string(sites[i]);
  return s;
}

bool use_direct(const ExperimentConfig& cfg, std::size_t dimension) {
  switch (cfg.propagator) {
    case Propagator::Eigenbasis: return false;
    case Propagator::Direct: return true;
    case Propagator::Auto: return dimension > cfg.auto_direct_above;
  }
  return false;
}

std::vector<std::string> metadata(const ExperimentConfig& cfg, const std::vector<PointResult>& results) {
  double drift = 0;
  double dt_min = std::numeric_limits<double>::infinity();
  double dt_max = 0;
  bool eigen = false;
  bool direct = false;
  for (const auto& r : results) {
    drift = std::max(drift, r.max_norm_drift);
    dt_min = std::min(dt_min, r.dt);
    dt_max = std::max(dt_max, r.dt);
    (r.propagator == Propagator::Direct ? direct : eigen) = true;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "integrator: rk4 %s%s%s, dt used %.6g..%.6g (internal units)",
                eigen ? "eigenbasis" : "", eigen && direct ? "+" : "", direct ? "direct" : "", dt_min, dt_max);
  std::vector<std::string> lines = {
      std::string("ionramp ") + IONRAMP_VERSION,
      "experiment: " + to_string(cfg.kind),
      "config: " + to_json(cfg).dump(),
      buf,
  };
  std::snprintf(buf, sizeof buf, "max_norm_drift: %.3e", drift);
  lines.emplace_back(buf);
  std::snprintf(buf, sizeof buf,
                "units: hbar = 1; t_U0 = t U0/hbar, t_U1 = t |U1|/hbar; ms columns use |U1| = %g kHz with E/hbar = "
                "2 pi nu",
                cfg.u1_khz);
  lines.emplace_back(buf);
  return lines;
}

double to_ms(const ExperimentConfig& cfg, double t_u1) {
  return physical::dimensionless_time_to_seconds(t_u1, cfg.u1_khz) * 1e3;
}

}  // namespace

namespace {

// Everything about a point that does not depend on tau: the initial ground
// state, H(tau), and its spectrum or ground manifold. Sweeps over tau share it.
struct Spectra {
  Eigen::VectorXd psi0;
  Hamiltonian<double> h_final;
  std::shared_ptr<const EigenFrame<double>> frame;  // eigenbasis propagator only
  GroundState<double> ground;
};

using SpectraKey = std::tuple<int, std::vector<int>, double, double, double, bool>;

class SpectraCache {
 public:
  template <typename Compute>
  std::shared_ptr<const Spectra> get(const SpectraKey& key, Compute&& compute) {
    std::promise<std::shared_ptr<const Spectra>> promise;
    std::shared_future<std::shared_ptr<const Spectra>> future;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        future = promise.get_future().share();
        entries_.emplace(key, future);
        owner = true;
      } else {
        future = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(compute());
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  std::mutex mutex_;
  std::map<SpectraKey, std::shared_future<std::shared_ptr<const Spectra>>> entries_;
};

PointResult simulate(const ExperimentConfig& cfg, const ParameterPoint& point, const std::vector<double>& extra_times,
                     SpectraCache& cache) {
  PointResult out;
  out.resolved = cfg.resolve(point);
  const auto& r = out.resolved;
  const FockBasis basis(cfg.sites, point.bosons);
  out.dimension = basis.size();
  out.pair = observed_pair(cfg, point.sites);
  const bool direct = use_direct(cfg, basis.size());

  const ModelParams<double> initial{cfg.sites, point.bosons, r.hopping,
                                    Eigen::VectorXd::Constant(cfg.sites, r.u_initial)};
  const RampProtocol protocol = make_protocol(cfg.sites, point.sites, r.u_initial, r.u_final, r.duration, r.hold);

  const SpectraKey key{point.bosons, protocol.ramped_sites, r.hopping, r.u_initial, r.u_final, direct};
  const auto spectra = cache.get(key, [&] {
    auto s = std::make_shared<Spectra>();
    s->psi0 = ground_state(hamiltonian(initial, basis)).state;
    ModelParams<double> final_model = initial;
    final_model.interaction = final_interaction(protocol);
    s->h_final = hamiltonian(final_model, basis);
    if (direct) {
      s->ground = ground_state(s->h_final, cfg.degeneracy_tol);
    } else {
      auto frame = std::make_shared<EigenFrame<double>>(eigenframe(s->h_final, basis, protocol.ramped_sites));
      s->ground = ground_state_from_spectrum<double>(frame->energies, frame->vectors, cfg.degeneracy_tol);
      s->frame = std::move(frame);
    }
    return std::shared_ptr<const Spectra>(std::move(s));
  });

  IntegratorOptions options = cfg.integrator;
  options.extra_times = extra_times;

  std::vector<ComplexVector<double>> states;
  if (direct) {
    out.propagator = Propagator::Direct;
    const auto traj = evolve_direct(spectra->psi0, basis, initial, protocol, options);
    out.dt = traj.dt;
    out.max_norm_drift = traj.max_norm_drift;
    out.times = traj.times;
    out.ramp_end = traj.ramp_end;
    states = traj.amplitudes;
  } else {
    out.propagator = Propagator::Eigenbasis;
    const auto& frame = *spectra->frame;
    const auto traj = evolve_eigenbasis(project_initial(spectra->psi0, frame), frame, protocol, options);
    out.dt = traj.dt;
    out.max_norm_drift = traj.max_norm_drift;
    out.times = traj.times;
    out.ramp_end = traj.ramp_end;
    states = fock_amplitudes(traj, &frame);
  }
  const auto& ground = spectra->ground;
  out.ground_manifold_size = static_cast<std::size_t>(ground.manifold.cols());

  const auto target = localized_superposition<double>(basis, point.sites);
  const std::size_t n = states.size();
  out.occupations.reserve(n);
  out.correlations.reserve(n);
  for (const auto& psi : states) {
    out.occupations.push_back(occupations(psi, basis));
    out.correlations.push_back(correlation_matrix(psi, basis));
    out.fidelity.push_back(fidelity(psi, target));
    out.ground_overlap.push_back(ground_manifold_overlap(psi, ground.manifold));
    out.final_energy.push_back(energy(psi, spectra->h_final));
  }
  return out;
}

}  // namespace

PointResult simulate_point(const ExperimentConfig& cfg, const ParameterPoint& point,
                           const std::vector<double>& extra_times) {
  SpectraCache cache;
  return simulate(cfg, point, extra_times, cache);
}

std::vector<PointResult> simulate_all(const ExperimentConfig& cfg, unsigned threads,
                                      const std::vector<double>& extra_times_in_config_units) {
  const auto points = cfg.points();
  std::vector<PointResult> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  SpectraCache cache;

  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        std::vector<double> extra;
        const auto resolved = cfg.resolve(points[i]);
        for (double t : extra_times_in_config_units) extra.push_back(cfg.to_internal_time(resolved, t));
        results[i] = simulate(cfg, points[i], extra, cache);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

ResultTable summary_table(const ExperimentConfig& cfg, const std::vector<PointResult>& results) {
  ResultTable t;
  t.metadata = metadata(cfg, results);
  t.columns = {"tau_U0",          "tau_U1",         "tau_ms",           "N",
               "J_over_U0",       "J_over_U1",      "sites",            "pair",
               "C_max",           "C_at_tau",       "fidelity_at_tau",  "fidelity_max",
               "ground_overlap_at_tau", "site_fraction_at_tau", "dimension", "norm_drift",
               "dt"};
  for (const auto& r : results) {
    const auto& p = r.resolved;
    const double tau_u1 = p.duration * std::abs(p.u_final);
    const std::size_t e = r.ramp_end;
    t.rows.push_back({p.duration * std::abs(p.u_initial), tau_u1, to_ms(cfg, tau_u1),
                      static_cast<long>(p.point.bosons), p.point.j_over_u0, p.point.j_over_u1,
                      join_sites(p.point.sites), join_sites(r.pair), r.c_max(), r.pair_correlation(e),
                      r.fidelity[e], *std::max_element(r.fidelity.begin(), r.fidelity.end()),
                      r.ground_overlap[e], r.site_fraction(e), static_cast<long>(r.dimension), r.max_norm_drift,
                      r.dt});
  }
  return t;
}

ResultTable trace_table(const ExperimentConfig& cfg, const std::vector<PointResult>& results) {
  ResultTable t;
  t.metadata = metadata(cfg, results);
  t.columns = {"t_U0", "t_U1", "tau_U0", "tau_U1", "N", "J_over_U0", "J_over_U1", "sites"};
  // Correlations among every pair of ramped sites (and the observed pair), then all occupations.
  std::vector<std::pair<int, int>> pairs;
  if (!results.empty()) {
    const auto& sites = results.front().resolved.point.sites;
    for (std::size_t a = 0; a < sites.size(); ++a) {
      for (std::size_t b = a; b < sites.size(); ++b) pairs.emplace_back(sites[a], sites[b]);
    }
    const auto& pr = results.front().pair;
    if (std::find(pairs.begin(), pairs.end(), std::pair{pr[0], pr[1]}) == pairs.end()) pairs.emplace_back(pr[0], pr[1]);
  }
  const bool same_sites = std::all_of(results.begin(), results.end(), [&](const PointResult& r) {
    return r.resolved.point.sites == results.front().resolved.point.sites;
  });
  if (same_sites) {
    for (auto [a, b] : pairs) t.columns.push_back("C_" + std::to_string(a) + "_" + std::to_string(b));
  } else {
    t.columns.push_back("C_pair");
  }
  t.columns.insert(t.columns.end(), {"fidelity", "ground_overlap", "energy_final", "site_fraction"});
  for (int i = 0; i < cfg.sites; ++i) t.columns.push_back("n_" + std::to_string(i));
  t.columns.push_back("n_total");

  for (const auto& r : results) {
    const auto& p = r.resolved;
    const double u0 = std::abs(p.u_initial);
    const double u1 = std::abs(p.u_final);
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      std::vector<Cell> row = {r.times[k] * u0,    r.times[k] * u1,   p.duration * u0,
                               p.duration * u1,    static_cast<long>(p.point.bosons), p.point.j_over_u0,
                               p.point.j_over_u1,  join_sites(p.point.sites)};
      if (same_sites) {
        for (auto [a, b] : pairs) row.emplace_back(r.correlations[k](a, b));
      } else {
        row.emplace_back(r.pair_correlation(k));
      }
      row.insert(row.end(), {r.fidelity[k], r.ground_overlap[k], r.final_energy[k], r.site_fraction(k)});
      for (int i = 0; i < cfg.sites; ++i) row.emplace_back(r.occupations[k](i));
      row.emplace_back(r.occupations[k].sum());
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

ResultTable threshold_table(const ExperimentConfig& cfg, const std::vector<PointResult>& results) {
  ResultTable t;
  t.metadata = metadata(cfg, results);
  char buf[96];
  std::snprintf(buf, sizeof buf, "threshold: first ramp time with site_fraction_at_tau >= %g (linear interpolation)",
                cfg.target_fraction);
  t.metadata.emplace_back(buf);
  t.columns = {"N", "J_over_U0", "J_over_U1", "sites", "reached", "tau_threshold_U0", "tau_threshold_U1",
               "tau_threshold_ms"};

  // Group by everything but tau; results already come ordered with tau innermost.
  std::map<std::tuple<int, double, double, std::vector<int>>, std::vector<const PointResult*>> groups;
  std::vector<std::tuple<int, double, double, std::vector<int>>> order;
  for (const auto& r : results) {
    const auto& p = r.resolved.point;
    auto key = std::make_tuple(p.bosons, p.j_over_u0, p.j_over_u1, p.sites);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  for (const auto& key : order) {
    auto members = groups[key];
    std::sort(members.begin(), members.end(),
              [](const PointResult* a, const PointResult* b) { return a->resolved.duration < b->resolved.duration; });
    double threshold = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double f = members[i]->site_fraction(members[i]->ramp_end);
      if (f >= cfg.target_fraction) {
        if (i == 0) {
          threshold = members[i]->resolved.duration;
        } else {
          const double f0 = members[i - 1]->site_fraction(members[i - 1]->ramp_end);
          const double t0 = members[i - 1]->resolved.duration;
          const double t1 = members[i]->resolved.duration;
          threshold = t0 + (cfg.target_fraction - f0) / (f - f0) * (t1 - t0);
        }
        break;
      }
    }
    const auto& any = members.front()->resolved;
    const double u0 = std::abs(any.u_initial);
    const double u1 = std::abs(any.u_final);
    const bool reached = !std::isnan(threshold);
    t.rows.push_back({static_cast<long>(std::get<0>(key)), std::get<1>(key), std::get<2>(key),
                      join_sites(std::get<3>(key)), static_cast<long>(reached), threshold * u0, threshold * u1,
                      reached ? to_ms(cfg, threshold * u1) : threshold});
  }
  return t;
}

ResultTable snapshot_table(const ExperimentConfig& cfg, const PointResult& result,
                           const std::vector<double>& times_in_config_units) {
  ResultTable t;
  t.metadata = metadata(cfg, {result});
  t.columns = {"t_U0", "t_U1", "k"};
  for (int l = 0; l < cfg.sites; ++l) t.columns.push_back("C_k_" + std::to_string(l));
  const auto& p = result.resolved;
  const double total = p.duration + p.hold;
  for (double tc : times_in_config_units) {
    const double ti = cfg.to_internal_time(p, tc);
    if (ti < 0 || ti > total * (1 + 1e-12)) {
      throw ConfigError("snapshot time " + std::to_string(tc) + " outside [0, tau + hold]");
    }
    const std::size_t k = [&] {
      const double scale = std::max(1.0, total);
      auto it = std::lower_bound(result.times.begin(), result.times.end(), ti - 1e-12 * scale);
      if (it == result.times.end() || std::abs(*it - ti) > 1e-12 * scale) {
        throw NumericalError("snapshot time was not sampled by the trajectory");
      }
      return static_cast<std::size_t>(it - result.times.begin());
    }();
    const auto& c = result.correlations[k];
    for (int row = 0; row < cfg.sites; ++row) {
      std::vector<Cell> cells = {result.times[k] * std::abs(p.u_initial), result.times[k] * std::abs(p.u_final),
                                 static_cast<long>(row)};
      for (int l = 0; l < cfg.sites; ++l) cells.emplace_back(c(row, l));
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

namespace {

std::filesystem::path out_file(const ExperimentConfig& cfg, const std::string& suffix) {
  return cfg.output_dir / (cfg.prefix + suffix + ".csv");
}

double max_drift(const std::vector<PointResult>& results) {
  double d = 0;
  for (const auto& r : results) d = std::max(d, r.max_norm_drift);
  return d;
}

}  // namespace

RunOutput run(const ExperimentConfig& cfg, unsigned threads) {
  RunOutput out;
  if (cfg.kind == ExperimentKind::CorrelationSnapshot) {
    const auto results = simulate_all(cfg, threads, cfg.snapshot_times);
    out.max_norm_drift = max_drift(results);
    const auto path = out_file(cfg, "");
    write_csv(snapshot_table(cfg, results.front(), cfg.snapshot_times), path);
    out.files.push_back(path);
    return out;
  }
  const auto results = simulate_all(cfg, threads);
  out.max_norm_drift = max_drift(results);
  if (is_trace(cfg.kind)) {
    const auto trace = out_file(cfg, "");
    write_csv(trace_table(cfg, results), trace);
    out.files.push_back(trace);
    const auto summary = out_file(cfg, "_summary");
    write_csv(summary_table(cfg, results), summary);
    out.files.push_back(summary);
  } else {
    const auto summary = out_file(cfg, "");
    write_csv(summary_table(cfg, results), summary);
    out.files.push_back(summary);
    if (is_cooling(cfg.kind)) {
      const auto thresholds = out_file(cfg, "_thresholds");
      write_csv(threshold_table(cfg, results), thresholds);
      out.files.push_back(thresholds);
    }
  }
  return out;
}

RunOutput sweep(const ExperimentConfig& cfg, unsigned threads) {
  const auto results = simulate_all(cfg, threads);
  RunOutput out;
  out.max_norm_drift = max_drift(results);
  const auto path = out_file(cfg, "_sweep");
  write_csv(summary_table(cfg, results), path);
  out.files.push_back(path);
  return out;
}

RunOutput snapshot(const ExperimentConfig& cfg, double time, unsigned threads) {
  if (!cfg.axes.empty()) throw ConfigError("snapshot: config sweeps parameters; snapshot needs a single point");
  const auto resolved = cfg.resolve(cfg.base);
  const double ti = cfg.to_internal_time(resolved, time);
  if (!(ti >= 0) || ti > (resolved.duration + resolved.hold) * (1 + 1e-12)) {
    throw ConfigError("--time: " + std::to_string(time) + " outside [0, tau + hold]");
  }
  const auto results = simulate_all(cfg, threads, {time});
  RunOutput out;
  out.max_norm_drift = max_drift(results);
  const auto path = out_file(cfg, "_snapshot");
  write_csv(snapshot_table(cfg, results.front(), {time}), path);
  out.files.push_back(path);
  return out;
}

ResultTable plan_table(const PlanConfig& plan) {
  using namespace physical;
  ResultTable t;
  t.metadata = {std::string("ionramp ") + IONRAMP_VERSION,
                "plan: kHz/MHz values are ordinary frequencies; E/hbar = 2 pi nu"};
  t.columns = {"quantity", "value", "unit", "verdict"};
  auto add = [&](std::string q, double v, std::string unit, std::string verdict = "") {
    t.rows.push_back({std::move(q), v, std::move(unit), std::move(verdict)});
  };

  const double beta = beta_x(plan.hopping_khz * 1e-3, plan.trap.omega_x_mhz);
  add("omega_x", plan.trap.omega_x_mhz, "MHz");
  add("J", plan.hopping_khz, "kHz");
  add("beta_x", beta, "", beta < kPerturbativeBetaLimit ? "pass" : "warn: beta_x not << 1, uniform J questionable");
  for (std::size_t i = 0; i < plan.lasers.size(); ++i) {
    const double u = onsite_interaction(plan.lasers[i]);
    add("U_" + std::to_string(i), u, "kHz", u > 0 ? "repulsive" : (u < 0 ? "attractive" : "zero"));
    if (u != 0) add("J_over_U_" + std::to_string(i), plan.hopping_khz / u, "");
  }
  if (plan.j_over_u1) {
    const double implied = std::abs(*plan.j_over_u1) * plan.u1_khz;
    const double mismatch = std::abs(implied - plan.hopping_khz) / plan.hopping_khz;
    add("J_implied_by_J_over_U1", implied, "kHz",
        mismatch > 0.05 ? "inconsistent with J; ratios drive the dynamics, kHz only rescale time" : "consistent");
  }
  for (double tau : plan.taus) {
    const double seconds = dimensionless_time_to_seconds(tau, plan.u1_khz);
    const auto check = heating_feasibility(seconds, plan.heating_rate_hz, plan.heating_margin);
    const std::string label = "tau_" + format_cell(tau);
    add(label + "_duration", seconds * 1e3, "ms");
    add(label + "_rate_over_heating", check.ratio, "", to_string(check.verdict));
  }
  return t;
}

}  // namespace ionramp
