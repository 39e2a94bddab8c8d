// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ionramp/config.hpp"
#include "ionramp/evolve.hpp"
#include "ionramp/experiment.hpp"
#include "ionramp/observe.hpp"

using namespace ionramp;
using nlohmann::json;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<PointResult> run_points(const json& doc) { return simulate_all(parse_config(doc), threads()); }

json bell(double j_over_u0, json tau, const char* unit = "U1") {
  return {{"experiment", "bell_sweep"},
          {"model", {{"L", 6}, {"N", 2}, {"J_over_U0", j_over_u0}, {"J_over_U1", -0.2}}},
          {"protocol", {{"sites", {1, 4}}, {"tau", tau}, {"time_unit", unit}}}};
}

json cooling(json bosons, json j_over_u0, json tau) {
  return {{"experiment", "cooling_sweep"},
          {"model", {{"L", 8}, {"N", bosons}, {"J_over_U0", j_over_u0}, {"J_over_U1", -0.2}}},
          {"protocol", {{"sites", {2}}, {"tau", tau}, {"time_unit", "U1"}}}};
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double tau_u1(const PointResult& r) { return r.resolved.duration * std::abs(r.resolved.u_final); }

// C_14^Max over J/U0 in [0.05, 1] at tau |U1| = 500.
Outcome bell_peak() {
  auto doc = bell(0, 500);
  doc["model"]["J_over_U0"] = {{"start", 0.05}, {"stop", 1.0}, {"step", 0.05}};
  const auto results = run_points(doc);
  double best = -1, at = 0;
  for (const auto& r : results) {
    const double c = r.c_max();
    if (c > best) best = c, at = r.resolved.point.j_over_u0;
  }
  Outcome o;
  o.pass = best >= 0.48 && std::abs(at - 0.18) <= 0.05 + 1e-12;
  o.detail = "max C_14^Max = " + fmt("%.5f", best) + " at J/U0 = " + fmt("%.2f", at) + " (need >= 0.48 at 0.18 +- 0.05)";
  return o;
}

Outcome ramp_rate_ordering() {
  const auto results = run_points(bell(0.2, json::array({100, 200, 500})));
  std::map<double, double> c;
  for (const auto& r : results) c[std::round(tau_u1(r))] = r.c_max();
  Outcome o;
  o.pass = c[500] > c[200] && c[200] > c[100] && c[100] < 0.4;
  o.detail = "C_14^Max(500, 200, 100) = " + fmt("%.4f", c[500]) + ", " + fmt("%.4f", c[200]) + ", " +
             fmt("%.4f", c[100]) + " (need strictly decreasing, last < 0.4)";
  return o;
}

Outcome initial_correlations() {
  const FockBasis basis(6, 2);
  const auto h = hamiltonian(ModelParams<double>{6, 2, 0.2, Eigen::VectorXd::Ones(6)}, basis);
  const Eigen::VectorXd psi = ground_state(h).state;
  const double worst = correlation_matrix(psi, basis).cwiseAbs().maxCoeff();
  return {worst < 0.014, "max |C_kl(0)| = " + fmt("%.6f", worst) + " (need < 0.014)"};
}

// The tau U0 = 500 Bell run, shared by the next two criteria.
const PointResult& bell_run() {
  static const PointResult r = run_points(bell(0.2, 500, "U0")).front();
  return r;
}

Outcome final_correlations() {
  const auto& r = bell_run();
  const Eigen::MatrixXd c = r.correlations[r.ramp_end];
  bool ok = true;
  double worst_other = 0;
  std::ostringstream s;
  for (int k = 0; k < 6; ++k) {
    for (int l = 0; l < 6; ++l) {
      const bool bell_entry = (k == 1 || k == 4) && (l == 1 || l == 4);
      if (bell_entry) {
        ok = ok && c(k, l) >= 0.45 && c(k, l) <= 0.52;
      } else {
        worst_other = std::max(worst_other, std::abs(c(k, l)));
      }
    }
  }
  ok = ok && worst_other < 0.05;
  s << "C_11 = " << fmt("%.4f", c(1, 1)) << ", C_44 = " << fmt("%.4f", c(4, 4)) << ", C_14 = " << fmt("%.4f", c(1, 4))
    << ", C_41 = " << fmt("%.4f", c(4, 1)) << ", max other |C_kl| = " << fmt("%.4f", worst_other)
    << " (need [0.45, 0.52] and < 0.05)";
  return {ok, s.str()};
}

Outcome fidelity_at_tau() {
  const auto& r = bell_run();
  const std::size_t e = r.ramp_end;
  const double f = r.fidelity[e];
  const double overlap = r.ground_overlap[e];
  // Relative phase of the two localized amplitudes, from C_14 = |d1||d4| cos(phi).
  const double c14 = r.correlations[e](1, 4);
  const double mag = std::sqrt(r.correlations[e](1, 1) * r.correlations[e](4, 4));
  const double phi = mag > 0 ? std::acos(std::clamp(c14 / mag, -1.0, 1.0)) : 0;
  Outcome o;
  o.pass = f >= 0.95;
  o.detail = "F(tau) = " + fmt("%.4f", f) + " (need >= 0.95); ground-manifold overlap = " + fmt("%.4f", overlap) +
             ", |relative phase| = " + fmt("%.3f", phi) + " rad";
  if (!o.pass && overlap >= 0.95) {
    o.detail += "; PHASE DIAGNOSTIC: state is in the ground manifold but not the + superposition, "
                "so the target sign convention disagrees with the dynamics";
  }
  return o;
}

const std::vector<double> kCoolingGrid = {25, 50, 100, 173, 250, 350, 484};

Outcome cooling_n_independence() {
  const auto results = run_points(cooling(json::array({3, 4, 5, 6}), 0.5, kCoolingGrid));
  std::map<int, std::map<double, double>> curve;
  for (const auto& r : results) curve[r.resolved.point.bosons][std::round(tau_u1(r))] = r.site_fraction(r.ramp_end);
  double worst = 0;
  std::string pair;
  for (auto a = curve.begin(); a != curve.end(); ++a) {
    for (auto b = std::next(a); b != curve.end(); ++b) {
      for (const auto& [tau, v] : a->second) {
        const double d = std::abs(v - b->second.at(tau));
        if (d > worst) {
          worst = d;
          pair = "N=" + std::to_string(a->first) + "/" + std::to_string(b->first) + " at tau=" + fmt("%.0f", tau);
        }
      }
    }
  }
  return {worst <= 0.05, "max pairwise |dN_2/N| = " + fmt("%.4f", worst) + " (" + pair +
                             ", grid tau|U1| 25..484); need <= 0.05"};
}

Outcome cooling_milestones() {
  const auto results = run_points(cooling(json::array({3, 4, 5, 6}), 0.5, json::array({173, 484})));
  std::map<int, std::map<double, double>> overlap;
  for (const auto& r : results) overlap[r.resolved.point.bosons][std::round(tau_u1(r))] = r.ground_overlap[r.ramp_end];
  const double at25 = overlap[3][173];
  const double at70 = overlap[3][484];
  std::ostringstream s;
  s << "N=3 overlap(173 ~ 25 ms) = " << fmt("%.4f", at25) << " (need >= 0.87), overlap(484 ~ 70 ms) = "
    << fmt("%.4f", at70) << " (need >= 0.94); N=4..6 at 484:";
  for (int n = 4; n <= 6; ++n) s << ' ' << fmt("%.3f", overlap[n][484]);
  return {at25 >= 0.90 - 0.03 && at70 >= 0.97 - 0.03, s.str()};
}

const std::vector<double> kSweepGrid = {50, 100, 200, 300, 400, 500, 700, 1000, 1500, 2000, 3000};

Outcome cooling_sweep_ordering() {
  const std::vector<double> ratios = {0.05, 0.2, 0.3, 0.5, 0.7, 0.9};
  const auto results = run_points(cooling(3, ratios, kSweepGrid));
  std::map<double, std::vector<std::pair<double, double>>> curves;
  for (const auto& r : results) {
    curves[r.resolved.point.j_over_u0].emplace_back(tau_u1(r), r.site_fraction(r.ramp_end));
  }
  std::vector<double> thresholds;
  std::ostringstream s;
  s << "tau(N_2/N = 0.9):";
  for (double ratio : ratios) {
    auto& c = curves.at(ratio);
    std::sort(c.begin(), c.end());
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k].second >= 0.9) {
        if (k == 0) {
          t = c[0].first;
        } else {
          const auto [t0, f0] = c[k - 1];
          const auto [t1, f1] = c[k];
          t = t0 + (0.9 - f0) * (t1 - t0) / (f1 - f0);
        }
        break;
      }
    }
    thresholds.push_back(t);
    s << ' ' << fmt("%.2f", ratio) << "->" << (std::isinf(t) ? std::string(">3000") : fmt("%.0f", t));
  }
  bool ordered = true;
  for (std::size_t k = 1; k < thresholds.size(); ++k) ordered = ordered && thresholds[k - 1] < thresholds[k];
  s << " (need increasing in listed order)";
  return {ordered, s.str()};
}

Outcome property_suite() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  // Bell run: both integrators, norms, number, agreement, post-ramp energy.
  const FockBasis basis(6, 2);
  const ModelParams<double> initial{6, 2, 0.2, Eigen::VectorXd::Ones(6)};
  const auto protocol = make_protocol(6, {1, 4}, 1.0, -1.0, 500.0, 500.0);
  ModelParams<double> final_model = initial;
  final_model.interaction = final_interaction(protocol);
  const auto h_final = hamiltonian(final_model, basis);
  const Eigen::VectorXd psi0 = ground_state(hamiltonian(initial, basis)).state;
  const auto frame = eigenframe(h_final, basis, protocol.ramped_sites);
  const auto eig = evolve_eigenbasis(project_initial(psi0, frame), frame, protocol);
  const auto direct = evolve_direct(psi0, basis, initial, protocol);
  const auto psi = fock_amplitudes(eig, &frame);

  double norm_err = 0, number_err = 0, agreement = 0, energy_drift = 0;
  const double e_tau = energy(psi[eig.ramp_end], h_final);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    for (const auto* v : {&psi[k], &direct.amplitudes[k]}) {
      norm_err = std::max(norm_err, std::abs(v->norm() - 1));
      number_err = std::max(number_err, std::abs(occupations(*v, basis).sum() - 2));
    }
    agreement = std::max(agreement, (psi[k] - direct.amplitudes[k]).norm());
    if (k >= eig.ramp_end) {
      energy_drift = std::max(energy_drift, std::abs(energy(psi[k], h_final) - e_tau));
      energy_drift = std::max(energy_drift, std::abs(energy(direct.amplitudes[k], h_final) - e_tau));
    }
  }
  expect(norm_err < 1e-8, "norm " + fmt("%.2e", norm_err));
  expect(number_err < 1e-8, "sum n_i " + fmt("%.2e", number_err));
  expect(agreement < 1e-6, "eigenbasis vs direct " + fmt("%.2e", agreement));
  expect(energy_drift < 1e-8, "<H(tau)> drift " + fmt("%.2e", energy_drift));

  // J = 0: occupations frozen.
  {
    const FockBasis b(4, 3);
    Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.size()));
    start(static_cast<Eigen::Index>(b.index_of(Occupation{1, 0, 2, 0}))) = 1;
    const auto p = make_protocol(4, {0, 2}, 1.0, -1.0, 50.0, 10.0);
    const auto traj = evolve_direct(start, b, ModelParams<double>{4, 3, 0.0, Eigen::VectorXd::Ones(4)}, p);
    double moved = 0;
    for (const auto& v : traj.amplitudes) {
      moved = std::max(moved, (occupations(v, b) - Eigen::Vector4d(1, 0, 2, 0)).cwiseAbs().maxCoeff());
    }
    expect(moved < 1e-12, "J=0 occupations moved by " + fmt("%.2e", moved));
  }

  // RK4 order on the Bell ramp.
  double ratio = 0;
  {
    const auto p = make_protocol(6, {1, 4}, 1.0, -1.0, 20.0, 0.0);
    IntegratorOptions o;
    o.samples = 2;
    o.halve_on_drift = false;
    o.norm_drift_tol = 1.0;
    auto end_state = [&](double dt) {
      o.dt = dt;
      return evolve_direct(psi0, basis, initial, p, o).amplitudes.back();
    };
    const Eigen::VectorXcd reference = end_state(0.1 / 8);
    ratio = (end_state(0.1) - reference).norm() / (end_state(0.05) - reference).norm();
    expect(ratio >= 12 && ratio <= 20, "RK4 error ratio " + fmt("%.2f", ratio));
  }

  // Two-site spectra.
  {
    const FockBasis one(2, 1), two(2, 2);
    const auto e1 = ground_state(hamiltonian(ModelParams<double>{2, 1, 1.0, Eigen::Vector2d::Zero()}, one)).spectrum;
    const auto e2 = ground_state(hamiltonian(ModelParams<double>{2, 2, 1.0, Eigen::Vector2d::Zero()}, two)).spectrum;
    const double err = std::max({std::abs(e1(0) + 1), std::abs(e1(1) - 1), std::abs(e2(0) + 2), std::abs(e2(1)),
                                 std::abs(e2(2) - 2)});
    expect(err < 1e-10, "two-site spectra off by " + fmt("%.2e", err));
  }

  std::ostringstream s;
  s << "norm " << fmt("%.1e", norm_err) << ", sum n " << fmt("%.1e", number_err) << ", eig/direct "
    << fmt("%.1e", agreement) << ", energy drift " << fmt("%.1e", energy_drift) << ", RK4 ratio " << fmt("%.2f", ratio);
  for (const auto& f : failures) s << "; failed: " << f;
  return {failures.empty(), s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Bell peak over J/U0", bell_peak},
      {"ramp-rate ordering", ramp_rate_ordering},
      {"initial correlations", initial_correlations},
      {"final correlation structure", final_correlations},
      {"Bell fidelity at tau", fidelity_at_tau},
      {"cooling N-independence", cooling_n_independence},
      {"cooling milestones", cooling_milestones},
      {"cooling sweep ordering", cooling_sweep_ordering},
      {"property suite", property_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%zu] %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
