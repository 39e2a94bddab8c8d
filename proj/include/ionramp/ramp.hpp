#ifndef IONRAMP_RAMP_HPP
#define IONRAMP_RAMP_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ionramp {

// Linear ramp U_i(t) = U0 + (U1 - U0) min(t, tau) / tau on the ramped sites,
// U0 everywhere else. Sites are numbered from 0. After tau the schedule is
// clamped at its final value and the state evolves under H(tau) for `hold`.
struct RampProtocol {
  int sites = 0;
  std::vector<int> ramped_sites;
  double u_initial = 0;
  double u_final = 0;
  double duration = 0;
  double hold = 0;

  double total_time() const { return duration + hold; }
};

// Validates and sorts the ramped sites; throws std::invalid_argument on
// out-of-range or duplicate sites, non-positive duration or negative hold.
RampProtocol make_protocol(int sites, std::vector<int> ramped_sites, double u_initial, double u_final,
                           double duration, double hold);

double u_at(const RampProtocol& protocol, double t, int site);

Eigen::VectorXd interaction_at(const RampProtocol& protocol, double t);

Eigen::VectorXd final_interaction(const RampProtocol& protocol);

// g(t) = (U0 - U1)(1 - min(t, tau)/tau): the weight of sum_{ramped} n(n-1) in H(t) - H(tau).
double residual_weight(const RampProtocol& protocol, double t);

// Integral of g from 0 to t.
double residual_weight_integral(const RampProtocol& protocol, double t);

/// Two ramped sites; hold defaults to the ramp duration.
RampProtocol bell_protocol(int sites, std::span<const int> pair, double u_initial, double u_final,
                           double duration, std::optional<double> hold = {});

/// Three ramped sites; hold defaults to the ramp duration.
RampProtocol w_protocol(int sites, std::span<const int> triple, double u_initial, double u_final,
                        double duration, std::optional<double> hold = {});

/// One ramped site; the cooling metric is read at the end of the ramp, so hold defaults to 0.
RampProtocol cooling_protocol(int sites, int site, double u_initial, double u_final, double duration,
                              double hold = 0);

}  // namespace ionramp

#endif  // IONRAMP_RAMP_HPP
