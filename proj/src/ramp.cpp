#include "ionramp/ramp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ionramp {

RampProtocol make_protocol(int sites, std::vector<int> ramped_sites, double u_initial, double u_final,
                           double duration, double hold) {
  if (sites < 1) throw std::invalid_argument("protocol needs at least one site");
  if (!(duration > 0) || !std::isfinite(duration)) {
    throw std::invalid_argument("ramp duration must be positive and finite");
  }
  if (!(hold >= 0) || !std::isfinite(hold)) throw std::invalid_argument("hold duration must be >= 0");
  for (int s : ramped_sites) {
    if (s < 0 || s >= sites) {
      throw std::invalid_argument("ramped site " + std::to_string(s) + " outside chain of " +
                                  std::to_string(sites));
    }
  }
  std::sort(ramped_sites.begin(), ramped_sites.end());
  if (std::adjacent_find(ramped_sites.begin(), ramped_sites.end()) != ramped_sites.end()) {
    throw std::invalid_argument("ramped sites must be distinct");
  }
  return {sites, std::move(ramped_sites), u_initial, u_final, duration, hold};
}

namespace {

bool is_ramped(const RampProtocol& p, int site) {
  return std::binary_search(p.ramped_sites.begin(), p.ramped_sites.end(), site);
}

double ramp_fraction(const RampProtocol& p, double t) {
  if (t < 0) throw std::invalid_argument("ramp schedule evaluated at negative time");
  return std::min(t, p.duration) / p.duration;
}

}  // namespace

double u_at(const RampProtocol& protocol, double t, int site) {
  if (site < 0 || site >= protocol.sites) {
    throw std::out_of_range("u_at: site " + std::to_string(site) + " out of range");
  }
  const double f = ramp_fraction(protocol, t);
  if (!is_ramped(protocol, site)) return protocol.u_initial;
  if (f == 1.0) return protocol.u_final;
  return protocol.u_initial + (protocol.u_final - protocol.u_initial) * f;
}

Eigen::VectorXd interaction_at(const RampProtocol& protocol, double t) {
  Eigen::VectorXd u(protocol.sites);
  for (int i = 0; i < protocol.sites; ++i) u(i) = u_at(protocol, t, i);
  return u;
}

Eigen::VectorXd final_interaction(const RampProtocol& protocol) {
  return interaction_at(protocol, protocol.duration);
}

double residual_weight(const RampProtocol& protocol, double t) {
  return (protocol.u_initial - protocol.u_final) * (1.0 - ramp_fraction(protocol, t));
}

double residual_weight_integral(const RampProtocol& protocol, double t) {
  const double s = std::min(t, protocol.duration);
  return (protocol.u_initial - protocol.u_final) * (s - s * s / (2.0 * protocol.duration));
}

namespace {

RampProtocol with_site_count(int sites, std::span<const int> chosen, std::size_t expected, const char* name,
                             double u_initial, double u_final, double duration, double hold) {
  if (chosen.size() != expected) {
    throw std::invalid_argument(std::string(name) + " protocol needs exactly " + std::to_string(expected) +
                                " sites, got " + std::to_string(chosen.size()));
  }
  return make_protocol(sites, {chosen.begin(), chosen.end()}, u_initial, u_final, duration, hold);
}

}  // namespace

RampProtocol bell_protocol(int sites, std::span<const int> pair, double u_initial, double u_final,
                           double duration, std::optional<double> hold) {
  return with_site_count(sites, pair, 2, "Bell", u_initial, u_final, duration, hold.value_or(duration));
}

RampProtocol w_protocol(int sites, std::span<const int> triple, double u_initial, double u_final,
                        double duration, std::optional<double> hold) {
  return with_site_count(sites, triple, 3, "W", u_initial, u_final, duration, hold.value_or(duration));
}

RampProtocol cooling_protocol(int sites, int site, double u_initial, double u_final, double duration,
                              double hold) {
  return make_protocol(sites, {site}, u_initial, u_final, duration, hold);
}

}  // namespace ionramp
