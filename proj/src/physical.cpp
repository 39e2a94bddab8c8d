#include "ionramp/physical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ionramp::physical {

void validate(const TrapParams& trap) {
  if (!(trap.omega_x_mhz > 0) || !(trap.omega_axial_khz > 0) || !(trap.rf_mhz > 0)) {
    throw std::invalid_argument("trap frequencies must be positive");
  }
  if (!(trap.spacing_um > 0)) throw std::invalid_argument("inter-ion spacing must be positive");
}

void validate(const LaserParams& laser) {
  if (!(laser.eta_x > 0)) throw std::invalid_argument("Lamb-Dicke parameter must be positive");
  if (laser.delta != 0 && laser.delta != 1) throw std::invalid_argument("standing-wave parity must be 0 or 1");
}

double onsite_interaction(const LaserParams& laser) {
  validate(laser);
  const double sign = laser.delta == 0 ? 1.0 : -1.0;
  return 2.0 * sign * laser.force_khz * std::pow(laser.eta_x, 4);
}

double beta_x(double hopping, double omega_x) {
  if (!(omega_x > 0)) throw std::invalid_argument("beta_x: omega_x must be positive");
  return 2.0 * hopping / omega_x;
}

double dimensionless_time_to_seconds(double t_dimensionless, double u_khz) {
  if (!(u_khz > 0)) throw std::invalid_argument("interaction frequency must be positive");
  return t_dimensionless / (2.0 * std::numbers::pi * u_khz * 1e3);
}

double seconds_to_dimensionless(double seconds, double u_khz) {
  if (!(u_khz > 0)) throw std::invalid_argument("interaction frequency must be positive");
  return seconds * 2.0 * std::numbers::pi * u_khz * 1e3;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Warn: return "warn";
    case Verdict::StrongWarn: return "warn-strong";
  }
  return "unknown";
}

HeatingCheck heating_feasibility(double tau_seconds, double heating_rate_hz, double margin) {
  if (!(tau_seconds > 0)) throw std::invalid_argument("ramp duration must be positive");
  if (!(heating_rate_hz > 0)) throw std::invalid_argument("heating rate must be positive");
  HeatingCheck check;
  check.ramp_rate_hz = 1.0 / tau_seconds;
  check.ratio = check.ramp_rate_hz / heating_rate_hz;
  if (check.ratio >= margin) {
    check.verdict = Verdict::Pass;
  } else if (check.ratio >= 1.0) {
    check.verdict = Verdict::Warn;
  } else {
    check.verdict = Verdict::StrongWarn;
  }
  return check;
}

}  // namespace ionramp::physical
