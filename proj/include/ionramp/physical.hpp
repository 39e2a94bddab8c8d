#ifndef IONRAMP_PHYSICAL_HPP
#define IONRAMP_PHYSICAL_HPP

#include <string>
#include <vector>

namespace ionramp::physical {

// Frequencies quoted in kHz or MHz are ordinary frequencies nu; the
// corresponding energy over hbar is 2 pi nu. Under that convention a ramp of
// tau |U1| / hbar = 500 at |U1| = 1.1 kHz lasts 500 / (2 pi 1100 Hz) = 72 ms.

struct TrapParams {
  double omega_x_mhz = 2.25;      // transverse secular frequency
  double omega_axial_khz = 180.0;
  double spacing_um = 20.0;
  double q = 0.42;                // informational
  double rf_mhz = 15.0;           // informational
};

struct LaserParams {
  double force_khz = 0;  // dipole strength F
  double eta_x = 0;      // Lamb-Dicke parameter
  int delta = 0;         // standing-wave phase parity at the ion, 0 or 1
};

void validate(const TrapParams& trap);
void validate(const LaserParams& laser);

/// U = 2 (-1)^delta F eta_x^4, in the units of F.
double onsite_interaction(const LaserParams& laser);

/// beta_x = 2 J / omega_x (both in the same frequency unit).
double beta_x(double hopping, double omega_x);

inline constexpr double kPerturbativeBetaLimit = 0.01;

/// Laboratory duration of a dimensionless time t |U| / hbar.
double dimensionless_time_to_seconds(double t_dimensionless, double u_khz);
double seconds_to_dimensionless(double seconds, double u_khz);

enum class Verdict { Pass, Warn, StrongWarn };

std::string to_string(Verdict v);

struct HeatingCheck {
  double ramp_rate_hz = 0;  // 1 / tau
  double ratio = 0;         // ramp rate over heating rate
  Verdict verdict = Verdict::Pass;
};

/// Ramp rate against the motional heating rate. Pass when the ratio reaches
/// `margin`; Warn when it is between 1 and `margin`; StrongWarn below 1.
HeatingCheck heating_feasibility(double tau_seconds, double heating_rate_hz = 3.0, double margin = 10.0);

}  // namespace ionramp::physical

#endif  // IONRAMP_PHYSICAL_HPP
