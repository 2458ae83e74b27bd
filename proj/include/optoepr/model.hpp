#pragma once

// Laboratory parameters, unit conventions and elementary conversions for the
// two-mode optomechanical cavity. All frequencies and rates are angular (rad/s).

#include <numbers>
#include <utility>

namespace optoepr {

struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double k_B = 1.380649e-23;      // J/K
  static constexpr double c = 2.99792458e8;        // m/s
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double hz_to_rads(double hz) { return kTwoPi * hz; }
constexpr double rads_to_hz(double rads) { return rads / kTwoPi; }

enum class DriveMode { Amplitudes, Powers };

/// Drive lasers. Omega_1/Omega_2 are the normal-mode drive amplitudes; P_1/P_2
/// the corresponding input powers. `mode` selects which pair is authoritative.
struct DriveSpec {
  DriveMode mode = DriveMode::Amplitudes;
  double Omega_1 = 0.0;
  double Omega_2 = 0.0;
  double P_1 = 0.0;
  double P_2 = 0.0;
  double omega_L = 0.0;   // drives normal mode 1
  double omega_Lp = 0.0;  // drives normal mode 2

  bool operator==(const DriveSpec&) const = default;
};

struct PhysicalParams {
  double omega_p = 0.0;  // optical resonance
  double omega_m = 0.0;  // mechanical frequency
  double gamma = 0.0;    // cavity decay into the output modes
  double gamma_m = 0.0;  // mechanical damping
  double nu = 0.0;       // a-b mode coupling
  double eta = 0.0;      // dimensionless optomechanical coupling
  double T = 0.0;        // bath temperature (K)
  double R = 0.0;        // cavity radius (m)
  double n0 = 1.45;      // refractive index
  DriveSpec drive;

  bool operator==(const PhysicalParams&) const = default;
};

/// Throws DomainError when a field violates its invariant. eta = 0 is accepted
/// (uncoupled cavity) so the linear-cavity limit stays reachable.
void validate(const PhysicalParams& params);

/// Bose-Einstein occupancy; exactly 0 at T = 0.
double thermal_occupancy(double omega_m, double T);

/// Omega = 2 sqrt(P gamma / (hbar omega_L)).
double power_to_amplitude(double P, double omega_L, double gamma);
double amplitude_to_power(double Omega, double omega_L, double gamma);

/// Normal-mode drives (Omega_a + Omega_b, Omega_a' - Omega_b'). Throws
/// ConstraintViolated unless Omega_a = Omega_b and Omega_a' = -Omega_b' to 1e-9.
std::pair<double, double> normal_mode_drives(double Omega_a, double Omega_b, double Omega_ap,
                                             double Omega_bp);

/// Signed detunings (omega_L - omega_p - nu, omega_Lp - omega_p + nu).
std::pair<double, double> detunings(double omega_L, double omega_Lp, double omega_p, double nu);

/// eta = (omega_p/omega_m) sqrt(hbar/(m omega_m)) / R.
double eta_from_geometry(double omega_p, double omega_m, double mass, double R);

/// Drive amplitudes resolved from whichever representation is authoritative.
std::pair<double, double> drive_amplitudes(const PhysicalParams& params);

}  // namespace optoepr
