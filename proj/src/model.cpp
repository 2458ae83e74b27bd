#include "optoepr/model.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "optoepr/errors.hpp"

namespace optoepr {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void validate(const PhysicalParams& p) {
  require(p.omega_p > 0.0, "omega_p must be positive");
  require(p.omega_m > 0.0, "omega_m must be positive");
  require(p.gamma > 0.0, "gamma must be positive");
  require(p.gamma_m > 0.0, "gamma_m must be positive");
  require(p.gamma_m < p.omega_m, "gamma_m must be below omega_m");
  require(p.nu > 0.0, "nu must be positive");
  require(p.eta >= 0.0 && p.eta < 1.0, "eta must lie in [0, 1)");
  require(p.T >= 0.0, "temperature must be non-negative");
  require(p.R > 0.0, "R must be positive");
  require(p.n0 > 0.0, "n0 must be positive");
  const auto& d = p.drive;
  require(d.omega_L > 0.0 && d.omega_Lp > 0.0, "laser frequencies must be positive");
  if (std::abs(d.omega_L - p.omega_p) >= 10.0 * p.omega_m ||
      std::abs(d.omega_Lp - p.omega_p) >= 10.0 * p.omega_m) {
    throw DomainError(fmt::format(
        "laser frequencies must lie within 10 omega_m of omega_p (offsets {:.6g}, {:.6g} rad/s)",
        d.omega_L - p.omega_p, d.omega_Lp - p.omega_p));
  }
  if (d.mode == DriveMode::Amplitudes) {
    require(d.Omega_1 >= 0.0 && d.Omega_2 >= 0.0, "drive amplitudes must be non-negative");
  } else {
    require(d.P_1 >= 0.0 && d.P_2 >= 0.0, "drive powers must be non-negative");
  }
}

double thermal_occupancy(double omega_m, double T) {
  if (T <= 0.0) return 0.0;
  const double x = PhysicalConstants::hbar * omega_m / (PhysicalConstants::k_B * T);
  return 1.0 / std::expm1(x);
}

double power_to_amplitude(double P, double omega_L, double gamma) {
  return 2.0 * std::sqrt(P * gamma / (PhysicalConstants::hbar * omega_L));
}

double amplitude_to_power(double Omega, double omega_L, double gamma) {
  return Omega * Omega * PhysicalConstants::hbar * omega_L / (4.0 * gamma);
}

std::pair<double, double> normal_mode_drives(double Omega_a, double Omega_b, double Omega_ap,
                                             double Omega_bp) {
  constexpr double tol = 1e-9;
  if (std::abs(Omega_a - Omega_b) > tol * std::abs(Omega_a + Omega_b)) {
    throw ConstraintViolated(
        fmt::format("unbalanced drives: Omega_a={} differs from Omega_b={}", Omega_a, Omega_b));
  }
  if (std::abs(Omega_ap + Omega_bp) > tol * std::abs(Omega_ap - Omega_bp)) {
    throw ConstraintViolated(
        fmt::format("unbalanced drives: Omega_a'={} is not -Omega_b'={}", Omega_ap, -Omega_bp));
  }
  return {Omega_a + Omega_b, Omega_ap - Omega_bp};
}

std::pair<double, double> detunings(double omega_L, double omega_Lp, double omega_p, double nu) {
  return {omega_L - omega_p - nu, omega_Lp - omega_p + nu};
}

double eta_from_geometry(double omega_p, double omega_m, double mass, double R) {
  const double x_zpf = std::sqrt(PhysicalConstants::hbar / (mass * omega_m));
  return (omega_p / omega_m) * x_zpf / R;
}

std::pair<double, double> drive_amplitudes(const PhysicalParams& p) {
  const auto& d = p.drive;
  if (d.mode == DriveMode::Amplitudes) return {d.Omega_1, d.Omega_2};
  return {power_to_amplitude(d.P_1, d.omega_L, p.gamma),
          power_to_amplitude(d.P_2, d.omega_Lp, p.gamma)};
}

}  // namespace optoepr
