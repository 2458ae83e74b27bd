#pragma once

#include <complex>
#include <string>
#include <vector>

#include "optoepr/model.hpp"

namespace optoepr {

/// Linearized-model parameters obtained from the c-number steady state.
struct DerivedParams {
  std::complex<double> alpha_1;
  std::complex<double> alpha_2;
  double alpha = 0.0;  // common amplitude, sqrt((|alpha_1|^2 + |alpha_2|^2) / 2)
  double N = 0.0;      // |alpha_1|^2 + |alpha_2|^2
  double beta = 0.0;
  double beta_imag_dropped = 0.0;
  double Delta_1 = 0.0;  // bare laser detunings
  double Delta_2 = 0.0;
  double Delta_1p = 0.0;  // shifted detunings
  double Delta_2p = 0.0;
  double delta = 0.0;
  double d = 0.0;
  double g = 0.0;
  double g_prime = 0.0;
  double gamma_m_tilde = 0.0;
  double n_m = 0.0;
  double gamma = 0.0;
  double gamma_m = 0.0;
  double omega_m = 0.0;
  double eta = 0.0;
  double Omega_1 = 0.0;
  double Omega_2 = 0.0;
  bool multistable = false;
  int root_count = 0;
  std::vector<std::string> warnings;
};

/// Roots of the scalar self-consistency equation for the total intracavity
/// photon number N = |alpha_1|^2 + |alpha_2|^2, ascending.
struct DisplacementSolution {
  std::vector<double> roots;
  double N = 0.0;  // selected (smallest) root
  std::complex<double> alpha_1;
  std::complex<double> alpha_2;
};

/// Solves N = sum_j (Omega_j^2/4) / ((Delta_j + 2 eta^2 omega_m N)^2 + gamma^2/4)
/// on [0, sum Omega_j^2 / gamma^2] by scanning for sign changes and bisecting.
DisplacementSolution solve_displacement(double Omega_1, double Omega_2, double Delta_1,
                                        double Delta_2, double kerr, double gamma);

/// Full steady state. Throws NoSteadyState or SignConventionViolated.
DerivedParams solve_steady_state(const PhysicalParams& params);

/// |alpha_1|/|alpha_2| mismatch allowed by the adiabatic model.
inline constexpr double kAlphaBalanceTol = 1e-6;

/// Throws ConstraintViolated unless |alpha_1| and |alpha_2| agree to kAlphaBalanceTol.
void require_balanced(const DerivedParams& derived);

enum class NormalMode { One, Two };

/// Drive amplitude that makes |alpha_j| equal `target_alpha` with the bare
/// detuning of mode j set to Delta_j and the other drive unchanged.
double amplitude_to_drive(double target_alpha, double Delta_j, const PhysicalParams& params,
                          NormalMode mode = NormalMode::One);

/// Operating point in terms of the linearized parameters.
struct OperatingPoint {
  double alpha = 0.0;
  double delta = 0.0;
  double d = 0.0;

  bool operator==(const OperatingPoint&) const = default;
};

/// Lasers and drive amplitudes (closed form) that put the cavity at `op` with
/// alpha_1 = alpha_2 = op.alpha. Other fields of `base` are kept.
PhysicalParams params_for_operating_point(const PhysicalParams& base, const OperatingPoint& op);

/// Operating point recovered from a solved steady state.
OperatingPoint operating_point(const DerivedParams& derived);

/// Device constants used throughout: omega_p = 2pi 300 THz, omega_m = 2pi 73.5 MHz,
/// gamma = 2pi 3.2 MHz, Q = 30000, R = 38 um, eta = 1e-4, T = 300 K,
/// |alpha| = 1000, delta = 2pi 10 MHz, d = 0.07 gamma.
PhysicalParams reference_device_params();

}  // namespace optoepr
