#pragma once

// Closed-form output model after adiabatic elimination of the mechanical mode:
// transfer functions, standard-form covariance and entanglement metrics.

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "optoepr/covariance.hpp"
#include "optoepr/steady_state.hpp"

namespace optoepr {

struct TransferPoint {
  double omega = 0.0;
  std::complex<double> G;
  std::complex<double> H;
  std::complex<double> I;
  std::complex<double> Delta_of_omega;
};

struct EntMetrics {
  double epr_variance = 1.0;
  double S_db = 0.0;
  double eof = 0.0;
  bool entangled = false;
  double log_negativity = 0.0;
};

/// G, H, I and Delta(omega) of the eliminated two-mode model.
/// Throws DegenerateResponse if |Delta(omega)| < 1e-30 (gamma^2 + omega^2).
TransferPoint transfer_functions(const DerivedParams& derived, double omega);

/// Closed-form n, V14, V24 and k_x. The returned matrix is the unrotated
/// correlation matrix (diagonal blocks n I, cross block [[-V24, V14], [V14, V24]]),
/// whose standard form is (n, k_x, -k_x).
std::pair<Covariance4, StandardForm> closed_form_covariance(const TransferPoint& tp, double n_m,
                                                            const DerivedParams& derived);

/// Entanglement of formation of a symmetric Gaussian state with EPR variance x.
/// Zero for x >= 1; throws DomainError for x <= 0.
double eof(double x);

/// -10 log10(x); negative values mean anti-squeezing. Throws DomainError for x <= 0.
double squeezing_db(double x);

/// Metrics for a symmetric standard form (log negativity = max(0, -log2(n - k_x))).
EntMetrics metrics_from_standard_form(const StandardForm& sf);

struct OptimumDetuning {
  double d_o = 0.0;
  double S_o = 0.0;
  double eof_o = 0.0;
  bool unbounded = false;  // d_o = 0: squeezing diverges
};

/// d_o = sqrt(g^2 + gamma^2/4) - g, the detuning that cancels V14 at omega = 0.
OptimumDetuning optimum_d(const DerivedParams& derived);

struct SpectrumPoint {
  double omega = 0.0;
  StandardForm form;
  EntMetrics metrics;
  std::vector<std::string> flags;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

/// Per-frequency closed-form evaluation. Failures are recorded in the row.
std::vector<SpectrumPoint> spectrum(const DerivedParams& derived, std::span<const double> omega_grid);

/// Copy of `derived` with d (and g' = g + d) replaced.
DerivedParams with_detuning(const DerivedParams& derived, double d);

}  // namespace optoepr
