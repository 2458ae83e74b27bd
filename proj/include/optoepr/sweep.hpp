#pragma once

// One-dimensional parameter sweeps, peak statistics and robustness checks of
// the EOF spectrum.

#include <optional>
#include <string>
#include <vector>

#include "optoepr/langevin.hpp"

namespace optoepr {

enum class SweepAxis { Temperature, Alpha, D, Q, PowerFluct, DFluct };

std::string to_string(SweepAxis axis);
/// Accepts the long names and the CLI short forms T, alpha, d, Q.
SweepAxis axis_from_string(const std::string& name);

/// Uniform grid of `points` values over [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// 2001 points over [-2 gamma, 2 gamma].
std::vector<double> default_omega_grid(double gamma);

/// Axis values: temperature in K, alpha dimensionless, d in rad/s, Q
/// dimensionless, power_fluct a fractional power change, d_fluct an offset in
/// rad/s added to the base d.
struct SweepSpec {
  SweepAxis axis = SweepAxis::Temperature;
  std::vector<double> values;
  PhysicalParams base;
  std::vector<double> omega_grid;
  ModelKind model = ModelKind::Adiabatic;
};

struct PeakStats {
  double peak_eof = 0.0;
  double peak_omega = 0.0;           // parabolic vertex of the global maximum
  double peak_eof_refined = 0.0;     // parabolic vertex value
  std::vector<double> peak_omegas;   // local maxima within 1% of the peak
  double fwhm = 0.0;                 // NaN if a half-maximum crossing lies off the grid
};

/// Peak statistics of an EOF curve sampled on an ascending grid. Rows with a
/// non-finite EOF count as zero.
PeakStats peak_statistics(const std::vector<SpectrumPoint>& rows);

struct SweepRow {
  double value = 0.0;
  std::vector<SpectrumPoint> spectrum;
  PeakStats stats;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Temperature;
  ModelKind model = ModelKind::Adiabatic;
  std::vector<SweepRow> rows;
};

/// Parameters of `base` with the sweep axis set to `value`.
PhysicalParams apply_axis(const PhysicalParams& base, SweepAxis axis, double value);

/// `base` retargeted to d = d_o of its own steady state (alpha and delta kept).
PhysicalParams at_optimum_detuning(const PhysicalParams& base);

/// Throws DomainError on an invalid spec; row failures are recorded per row.
SweepResult run_sweep(const SweepSpec& spec);

struct SensitivityEntry {
  double d_offset = 0.0;
  double power_scale = 1.0;
  double d = 0.0;  // effective d after the power-induced shift
  double peak_eof = 0.0;
};

struct SensitivityReport {
  double d_o = 0.0;
  double nominal_peak_eof = 0.0;
  double worst_peak_eof = 0.0;
  double degradation = 0.0;  // (nominal - worst) / nominal
  std::vector<SensitivityEntry> entries;
};

/// Peak EOF (closed form) over d in {d_o - j, d_o, d_o + j} crossed with drive
/// power scaled by {1 - eps, 1, 1 + eps}. A power change shifts d by
/// -4 eta^2 omega_m Delta|alpha|^2 with delta held.
SensitivityReport sensitivity_analysis(const PhysicalParams& base, double d_jitter,
                                       double power_jitter_frac,
                                       std::optional<std::vector<double>> omega_grid = {});

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// True if `samples` rise (weakly) to a single maximum and then fall (weakly),
/// allowing `slack` of noise between neighbours.
bool is_unimodal(const std::vector<double>& samples, double slack);

/// Golden-section maximization of the closed-form peak EOF over d in `bracket`.
/// Throws BracketError if a 41-point pre-scan is not unimodal.
double find_optimum_d_numeric(const PhysicalParams& base, Bracket bracket,
                              std::optional<std::vector<double>> omega_grid = {});

}  // namespace optoepr
