#include "optoepr/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace optoepr {

namespace {

double safe_ratio(double num, double den) {
  if (den <= 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

RegimeReport validate_regime(const PhysicalParams& params, const DerivedParams& derived,
                             double omega_max, const RegimeThresholds& thresholds) {
  RegimeReport report;
  auto add = [&](std::string name, double ratio, double threshold) {
    report.checks.push_back({std::move(name), ratio, threshold, ratio >= threshold});
  };

  add("rotating_wave",
      safe_ratio(derived.omega_m,
                 std::max({derived.delta, std::abs(derived.d), derived.gamma, derived.gamma_m})),
      thresholds.rotating_wave);
  add("adiabatic_elimination",
      safe_ratio(derived.delta, std::max(std::abs(omega_max), derived.gamma_m)),
      thresholds.elimination);

  const double fsr = PhysicalConstants::c / (params.R * params.n0);
  add("mode_spacing", safe_ratio(fsr, std::max(derived.Omega_1, derived.Omega_2)),
      thresholds.mode_spacing);

  const double kerr_shift = 2.0 * derived.eta * derived.eta * derived.omega_m * derived.N;
  add("linearization",
      safe_ratio(std::min(std::abs(derived.Delta_1), std::abs(derived.Delta_2)), kerr_shift),
      thresholds.linearization);

  report.overall_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                    [](const RegimeCheck& c) { return c.pass; });
  return report;
}

}  // namespace optoepr
