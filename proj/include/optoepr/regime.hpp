#pragma once

#include <string>
#include <vector>

#include "optoepr/model.hpp"
#include "optoepr/steady_state.hpp"

namespace optoepr {

struct RegimeCheck {
  std::string name;
  double ratio = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct RegimeReport {
  std::vector<RegimeCheck> checks;
  bool overall_pass = false;
};

/// Minimum ratios that stand in for "much greater than".
struct RegimeThresholds {
  double rotating_wave = 5.0;   // omega_m / max(delta, |d|, gamma, gamma_m)
  double elimination = 5.0;     // delta / max(omega_max, gamma_m)
  double mode_spacing = 5.0;    // (c / (R n0)) / max Omega_j
  double linearization = 5.0;   // min |Delta_j| / (2 eta^2 omega_m N)
};

RegimeReport validate_regime(const PhysicalParams& params, const DerivedParams& derived,
                             double omega_max, const RegimeThresholds& thresholds = {});

}  // namespace optoepr
