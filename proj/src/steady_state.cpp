#include "optoepr/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "optoepr/errors.hpp"

namespace optoepr {

namespace {

constexpr int kScanPoints = 1024;

struct Balance {
  double Omega_1, Omega_2, Delta_1, Delta_2, kerr, gamma;

  double lorentz(double Omega, double Delta, double N) const {
    const double shifted = Delta + kerr * N;
    return 0.25 * Omega * Omega / (shifted * shifted + 0.25 * gamma * gamma);
  }
  // Positive below the root, negative above it for the lowest branch.
  double residual(double N) const {
    return lorentz(Omega_1, Delta_1, N) + lorentz(Omega_2, Delta_2, N) - N;
  }
};

double bisect(const Balance& f, double lo, double hi) {
  double flo = f.residual(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 1e-14 * std::max(std::abs(lo), std::abs(hi))) break;
    const double fmid = f.residual(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scan grid: uniform over the bracket plus geometric refinement around each
// cavity resonance, where the residual varies on the scale gamma/kerr.
std::vector<double> scan_grid(const Balance& f, double N_max) {
  std::vector<double> grid;
  grid.reserve(kScanPoints + 400);
  for (int i = 0; i <= kScanPoints; ++i) grid.push_back(N_max * i / kScanPoints);
  if (f.kerr > 0.0) {
    const double width = 0.5 * f.gamma / f.kerr;
    for (double Delta : {f.Delta_1, f.Delta_2}) {
      const double center = -Delta / f.kerr;
      if (center <= 0.0 || center >= N_max) continue;
      grid.push_back(center);
      for (double off = width / 64.0; off < N_max; off *= 1.25) {
        if (center - off > 0.0) grid.push_back(center - off);
        if (center + off < N_max) grid.push_back(center + off);
      }
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::complex<double> cavity_amplitude(double Omega, double shifted, double gamma) {
  return 0.5 * Omega / std::complex<double>(shifted, 0.5 * gamma);
}

}  // namespace

DisplacementSolution solve_displacement(double Omega_1, double Omega_2, double Delta_1,
                                        double Delta_2, double kerr, double gamma) {
  const Balance f{Omega_1, Omega_2, Delta_1, Delta_2, kerr, gamma};
  const double N_max = (Omega_1 * Omega_1 + Omega_2 * Omega_2) / (gamma * gamma);
  if (!std::isfinite(N_max)) throw NoSteadyState("non-finite drive bracket");

  DisplacementSolution sol;
  if (N_max == 0.0) {
    sol.roots = {0.0};
  } else if (kerr == 0.0) {
    sol.roots = {f.residual(0.0)};  // linear cavity: N = sum of the Lorentzians at N = 0
  } else {
    const auto grid = scan_grid(f, N_max);
    double prev_N = grid.front();
    double prev_f = f.residual(prev_N);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double N = grid[i];
      const double fN = f.residual(N);
      if (fN == 0.0) {
        sol.roots.push_back(N);
      } else if (prev_f != 0.0 && (fN > 0.0) != (prev_f > 0.0)) {
        sol.roots.push_back(bisect(f, prev_N, N));
      }
      prev_N = N;
      prev_f = fN;
    }
  }
  if (sol.roots.empty()) {
    throw NoSteadyState(fmt::format("no root of the photon-number balance in [0, {:.6g}]", N_max));
  }

  double N = sol.roots.front();
  // Newton polish on the smallest root.
  if (kerr != 0.0 && N > 0.0) {
    const double h = 1e-7 * N;
    const double slope = (f.residual(N + h) - f.residual(N - h)) / (2.0 * h);
    if (slope != 0.0 && std::isfinite(slope)) {
      const double refined = N - f.residual(N) / slope;
      if (refined > 0.0 && std::abs(f.residual(refined)) <= std::abs(f.residual(N))) N = refined;
    }
  }
  sol.roots.front() = N;
  sol.N = N;
  sol.alpha_1 = cavity_amplitude(Omega_1, Delta_1 + kerr * N, gamma);
  sol.alpha_2 = cavity_amplitude(Omega_2, Delta_2 + kerr * N, gamma);
  return sol;
}

DerivedParams solve_steady_state(const PhysicalParams& params) {
  validate(params);
  const auto [Omega_1, Omega_2] = drive_amplitudes(params);
  const auto [Delta_1, Delta_2] =
      detunings(params.drive.omega_L, params.drive.omega_Lp, params.omega_p, params.nu);
  const double kerr = 2.0 * params.eta * params.eta * params.omega_m;

  const auto sol = solve_displacement(Omega_1, Omega_2, Delta_1, Delta_2, kerr, params.gamma);

  DerivedParams out;
  out.alpha_1 = sol.alpha_1;
  out.alpha_2 = sol.alpha_2;
  out.N = std::norm(sol.alpha_1) + std::norm(sol.alpha_2);
  out.alpha = std::sqrt(0.5 * out.N);
  out.Omega_1 = Omega_1;
  out.Omega_2 = Omega_2;
  out.multistable = sol.roots.size() > 1;
  out.root_count = static_cast<int>(sol.roots.size());

  // beta = -i eta omega_m N / (i omega_m + gamma_m/2); the imaginary part is dropped.
  const std::complex<double> beta_full =
      -std::complex<double>(0.0, params.eta * params.omega_m * out.N) /
      std::complex<double>(0.5 * params.gamma_m, params.omega_m);
  out.beta = -params.eta * out.N;
  out.beta_imag_dropped = std::abs(beta_full.imag());

  out.Delta_1 = Delta_1;
  out.Delta_2 = Delta_2;
  out.Delta_1p = Delta_1 + kerr * out.N;
  out.Delta_2p = Delta_2 + kerr * out.N;
  out.delta = 0.5 * (out.Delta_2p - out.Delta_1p) - params.omega_m;
  out.d = -0.5 * (out.Delta_1p + out.Delta_2p);

  out.gamma = params.gamma;
  out.gamma_m = params.gamma_m;
  out.omega_m = params.omega_m;
  out.eta = params.eta;
  out.n_m = thermal_occupancy(params.omega_m, params.T);

  if (!(out.Delta_1p < 0.0) || !(out.Delta_2p > 0.0) || !(out.delta > 0.0)) {
    throw SignConventionViolated(fmt::format(
        "operating point requires Delta_1' < 0, Delta_2' > 0, delta > 0 "
        "(got {:.6g}, {:.6g}, {:.6g} rad/s)",
        out.Delta_1p, out.Delta_2p, out.delta));
  }

  const double coupling = params.eta * out.alpha * params.omega_m;
  out.g = coupling * coupling / out.delta;
  out.g_prime = out.g + out.d;
  out.gamma_m_tilde = (coupling / out.delta) * (coupling / out.delta) * params.gamma_m;

  const double a1 = std::abs(out.alpha_1);
  const double a2 = std::abs(out.alpha_2);
  if (std::abs(a1 - a2) > kAlphaBalanceTol * std::max(a1, a2)) {
    out.warnings.push_back(
        fmt::format("cavity amplitudes differ: |alpha_1|={:.9g}, |alpha_2|={:.9g}", a1, a2));
  }
  if (out.multistable) {
    out.warnings.push_back(fmt::format(
        "photon-number balance has {} roots; using the lowest branch", out.root_count));
  }
  return out;
}

void require_balanced(const DerivedParams& derived) {
  const double a1 = std::abs(derived.alpha_1);
  const double a2 = std::abs(derived.alpha_2);
  if (std::abs(a1 - a2) > kAlphaBalanceTol * std::max(a1, a2)) {
    throw ConstraintViolated(fmt::format(
        "adiabatic model needs |alpha_1| = |alpha_2| (got {:.9g}, {:.9g})", a1, a2));
  }
}

double amplitude_to_drive(double target_alpha, double Delta_j, const PhysicalParams& params,
                          NormalMode mode) {
  if (!(target_alpha > 0.0)) throw DomainError("target amplitude must be positive");
  const double gamma = params.gamma;
  double Omega = target_alpha * std::sqrt(gamma * gamma + 4.0 * Delta_j * Delta_j);
  const double kerr = 2.0 * params.eta * params.eta * params.omega_m;
  if (kerr == 0.0) return Omega;

  auto [Omega_1, Omega_2] = drive_amplitudes(params);
  auto [Delta_1, Delta_2] =
      detunings(params.drive.omega_L, params.drive.omega_Lp, params.omega_p, params.nu);
  const bool first = mode == NormalMode::One;
  (first ? Delta_1 : Delta_2) = Delta_j;

  for (int it = 0; it < 200; ++it) {
    (first ? Omega_1 : Omega_2) = Omega;
    const auto sol = solve_displacement(Omega_1, Omega_2, Delta_1, Delta_2, kerr, gamma);
    const double reached = std::abs(first ? sol.alpha_1 : sol.alpha_2);
    if (std::abs(reached - target_alpha) <= 1e-10 * target_alpha) return Omega;
    const double shifted = Delta_j + kerr * sol.N;
    Omega = target_alpha * std::sqrt(gamma * gamma + 4.0 * shifted * shifted);
  }
  throw NoSteadyState("drive refinement did not converge");
}

PhysicalParams params_for_operating_point(const PhysicalParams& base, const OperatingPoint& op) {
  PhysicalParams p = base;
  const double kerr = 2.0 * p.eta * p.eta * p.omega_m;
  const double N = 2.0 * op.alpha * op.alpha;
  const double Delta_1p = -(p.omega_m + op.delta) - op.d;
  const double Delta_2p = (p.omega_m + op.delta) - op.d;
  const double Delta_1 = Delta_1p - kerr * N;
  const double Delta_2 = Delta_2p - kerr * N;
  p.drive.omega_L = p.omega_p + p.nu + Delta_1;
  p.drive.omega_Lp = p.omega_p - p.nu + Delta_2;
  p.drive.Omega_1 = op.alpha * std::sqrt(4.0 * Delta_1p * Delta_1p + p.gamma * p.gamma);
  p.drive.Omega_2 = op.alpha * std::sqrt(4.0 * Delta_2p * Delta_2p + p.gamma * p.gamma);
  p.drive.P_1 = amplitude_to_power(p.drive.Omega_1, p.drive.omega_L, p.gamma);
  p.drive.P_2 = amplitude_to_power(p.drive.Omega_2, p.drive.omega_Lp, p.gamma);
  return p;
}

OperatingPoint operating_point(const DerivedParams& derived) {
  return {derived.alpha, derived.delta, derived.d};
}

PhysicalParams reference_device_params() {
  PhysicalParams p;
  p.omega_p = hz_to_rads(300e12);
  p.omega_m = hz_to_rads(73.5e6);
  p.gamma = hz_to_rads(3.2e6);
  p.gamma_m = p.omega_m / 30000.0;
  p.nu = hz_to_rads(100e6);
  p.eta = 1e-4;
  p.T = 300.0;
  p.R = 38e-6;
  p.n0 = 1.45;
  p.drive.mode = DriveMode::Amplitudes;
  return params_for_operating_point(p, {1000.0, hz_to_rads(10e6), 0.07 * p.gamma});
}

}  // namespace optoepr
