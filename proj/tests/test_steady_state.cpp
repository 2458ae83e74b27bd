#include <doctest.h>

#include <cmath>
#include <complex>

#include "optoepr/errors.hpp"
#include "optoepr/steady_state.hpp"

using namespace optoepr;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

PhysicalParams linear_cavity() {
  PhysicalParams p = reference_device_params();
  p.eta = 0.0;
  return params_for_operating_point(p, {1000.0, hz_to_rads(10e6), 0.07 * p.gamma});
}

}  // namespace

TEST_CASE("linear cavity limit") {
  const PhysicalParams p = linear_cavity();
  const DerivedParams d = solve_steady_state(p);
  const auto [D1, D2] = detunings(p.drive.omega_L, p.drive.omega_Lp, p.omega_p, p.nu);
  CHECK(rel(std::abs(d.alpha_1), p.drive.Omega_1 / std::sqrt(4 * D1 * D1 + p.gamma * p.gamma)) < 1e-12);
  CHECK(rel(std::abs(d.alpha_2), p.drive.Omega_2 / std::sqrt(4 * D2 * D2 + p.gamma * p.gamma)) < 1e-12);
  CHECK_FALSE(d.multistable);
  CHECK(d.root_count == 1);
  CHECK(d.g == 0.0);

  SUBCASE("amplitude grows with drive") {
    double prev = 0.0;
    for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const auto sol = solve_displacement(s * p.drive.Omega_1, p.drive.Omega_2, D1, D2, 0.0, p.gamma);
      CHECK(std::abs(sol.alpha_1) > prev);
      prev = std::abs(sol.alpha_1);
    }
  }
}

TEST_CASE("reference device steady state") {
  const PhysicalParams p = reference_device_params();
  const DerivedParams d = solve_steady_state(p);
  CHECK(rel(d.g, 3.394e7) < 1e-3);
  CHECK(rel(d.gamma_m_tilde, 8.32e3) < 1e-3);
  CHECK(rel(d.n_m, 8.50e4) < 1e-3);
  CHECK(rel(d.alpha, 1000.0) < 1e-6);
  CHECK(rel(d.delta, hz_to_rads(10e6)) < 1e-6);
  CHECK(rel(d.d, 0.07 * p.gamma) < 1e-6);
  CHECK(d.Delta_1p < 0.0);
  CHECK(d.Delta_2p > 0.0);

  SUBCASE("derived-parameter identities") {
    CHECK(d.g_prime - d.g == d.d);
    const double r = d.eta * d.alpha * d.omega_m / d.delta;
    CHECK(rel(d.gamma_m_tilde / d.gamma_m, r * r) < 1e-14);
    CHECK(rel(d.g, d.eta * d.eta * d.alpha * d.alpha * d.omega_m * d.omega_m / d.delta) < 1e-14);
    CHECK(d.beta <= 0.0);
    CHECK(rel(d.beta, -d.eta * d.N) < 1e-10);
  }
  SUBCASE("complex self-consistency residual") {
    const double kerr = 2.0 * d.eta * d.eta * d.omega_m;
    const std::complex<double> i{0.0, 1.0};
    const std::pair<std::complex<double>, double> modes[] = {{d.alpha_1, d.Delta_1},
                                                             {d.alpha_2, d.Delta_2}};
    const double Omegas[] = {d.Omega_1, d.Omega_2};
    for (int j = 0; j < 2; ++j) {
      const auto [a, D] = modes[j];
      const auto res = i * D * a + i * kerr * a * d.N - 0.5 * d.gamma * a - 0.5 * i * Omegas[j];
      CHECK(std::abs(res) < 1e-10 * Omegas[j]);
    }
  }
  SUBCASE("scalar residual of the selected root") {
    const double kerr = 2.0 * d.eta * d.eta * d.omega_m;
    double rhs = 0.0;
    const double D[] = {d.Delta_1, d.Delta_2};
    const double O[] = {d.Omega_1, d.Omega_2};
    for (int j = 0; j < 2; ++j) {
      const double s = D[j] + kerr * d.N;
      rhs += 0.25 * O[j] * O[j] / (s * s + 0.25 * d.gamma * d.gamma);
    }
    CHECK(std::abs(rhs - d.N) < 1e-12 * d.N);
  }
  SUBCASE("additional bistable branches are flagged") {
    CHECK(d.multistable);
    CHECK(d.root_count >= 2);
    CHECK_FALSE(d.warnings.empty());
  }
}

TEST_CASE("sign convention") {
  PhysicalParams p = reference_device_params();
  std::swap(p.drive.omega_L, p.drive.omega_Lp);
  p.drive.omega_L += 2.0 * p.nu;
  p.drive.omega_Lp -= 2.0 * p.nu;
  CHECK_THROWS_AS(solve_steady_state(p), SignConventionViolated);
}

TEST_CASE("balanced amplitudes") {
  const DerivedParams d = solve_steady_state(reference_device_params());
  CHECK_NOTHROW(require_balanced(d));
  DerivedParams off = d;
  off.alpha_2 *= 1.001;
  CHECK_THROWS_AS(require_balanced(off), ConstraintViolated);
}

TEST_CASE("drive needed for a target amplitude") {
  const PhysicalParams p = reference_device_params();
  const double Delta = -(p.omega_m + hz_to_rads(10e6));

  SUBCASE("linear cavity is closed form") {
    PhysicalParams lin = p;
    lin.eta = 0.0;
    CHECK(amplitude_to_drive(1000.0, Delta, lin) ==
          1000.0 * std::sqrt(lin.gamma * lin.gamma + 4.0 * Delta * Delta));
  }
  SUBCASE("reference device") {
    // Bare detuning whose Kerr-shifted value is -(omega_m + delta).
    const PhysicalParams at = params_for_operating_point(p, {1000.0, hz_to_rads(10e6), 0.0});
    const auto [D1, D2] = detunings(at.drive.omega_L, at.drive.omega_Lp, at.omega_p, at.nu);
    const double Omega = amplitude_to_drive(1000.0, D1, at);
    CHECK(rel(Omega, 1.0495e12) < 1e-2);
    CHECK(rel(Omega, 1000.0 * std::sqrt(4.0 * Delta * Delta + p.gamma * p.gamma)) < 1e-6);

    const auto sol = solve_displacement(Omega, at.drive.Omega_2, D1, D2,
                                        2.0 * p.eta * p.eta * p.omega_m, p.gamma);
    CHECK(rel(std::abs(sol.alpha_1), 1000.0) < 1e-3);
  }
  SUBCASE("round trip away from the balanced point") {
    const auto [D1, D2] = detunings(p.drive.omega_L, p.drive.omega_Lp, p.omega_p, p.nu);
    const double kerr = 2.0 * p.eta * p.eta * p.omega_m;
    for (double target : {700.0, 1200.0}) {
      const double Omega = amplitude_to_drive(target, D1, p);
      const auto sol = solve_displacement(Omega, p.drive.Omega_2, D1, D2, kerr, p.gamma);
      CHECK(rel(std::abs(sol.alpha_1), target) < 1e-3);
    }
  }
  CHECK_THROWS_AS(amplitude_to_drive(0.0, Delta, p), DomainError);
}

TEST_CASE("operating point construction round-trips") {
  const PhysicalParams base = reference_device_params();
  for (double alpha : {500.0, 1000.0, 2000.0}) {
    for (double d_over_gamma : {0.03, 0.07, 0.2}) {
      const OperatingPoint op{alpha, hz_to_rads(10e6), d_over_gamma * base.gamma};
      const DerivedParams d = solve_steady_state(params_for_operating_point(base, op));
      CHECK(rel(d.alpha, alpha) < 1e-6);
      CHECK(rel(d.d, op.d) < 1e-5);
      CHECK(rel(d.delta, op.delta) < 1e-6);
    }
  }
}
