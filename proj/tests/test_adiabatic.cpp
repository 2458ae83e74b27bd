#include <doctest.h>

#include <cmath>
#include <vector>

#include "optoepr/adiabatic.hpp"
#include "optoepr/errors.hpp"
#include "optoepr/sweep.hpp"

using namespace optoepr;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

DerivedParams reference() { return solve_steady_state(reference_device_params()); }

DerivedParams at_optimum() {
  const DerivedParams d = reference();
  return with_detuning(d, optimum_d(d).d_o);
}

// Undriven, noiseless copy of `d` (g = g' = 0, no mechanical noise).
DerivedParams undriven(DerivedParams d) {
  d.g = 0.0;
  d.d = 0.0;
  d.g_prime = 0.0;
  d.gamma_m_tilde = 0.0;
  return d;
}

StandardForm closed_form_at(const DerivedParams& d, double omega, double n_m) {
  return closed_form_covariance(transfer_functions(d, omega), n_m, d).second;
}

}  // namespace

TEST_CASE("transfer functions") {
  SUBCASE("undriven cavity passes light through") {
    const DerivedParams d = undriven(reference());
    for (double w : {-3e7, -1e6, 0.0, 2.5e6, 4e7}) {
      const TransferPoint tp = transfer_functions(d, w);
      CHECK(std::abs(tp.H) == 0.0);
      CHECK(std::abs(tp.I) == 0.0);
      CHECK(std::abs(tp.G) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("commutator identity without mechanical noise") {
    DerivedParams d = reference();
    d.gamma_m_tilde = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double w = -d.gamma + 2.0 * d.gamma * i / 100.0;
      const TransferPoint tp = transfer_functions(d, w);
      CHECK(std::abs(std::norm(tp.G) - std::norm(tp.H) - 1.0) < 1e-12);
    }
  }
  SUBCASE("with mechanical noise the defect stays at the size of the noise rate") {
    const DerivedParams d = reference();
    for (int i = 0; i <= 100; ++i) {
      const double w = -d.gamma + 2.0 * d.gamma * i / 100.0;
      const TransferPoint tp = transfer_functions(d, w);
      const double defect = std::norm(tp.G) - std::norm(tp.H) + std::norm(tp.I) - 1.0;
      CHECK(std::abs(defect) <= 5.0 * d.gamma_m_tilde / d.gamma);
    }
  }
  SUBCASE("degenerate response") {
    DerivedParams d = reference();
    // Delta(0) = gamma^2/4 + g'^2 - g^2 vanishes for g'^2 = g^2 - gamma^2/4.
    d.g_prime = std::sqrt(d.g * d.g - 0.25 * d.gamma * d.gamma);
    d.d = d.g_prime - d.g;
    CHECK_THROWS_AS(transfer_functions(d, 0.0), DegenerateResponse);
  }
}

TEST_CASE("closed-form covariance") {
  SUBCASE("two vacua") {
    const DerivedParams d = undriven(reference());
    const auto [V, sf] = closed_form_covariance(transfer_functions(d, 1e6), 123.0, d);
    CHECK(sf.n == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sf.k_x == doctest::Approx(0.0));
    CHECK((V.entries - Eigen::Matrix4d::Identity()).norm() < 1e-14);
  }
  SUBCASE("optimum point at room temperature") {
    const DerivedParams d = at_optimum();
    const auto [V, sf] = closed_form_covariance(transfer_functions(d, 0.0), d.n_m, d);
    CHECK(rel(sf.n - sf.k_x, 0.0210) < 0.02);
    CHECK(rel(sf.n - sf.k_x, 4.0 * std::pow(d.d / d.gamma, 2)) < 0.02);
    CHECK(sf.k_p == -sf.k_x);
    CHECK(sf.residual == 0.0);
    CHECK(sf.n >= 1.0 - 1e-9);
    CHECK(sf.n + sf.k_x >= 1.0 - 1e-9);
    CHECK(is_physical(V));

    const StandardForm doubled = closed_form_at(d, 0.0, 2.0 * d.n_m);
    CHECK(rel(doubled.n - doubled.k_x, sf.n - sf.k_x) < 5e-3);
  }
  SUBCASE("spectral symmetry") {
    DerivedParams quiet = at_optimum();
    quiet.gamma_m_tilde = 0.0;
    DerivedParams resonant = with_detuning(reference(), 0.0);
    for (double w : {0.1, 0.5, 1.3}) {
      const double x = w * quiet.gamma;
      CHECK(rel(closed_form_at(quiet, x, 0.0).n, closed_form_at(quiet, -x, 0.0).n) < 1e-12);
      CHECK(rel(closed_form_at(quiet, x, 0.0).k_x, closed_form_at(quiet, -x, 0.0).k_x) < 1e-12);
      const double n_m = resonant.n_m;
      CHECK(rel(closed_form_at(resonant, x, n_m).n, closed_form_at(resonant, -x, n_m).n) < 1e-12);
      CHECK(rel(closed_form_at(resonant, x, n_m).k_x, closed_form_at(resonant, -x, n_m).k_x) < 1e-12);
    }
  }
}

TEST_CASE("entanglement of formation") {
  CHECK(eof(1.0) == 0.0);
  CHECK(eof(2.0) == 0.0);
  CHECK(eof(0.0210) == doctest::Approx(5.01).epsilon(0.02 / 5.01));
  CHECK_THROWS_AS(eof(0.0), DomainError);
  CHECK_THROWS_AS(eof(-0.5), DomainError);

  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 1000; ++i) {
    const double e = eof(i / 1000.0);
    CHECK(e > 0.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("two-mode squeezing") {
  CHECK(squeezing_db(1.0) == 0.0);
  CHECK(squeezing_db(0.1) == 10.0);
  CHECK(squeezing_db(0.0210) == doctest::Approx(16.8).epsilon(0.1 / 16.8));
  CHECK(squeezing_db(2.0) < 0.0);
  CHECK_THROWS_AS(squeezing_db(0.0), DomainError);
  double prev = std::numeric_limits<double>::infinity();
  for (double x = 1e-3; x < 10.0; x *= 1.3) {
    CHECK(squeezing_db(x) < prev);
    prev = squeezing_db(x);
  }
}

TEST_CASE("metrics from a standard form") {
  for (double x : {0.02, 0.3, 0.99}) {
    const StandardForm sf{5.0, 5.0 - x, -(5.0 - x), 0.0};
    const EntMetrics m = metrics_from_standard_form(sf);
    CHECK(m.entangled);
    CHECK(m.eof > 0.0);
    CHECK(m.log_negativity == doctest::Approx(m.S_db / (10.0 * std::log10(2.0))).epsilon(1e-12));
  }
  const EntMetrics sep = metrics_from_standard_form({3.0, 1.5, -1.5, 0.0});
  CHECK_FALSE(sep.entangled);
  CHECK(sep.eof == 0.0);
  CHECK(sep.log_negativity == 0.0);
}

TEST_CASE("optimum detuning") {
  const DerivedParams d = reference();
  const OptimumDetuning od = optimum_d(d);
  CHECK(rel(od.d_o, 1.46e6) < 5e-3);
  CHECK(od.d_o / d.gamma == doctest::Approx(0.073).epsilon(0.003 / 0.073));
  CHECK(od.S_o == doctest::Approx(16.8).epsilon(0.2 / 16.8));
  CHECK(od.eof_o == doctest::Approx(5.0).epsilon(0.05 / 5.0));
  CHECK_FALSE(od.unbounded);

  SUBCASE("vanishing linewidth") {
    DerivedParams narrow = d;
    narrow.gamma = 0.0;
    const OptimumDetuning o = optimum_d(narrow);
    CHECK(o.d_o == 0.0);
    CHECK(o.unbounded);
    CHECK(std::isinf(o.S_o));
  }
  SUBCASE("vanishing coupling") {
    DerivedParams weak = d;
    weak.g = 0.0;
    const OptimumDetuning o = optimum_d(weak);
    CHECK(o.d_o == doctest::Approx(0.5 * d.gamma).epsilon(1e-14));
    CHECK(std::abs(o.S_o) < 1e-12);
  }
  SUBCASE("the optimum point reaches 4 (d_o / gamma)^2") {
    const DerivedParams at = with_detuning(d, od.d_o);
    const StandardForm sf = closed_form_at(at, 0.0, at.n_m);
    CHECK(rel(sf.n - sf.k_x, 4.0 * std::pow(od.d_o / d.gamma, 2)) < 0.02);
  }
}

TEST_CASE("closed-form spectrum") {
  CHECK(spectrum(reference(), std::vector<double>{}).empty());

  SUBCASE("peak near zero at the optimum") {
    const DerivedParams d = at_optimum();
    const auto rows = spectrum(d, default_omega_grid(d.gamma));
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].ok());
      if (rows[i].metrics.eof > rows[best].metrics.eof) best = i;
    }
    CHECK(std::abs(rows[best].omega) < 0.05 * d.gamma);
  }
  SUBCASE("strong driving splits the peak") {
    const PhysicalParams base = reference_device_params();
    const DerivedParams ref = reference();
    const DerivedParams strong =
        solve_steady_state(apply_axis(base, SweepAxis::Alpha, 3000.0));
    CHECK(rel(strong.d, ref.d) < 1e-5);
    CHECK(rel(strong.delta, ref.delta) < 1e-6);
    const PeakStats s = peak_statistics(spectrum(strong, default_omega_grid(strong.gamma)));
    REQUIRE(s.peak_omegas.size() == 2);
    CHECK(s.peak_omegas[0] < 0.0);
    CHECK(s.peak_omegas[0] == doctest::Approx(-s.peak_omegas[1]).epsilon(2e-3));
  }
  SUBCASE("rows carry flags and are order preserving") {
    const DerivedParams d = at_optimum();
    const std::vector<double> grid{0.0, 2.0 * d.delta, -d.gamma};
    const auto rows = spectrum(d, grid);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(rows[i].omega == grid[i]);
    CHECK(std::find(rows[1].flags.begin(), rows[1].flags.end(), "outside_elimination_band") !=
          rows[1].flags.end());
    CHECK(std::find(rows[0].flags.begin(), rows[0].flags.end(), "entangled") != rows[0].flags.end());
  }
}
