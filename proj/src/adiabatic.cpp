#include "optoepr/adiabatic.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "optoepr/errors.hpp"

namespace optoepr {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

}  // namespace

TransferPoint transfer_functions(const DerivedParams& derived, double omega) {
  require_balanced(derived);
  const double gamma = derived.gamma;
  const double g = derived.g;
  const double gp = derived.g_prime;
  const cd pole = -kI * omega + 0.5 * gamma;
  const cd Delta = pole * pole + gp * gp - g * g;
  if (std::abs(Delta) < 1e-30 * (gamma * gamma + omega * omega)) {
    throw DegenerateResponse(fmt::format("Delta(omega) vanishes at omega={:.6g} rad/s", omega));
  }
  TransferPoint tp;
  tp.omega = omega;
  tp.Delta_of_omega = Delta;
  tp.G = cd(omega * omega + 0.25 * gamma * gamma + g * g - gp * gp, -gp * gamma) / Delta;
  tp.H = kI * g * gamma / Delta;
  tp.I = (pole - kI * gp + kI * g) * std::sqrt(gamma * derived.gamma_m_tilde) / Delta;
  return tp;
}

std::pair<Covariance4, StandardForm> closed_form_covariance(const TransferPoint& tp, double n_m,
                                                            const DerivedParams& derived) {
  const double w = tp.omega;
  const double gamma = derived.gamma;
  const double g = derived.g;
  const double gp = derived.g_prime;
  const double den = std::norm(tp.Delta_of_omega);
  const double real_part = w * w + 0.25 * gamma * gamma + g * g - gp * gp;
  const double shift = w + gp - g;
  const double thermal =
      (shift * shift + 0.25 * gamma * gamma) * gamma * derived.gamma_m_tilde * (2.0 * n_m + 1.0);

  const double n =
      (real_part * real_part + (gp * gp + g * g) * gamma * gamma + thermal) / den;
  // Printed with "w^2 + gamma/4"; gamma^2/4 restores dimensional consistency.
  const double V14 = -2.0 * g * gamma * real_part / den;
  const double V24 = (2.0 * gp * g * gamma * gamma + thermal) / den;
  const double k_x = std::hypot(V14, V24);

  Covariance4 cov;
  cov.omega = w;
  cov.entries = Eigen::Matrix4d::Identity() * n;
  const Eigen::Matrix2d cross{{-V24, V14}, {V14, V24}};
  cov.entries.topRightCorner<2, 2>() = cross;
  cov.entries.bottomLeftCorner<2, 2>() = cross.transpose();

  return {cov, StandardForm{n, k_x, -k_x, 0.0}};
}

double eof(double x) {
  if (!(x > 0.0)) throw DomainError(fmt::format("EOF needs a positive EPR variance, got {}", x));
  if (x >= 1.0) return 0.0;
  const double rx = std::sqrt(x);
  const double c_plus = 0.25 * (1.0 / rx + rx) * (1.0 / rx + rx);
  const double c_minus = 0.25 * (1.0 / rx - rx) * (1.0 / rx - rx);
  const double minus_term = c_minus > 0.0 ? c_minus * std::log2(c_minus) : 0.0;
  return c_plus * std::log2(c_plus) - minus_term;
}

double squeezing_db(double x) {
  if (!(x > 0.0)) {
    throw DomainError(fmt::format("squeezing needs a positive EPR variance, got {}", x));
  }
  return -10.0 * std::log10(x);
}

EntMetrics metrics_from_standard_form(const StandardForm& sf) {
  EntMetrics m;
  m.epr_variance = sf.epr_variance();
  m.S_db = squeezing_db(m.epr_variance);
  m.eof = eof(m.epr_variance);
  m.entangled = m.epr_variance < 1.0;
  m.log_negativity = std::max(0.0, -std::log2(m.epr_variance));
  return m;
}

OptimumDetuning optimum_d(const DerivedParams& derived) {
  const double g = derived.g;
  const double quarter_gamma2 = 0.25 * derived.gamma * derived.gamma;
  OptimumDetuning out;
  // sqrt(g^2 + gamma^2/4) - g without cancellation.
  out.d_o = quarter_gamma2 / (std::sqrt(g * g + quarter_gamma2) + g);
  const double x = 4.0 * (out.d_o / derived.gamma) * (out.d_o / derived.gamma);
  if (!(x > 0.0) || !std::isfinite(x)) {
    out.unbounded = true;
    out.S_o = std::numeric_limits<double>::infinity();
    out.eof_o = std::numeric_limits<double>::infinity();
    return out;
  }
  out.S_o = squeezing_db(x);
  out.eof_o = eof(x);
  return out;
}

std::vector<SpectrumPoint> spectrum(const DerivedParams& derived,
                                    std::span<const double> omega_grid) {
  std::vector<SpectrumPoint> rows;
  rows.reserve(omega_grid.size());
  for (double w : omega_grid) {
    SpectrumPoint row;
    row.omega = w;
    if (!(std::abs(w) < derived.delta)) row.flags.emplace_back("outside_elimination_band");
    try {
      const auto tp = transfer_functions(derived, w);
      row.form = closed_form_covariance(tp, derived.n_m, derived).second;
      row.metrics = metrics_from_standard_form(row.form);
      if (row.metrics.entangled) row.flags.emplace_back("entangled");
    } catch (const PhysicsError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

DerivedParams with_detuning(const DerivedParams& derived, double d) {
  DerivedParams out = derived;
  const double shift = d - derived.d;
  out.d = d;
  out.g_prime = out.g + d;
  out.Delta_1p -= shift;
  out.Delta_2p -= shift;
  out.Delta_1 -= shift;
  out.Delta_2 -= shift;
  return out;
}

}  // namespace optoepr
