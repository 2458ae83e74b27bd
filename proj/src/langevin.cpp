#include "optoepr/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "optoepr/errors.hpp"

namespace optoepr {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Output rows a1_out(w) and a2_out^dag(w) over the inputs
// (a1_in(w), a2_in^dag(w), am_in(w)).
using HalfResponse = Eigen::Matrix<cd, 2, 3>;

// Fills all four rows: the daggered partners come from the response at -w.
LinearResponse from_halves(double omega, const HalfResponse& at_w, const HalfResponse& at_minus_w) {
  LinearResponse r;
  r.omega = omega;
  r.map(row::a1, col::a1) = at_w(0, 0);
  r.map(row::a1, col::a2_dag) = at_w(0, 1);
  r.map(row::a1, col::am) = at_w(0, 2);
  r.map(row::a2_dag, col::a1) = at_w(1, 0);
  r.map(row::a2_dag, col::a2_dag) = at_w(1, 1);
  r.map(row::a2_dag, col::am) = at_w(1, 2);

  r.map(row::a1_dag, col::a1_dag) = std::conj(at_minus_w(0, 0));
  r.map(row::a1_dag, col::a2) = std::conj(at_minus_w(0, 1));
  r.map(row::a1_dag, col::am_dag) = std::conj(at_minus_w(0, 2));
  r.map(row::a2, col::a1_dag) = std::conj(at_minus_w(1, 0));
  r.map(row::a2, col::a2) = std::conj(at_minus_w(1, 1));
  r.map(row::a2, col::am_dag) = std::conj(at_minus_w(1, 2));
  return r;
}

template <int N>
Eigen::Matrix<cd, N, N> solve_drift(const Eigen::Matrix<cd, N, N>& lhs, double omega) {
  Eigen::FullPivLU<Eigen::Matrix<cd, N, N>> lu(lhs);
  const double scale = lhs.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || lu.rank() < N ||
      std::abs(lu.determinant()) <= 1e-300 * std::pow(scale, N)) {
    throw SingularDrift(fmt::format("drift matrix singular at omega={:.6g} rad/s", omega));
  }
  return lu.inverse();
}

// Intracavity solution of the rwa3 system: rows (a1, a2^dag, am), columns
// (a1_in, a2_in^dag, am_in), noise amplitudes included.
Eigen::Matrix3cd rwa3_interior(const DerivedParams& p, double omega) {
  const double G1 = p.eta * p.omega_m * std::abs(p.alpha_1);
  const double G2 = p.eta * p.omega_m * std::abs(p.alpha_2);
  Eigen::Matrix3cd drift;
  drift << -kI * p.d - 0.5 * p.gamma, 0.0, -kI * G1,
           0.0, kI * p.d - 0.5 * p.gamma, kI * G2,
           -kI * G1, -kI * G2, kI * p.delta - 0.5 * p.gamma_m;
  const Eigen::Matrix3cd lhs = -kI * omega * Eigen::Matrix3cd::Identity() - drift;
  Eigen::Vector3cd noise(std::sqrt(p.gamma), std::sqrt(p.gamma), std::sqrt(p.gamma_m));
  return solve_drift<3>(lhs, omega) * noise.asDiagonal();
}

HalfResponse rwa3_half(const DerivedParams& p, double omega) {
  const Eigen::Matrix3cd inner = rwa3_interior(p, omega);
  const double sg = std::sqrt(p.gamma);
  HalfResponse h;
  h.row(0) = sg * inner.row(0);
  h.row(1) = sg * inner.row(1);
  h(0, 0) -= 1.0;
  h(1, 1) -= 1.0;
  return h;
}

HalfResponse adiabatic_half(const DerivedParams& p, double omega, NoiseRouting routing) {
  require_balanced(p);
  const double gamma = p.gamma;
  const cd pole = -kI * omega + 0.5 * gamma;
  Eigen::Matrix2cd A;
  A << pole + kI * p.g_prime, kI * p.g,
       -kI * p.g, pole - kI * p.g_prime;
  const Eigen::Matrix2cd inv = solve_drift<2>(A, omega);
  const double sg = std::sqrt(gamma);
  const double sm = std::sqrt(p.gamma_m_tilde);
  HalfResponse h;
  for (int r = 0; r < 2; ++r) {
    h(r, 0) = sg * sg * inv(r, 0);
    h(r, 1) = sg * sg * inv(r, 1);
    h(r, 2) = sg * sm * (inv(r, 0) - inv(r, 1));
  }
  h(0, 0) -= 1.0;
  h(1, 1) -= 1.0;
  if (routing == NoiseRouting::AsPrinted) h(1, 2) = -h(0, 2);
  return h;
}

// x = sum_k u_k c_k + v_k c_k^dag over independent modes c_k.
struct ModeExpansion {
  Eigen::Matrix<cd, 6, 1> u = Eigen::Matrix<cd, 6, 1>::Zero();
  Eigen::Matrix<cd, 6, 1> v = Eigen::Matrix<cd, 6, 1>::Zero();
};

// Column j of a response row acts on mode j: annihilation for even j (x(w)),
// creation for odd j (x^dag(w) = [x(-w)]^dag).
ModeExpansion expand_row(const ResponseMatrix& map, int r) {
  ModeExpansion e;
  for (int j = 0; j < 6; ++j) {
    if (j % 2 == 0) {
      e.u(j) = map(r, j);
    } else {
      e.v(j) = map(r, j);
    }
  }
  return e;
}

ModeExpansion dagger(const ModeExpansion& x) {
  return {x.v.conjugate(), x.u.conjugate()};
}

ModeExpansion quadrature_x(const ModeExpansion& b) {
  const auto bd = dagger(b);
  return {b.u + bd.u, b.v + bd.v};
}

ModeExpansion quadrature_p(const ModeExpansion& b) {
  const auto bd = dagger(b);
  return {-kI * (b.u - bd.u), -kI * (b.v - bd.v)};
}

double symmetrized_moment(const ModeExpansion& x, const ModeExpansion& y,
                          const Eigen::Matrix<double, 6, 1>& occupancy) {
  cd acc = 0.0;
  for (int k = 0; k < 6; ++k) {
    acc += (occupancy(k) + 0.5) * (x.u(k) * y.v(k) + x.v(k) * y.u(k));
  }
  return acc.real();
}

double commutator(const ModeExpansion& b) { return b.u.squaredNorm() - b.v.squaredNorm(); }

}  // namespace

LinearResponse rwa3_solve(const DerivedParams& derived, double omega) {
  return from_halves(omega, rwa3_half(derived, omega), rwa3_half(derived, -omega));
}

LinearResponse full6_frame_response(const DerivedParams& p, double frame_omega) {
  const double G1 = p.eta * p.omega_m * std::abs(p.alpha_1);
  const double G2 = p.eta * p.omega_m * std::abs(p.alpha_2);
  // Basis (a1, a1^dag, a2, a2^dag, am, am^dag).
  Eigen::Matrix<cd, 6, 6> drift = Eigen::Matrix<cd, 6, 6>::Zero();
  drift(0, 0) = kI * p.Delta_1p - 0.5 * p.gamma;
  drift(1, 1) = -kI * p.Delta_1p - 0.5 * p.gamma;
  drift(2, 2) = kI * p.Delta_2p - 0.5 * p.gamma;
  drift(3, 3) = -kI * p.Delta_2p - 0.5 * p.gamma;
  for (int m : {4, 5}) {
    drift(0, m) = -kI * G1;
    drift(1, m) = kI * G1;
    drift(2, m) = -kI * G2;
    drift(3, m) = kI * G2;
  }
  drift(4, 0) = drift(4, 1) = -kI * G1;
  drift(4, 2) = drift(4, 3) = -kI * G2;
  drift(5, 0) = drift(5, 1) = kI * G1;
  drift(5, 2) = drift(5, 3) = kI * G2;
  drift(4, 4) = -kI * p.omega_m - 0.5 * p.gamma_m;
  drift(5, 5) = kI * p.omega_m - 0.5 * p.gamma_m;

  const Eigen::Matrix<cd, 6, 6> lhs =
      -kI * frame_omega * Eigen::Matrix<cd, 6, 6>::Identity() - drift;
  Eigen::Matrix<cd, 6, 1> noise;
  const double sg = std::sqrt(p.gamma);
  const double sm = std::sqrt(p.gamma_m);
  noise << sg, sg, sg, sg, sm, sm;
  const Eigen::Matrix<cd, 6, 6> inner = solve_drift<6>(lhs, frame_omega) * noise.asDiagonal();

  LinearResponse r;
  r.omega = frame_omega;
  for (int out = 0; out < 4; ++out) {
    r.map.row(out) = sg * inner.row(out);
    r.map(out, out) -= 1.0;
  }
  return r;
}

LinearResponse full6_solve(const DerivedParams& derived, double omega) {
  auto r = full6_frame_response(derived, omega + derived.omega_m + derived.delta);
  r.omega = omega;
  return r;
}

LinearResponse adiabatic_response(const DerivedParams& derived, double omega,
                                  NoiseRouting routing) {
  return from_halves(omega, adiabatic_half(derived, omega, routing),
                     adiabatic_half(derived, -omega, routing));
}

Covariance4 assemble_covariance(const LinearResponse& resp, double n_m) {
  Eigen::Matrix<double, 6, 1> occupancy = Eigen::Matrix<double, 6, 1>::Zero();
  occupancy(col::am) = n_m;
  occupancy(col::am_dag) = n_m;

  const ModeExpansion b1 = expand_row(resp.map, row::a1);
  const ModeExpansion b2 = dagger(expand_row(resp.map, row::a2_dag));
  const std::array<ModeExpansion, 4> xi{quadrature_x(b1), quadrature_p(b1), quadrature_x(b2),
                                        quadrature_p(b2)};
  Covariance4 cov;
  cov.omega = resp.omega;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double v = symmetrized_moment(xi[i], xi[j], occupancy);
      cov.entries(i, j) = v;
      cov.entries(j, i) = v;
    }
  }
  return cov;
}

std::pair<double, double> output_commutators(const LinearResponse& resp) {
  const ModeExpansion b1 = expand_row(resp.map, row::a1);
  const ModeExpansion b2 = dagger(expand_row(resp.map, row::a2_dag));
  return {commutator(b1), commutator(b2)};
}

StandardForm standard_form_parameters(const Covariance4& V) {
  const Eigen::Matrix2d A = V.entries.topLeftCorner<2, 2>();
  const Eigen::Matrix2d B = V.entries.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d C = V.entries.topRightCorner<2, 2>();
  StandardForm sf;
  sf.n = 0.25 * (A.trace() + B.trace());
  const Eigen::Matrix2d nI = sf.n * Eigen::Matrix2d::Identity();
  sf.residual = std::max((A - nI).norm(), (B - nI).norm());
  // Proper local rotations bring C to diag(s0, sign(det C) s1).
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(C);
  const auto s = svd.singularValues();
  sf.k_x = s(0);
  sf.k_p = C.determinant() < 0.0 ? -s(1) : s(1);
  return sf;
}

StandardForm standard_form_reduce(const Covariance4& V) {
  const StandardForm sf = standard_form_parameters(V);
  if (sf.residual > 0.05 * sf.n) {
    throw NotSymmetricState(fmt::format(
        "diagonal blocks deviate from n I by {:.4g} (n = {:.6g}); EOF not defined", sf.residual,
        sf.n));
  }
  return sf;
}

double pt_symplectic_min(const Covariance4& V) {
  const Eigen::Matrix2d A = V.entries.topLeftCorner<2, 2>();
  const Eigen::Matrix2d B = V.entries.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d C = V.entries.topRightCorner<2, 2>();
  const double seralian = A.determinant() + B.determinant() - 2.0 * C.determinant();
  const double det_v = V.entries.determinant();
  const double disc = std::max(0.0, seralian * seralian - 4.0 * det_v);
  const double upper = 0.5 * (seralian + std::sqrt(disc));
  if (!(upper > 0.0)) return 0.0;
  // nu_-^2 nu_+^2 = det V
  return std::sqrt(std::max(0.0, det_v / upper));
}

double log_negativity(const Covariance4& V) {
  const double nu = pt_symplectic_min(V);
  if (!(nu > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, -std::log2(nu));
}

double intracavity_occupation(const DerivedParams& derived) {
  auto density = [&](double w) {
    const Eigen::Matrix3cd inner = rwa3_interior(derived, w);
    return std::norm(inner(0, 1)) + derived.n_m * std::norm(inner(0, 2));
  };
  const double lo = -derived.delta;
  const double hi = derived.delta;

  // Trapezoid rule; each doubling reuses the previous samples.
  std::size_t intervals = 1024;
  double h = (hi - lo) / static_cast<double>(intervals);
  double sum = 0.5 * (density(lo) + density(hi));
  for (std::size_t i = 1; i < intervals; ++i) sum += density(lo + h * static_cast<double>(i));
  double estimate = sum * h;

  constexpr std::size_t kMaxIntervals = std::size_t{1} << 20;
  while (intervals < kMaxIntervals) {
    double added = 0.0;
    for (std::size_t i = 0; i < intervals; ++i) {
      added += density(lo + h * (static_cast<double>(i) + 0.5));
    }
    sum += added;
    intervals *= 2;
    h *= 0.5;
    const double refined = sum * h;
    const bool converged = std::abs(refined - estimate) <= 0.005 * std::abs(refined);
    estimate = refined;
    if (converged) return estimate / (2.0 * std::numbers::pi);
  }
  throw NonConvergent("intracavity occupation did not converge within 2^20 points");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Adiabatic:
      return "adiabatic";
    case ModelKind::AdiabaticExact:
      return "adiabatic_exact";
    case ModelKind::Rwa3:
      return "rwa3";
    case ModelKind::Full6:
      return "full6";
  }
  return "unknown";
}

ModelKind model_from_string(const std::string& name) {
  for (auto kind :
       {ModelKind::Adiabatic, ModelKind::AdiabaticExact, ModelKind::Rwa3, ModelKind::Full6}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown model '" + name + "'");
}

SpectrumPoint evaluate_point(const DerivedParams& derived, double omega, ModelKind kind) {
  if (kind == ModelKind::Adiabatic) {
    const double grid[] = {omega};
    return spectrum(derived, grid).front();
  }
  SpectrumPoint row;
  row.omega = omega;
  if (!(std::abs(omega) < derived.delta)) row.flags.emplace_back("outside_elimination_band");
  try {
    LinearResponse resp;
    switch (kind) {
      case ModelKind::AdiabaticExact:
        resp = adiabatic_response(derived, omega);
        break;
      case ModelKind::Rwa3:
        resp = rwa3_solve(derived, omega);
        break;
      default:
        resp = full6_solve(derived, omega);
        break;
    }
    const Covariance4 V = assemble_covariance(resp, derived.n_m);
    row.form = standard_form_parameters(V);
    row.metrics.epr_variance = row.form.epr_variance();
    row.metrics.log_negativity = log_negativity(V);
    row.metrics.entangled = row.metrics.epr_variance < 1.0;
    row.metrics.S_db = squeezing_db(row.metrics.epr_variance);
    try {
      standard_form_reduce(V);
      row.metrics.eof = eof(row.metrics.epr_variance);
    } catch (const NotSymmetricState& e) {
      row.metrics.eof = std::numeric_limits<double>::quiet_NaN();
      row.flags.emplace_back("asymmetric");
      row.error = e.what();
    }
    if (row.metrics.entangled) row.flags.emplace_back("entangled");
  } catch (const PhysicsError& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<SpectrumPoint> model_spectrum(const DerivedParams& derived,
                                          std::span<const double> omega_grid, ModelKind kind) {
  if (kind == ModelKind::Adiabatic) return spectrum(derived, omega_grid);
  std::vector<SpectrumPoint> rows;
  rows.reserve(omega_grid.size());
  for (double w : omega_grid) rows.push_back(evaluate_point(derived, w, kind));
  return rows;
}

ComparisonReport compare_models(const DerivedParams& derived, std::span<const double> omega_grid,
                                std::vector<ModelKind> models) {
  ComparisonReport report;
  report.models = std::move(models);
  report.max_rel_dev.assign(report.models.size(), 0.0);
  for (double w : omega_grid) {
    ComparisonRow row;
    row.omega = w;
    for (auto kind : report.models) row.points.push_back(evaluate_point(derived, w, kind));
    const double ref = row.points.front().metrics.epr_variance;
    for (std::size_t m = 0; m < row.points.size(); ++m) {
      const double x = row.points[m].metrics.epr_variance;
      const double dev = std::abs(x - ref) / std::abs(ref);
      row.rel_dev.push_back(dev);
      if (std::isfinite(dev)) report.max_rel_dev[m] = std::max(report.max_rel_dev[m], dev);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace optoepr
