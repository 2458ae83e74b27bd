#include "optoepr/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <fmt/format.h>

#include "optoepr/errors.hpp"

namespace optoepr {

namespace {

double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

std::vector<double> eof_values(const std::vector<SpectrumPoint>& rows) {
  std::vector<double> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(r.ok() ? finite_or_zero(r.metrics.eof) : 0.0);
  return y;
}

// Vertex of the parabola through three points.
std::pair<double, double> parabolic_vertex(double x0, double y0, double x1, double y1, double x2,
                                           double y2) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  if (!(curvature < 0.0)) return {x1, y1};
  const double slope = d01 - curvature * (x0 + x1);
  const double xv = std::clamp(-slope / (2.0 * curvature), x0, x2);
  const double yv = y1 + (xv - x1) * (d01 + curvature * (xv - x0));
  return {xv, std::max(yv, y1)};
}

double crossing(double xa, double ya, double xb, double yb, double level) {
  if (ya == yb) return xa;
  return xa + (level - ya) * (xb - xa) / (yb - ya);
}

DerivedParams solve_balanced(const PhysicalParams& params) {
  DerivedParams derived = solve_steady_state(params);
  require_balanced(derived);
  return derived;
}

double closed_form_peak(const DerivedParams& derived, const std::vector<double>& grid) {
  return peak_statistics(spectrum(derived, grid)).peak_eof_refined;
}

}  // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Temperature:
      return "temperature";
    case SweepAxis::Alpha:
      return "alpha";
    case SweepAxis::D:
      return "d";
    case SweepAxis::Q:
      return "Q";
    case SweepAxis::PowerFluct:
      return "power_fluct";
    case SweepAxis::DFluct:
      return "d_fluct";
  }
  return "unknown";
}

SweepAxis axis_from_string(const std::string& name) {
  if (name == "T" || name == "temperature") return SweepAxis::Temperature;
  if (name == "alpha") return SweepAxis::Alpha;
  if (name == "d") return SweepAxis::D;
  if (name == "Q" || name == "q") return SweepAxis::Q;
  if (name == "power_fluct") return SweepAxis::PowerFluct;
  if (name == "d_fluct") return SweepAxis::DFluct;
  throw ConfigError("unknown sweep axis '" + name + "'");
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

std::vector<double> default_omega_grid(double gamma) {
  return linear_grid(-2.0 * gamma, 2.0 * gamma, 2001);
}

PeakStats peak_statistics(const std::vector<SpectrumPoint>& rows) {
  PeakStats s;
  s.fwhm = std::numeric_limits<double>::quiet_NaN();
  if (rows.empty()) return s;
  const auto y = eof_values(rows);
  const std::size_t n = y.size();
  auto x = [&](std::size_t i) { return rows[i].omega; };

  const std::size_t imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  s.peak_eof = y[imax];
  s.peak_omega = x(imax);
  s.peak_eof_refined = y[imax];
  auto refine = [&](std::size_t i) -> std::pair<double, double> {
    if (i == 0 || i + 1 >= n) return {x(i), y[i]};
    return parabolic_vertex(x(i - 1), y[i - 1], x(i), y[i], x(i + 1), y[i + 1]);
  };
  std::tie(s.peak_omega, s.peak_eof_refined) = refine(imax);
  if (!(s.peak_eof > 0.0)) return s;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (y[i] >= y[i - 1] && y[i] > y[i + 1] && y[i] >= 0.99 * s.peak_eof) {
      s.peak_omegas.push_back(refine(i).first);
    }
  }
  if (s.peak_omegas.empty()) s.peak_omegas.push_back(s.peak_omega);

  const double half = 0.5 * s.peak_eof;
  std::size_t left = imax;
  std::size_t right = imax;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] >= half) {
      left = std::min(left, i);
      right = std::max(right, i);
    }
  }
  if (left == 0 || right + 1 == n) return s;
  const double xl = crossing(x(left - 1), y[left - 1], x(left), y[left], half);
  const double xr = crossing(x(right), y[right], x(right + 1), y[right + 1], half);
  s.fwhm = xr - xl;
  return s;
}

PhysicalParams apply_axis(const PhysicalParams& base, SweepAxis axis, double value) {
  PhysicalParams p = base;
  switch (axis) {
    case SweepAxis::Temperature:
      p.T = value;
      validate(p);
      return p;
    case SweepAxis::Q:
      if (!(value > 0.0)) throw DomainError(fmt::format("Q must be positive, got {}", value));
      p.gamma_m = p.omega_m / value;
      validate(p);
      return p;
    default:
      break;
  }
  const DerivedParams derived = solve_balanced(base);
  OperatingPoint op = operating_point(derived);
  switch (axis) {
    case SweepAxis::Alpha:
      op.alpha = value;
      break;
    case SweepAxis::D:
      op.d = value;
      break;
    case SweepAxis::DFluct:
      op.d += value;
      break;
    case SweepAxis::PowerFluct: {
      if (!(value > -1.0)) {
        throw DomainError(fmt::format("power change must exceed -100%, got {}", value));
      }
      const double alpha_sq = op.alpha * op.alpha;
      const double scaled_sq = alpha_sq * (1.0 + value);
      op.d -= 4.0 * base.eta * base.eta * base.omega_m * (scaled_sq - alpha_sq);
      op.alpha = std::sqrt(scaled_sq);
      break;
    }
    default:
      break;
  }
  return params_for_operating_point(base, op);
}

PhysicalParams at_optimum_detuning(const PhysicalParams& base) {
  const DerivedParams derived = solve_balanced(base);
  OperatingPoint op = operating_point(derived);
  op.d = optimum_d(derived).d_o;
  return params_for_operating_point(base, op);
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw DomainError("sweep values must be nonempty");
  if (spec.omega_grid.empty()) throw DomainError("omega grid must be nonempty");
  if (spec.values.size() > 1) {
    const bool up = spec.values[1] > spec.values[0];
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
      const bool ok = up ? spec.values[i] > spec.values[i - 1] : spec.values[i] < spec.values[i - 1];
      if (!ok) throw DomainError("sweep values must be strictly monotone");
    }
  }
  SweepResult result;
  result.axis = spec.axis;
  result.model = spec.model;
  for (double v : spec.values) {
    SweepRow row;
    row.value = v;
    try {
      const DerivedParams derived = solve_steady_state(apply_axis(spec.base, spec.axis, v));
      row.spectrum = model_spectrum(derived, spec.omega_grid, spec.model);
      row.stats = peak_statistics(row.spectrum);
    } catch (const PhysicsError& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

SensitivityReport sensitivity_analysis(const PhysicalParams& base, double d_jitter,
                                       double power_jitter_frac,
                                       std::optional<std::vector<double>> omega_grid) {
  if (!(d_jitter >= 0.0) || !(power_jitter_frac >= 0.0) || !(power_jitter_frac < 1.0)) {
    throw DomainError("jitters must be non-negative (power jitter below 1)");
  }
  const DerivedParams derived = solve_balanced(base);
  const std::vector<double> grid = omega_grid ? *omega_grid : default_omega_grid(derived.gamma);
  SensitivityReport report;
  report.d_o = optimum_d(derived).d_o;
  OperatingPoint nominal = operating_point(derived);
  nominal.d = report.d_o;
  const double alpha_sq = nominal.alpha * nominal.alpha;
  const double shift_per_photon = 4.0 * base.eta * base.eta * base.omega_m;

  report.worst_peak_eof = std::numeric_limits<double>::infinity();
  for (double offset : {-d_jitter, 0.0, d_jitter}) {
    for (double scale : {1.0 - power_jitter_frac, 1.0, 1.0 + power_jitter_frac}) {
      OperatingPoint op = nominal;
      op.alpha = std::sqrt(alpha_sq * scale);
      op.d = nominal.d + offset - shift_per_photon * alpha_sq * (scale - 1.0);
      SensitivityEntry entry{offset, scale, op.d, 0.0};
      const DerivedParams point = solve_balanced(params_for_operating_point(base, op));
      entry.peak_eof = peak_statistics(spectrum(point, grid)).peak_eof;
      if (offset == 0.0 && scale == 1.0) report.nominal_peak_eof = entry.peak_eof;
      report.worst_peak_eof = std::min(report.worst_peak_eof, entry.peak_eof);
      report.entries.push_back(entry);
    }
  }
  report.degradation =
      report.nominal_peak_eof > 0.0
          ? std::max(0.0, (report.nominal_peak_eof - report.worst_peak_eof) / report.nominal_peak_eof)
          : 0.0;
  return report;
}

bool is_unimodal(const std::vector<double>& samples, double slack) {
  if (samples.empty()) return true;
  const auto top =
      static_cast<std::size_t>(std::max_element(samples.begin(), samples.end()) - samples.begin());
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (i <= top && samples[i] < samples[i - 1] - slack) return false;
    if (i > top && samples[i] > samples[i - 1] + slack) return false;
  }
  return true;
}

double find_optimum_d_numeric(const PhysicalParams& base, Bracket bracket,
                              std::optional<std::vector<double>> omega_grid) {
  const DerivedParams derived = solve_balanced(base);
  if (!(bracket.lo > 0.0) || !(bracket.hi < derived.gamma) || bracket.hi < bracket.lo) {
    throw DomainError(fmt::format("bracket [{:.6g}, {:.6g}] must lie within (0, gamma)",
                                  bracket.lo, bracket.hi));
  }
  if (bracket.hi == bracket.lo) return bracket.lo;
  const std::vector<double> grid = omega_grid ? *omega_grid : default_omega_grid(derived.gamma);
  auto objective = [&](double d) { return closed_form_peak(with_detuning(derived, d), grid); };

  constexpr int kScan = 41;
  const auto ds = linear_grid(bracket.lo, bracket.hi, kScan);
  std::vector<double> fs;
  for (double d : ds) fs.push_back(objective(d));
  const auto top = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  if (!is_unimodal(fs, 1e-9 * std::max(1.0, std::abs(fs[top])))) {
    std::string scan;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      scan += fmt::format("{}({:.6g}, {:.6g})", i ? ", " : "", ds[i] / derived.gamma, fs[i]);
    }
    throw BracketError("peak EOF is not unimodal over the bracket; scan (d/gamma, eof): " + scan);
  }

  // Golden-section search inside the scan cell pair around the best sample.
  double a = ds[top == 0 ? 0 : top - 1];
  double b = ds[std::min(top + 1, ds.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = objective(c);
  double fe = objective(e);
  while (b - a > 1e-7 * derived.gamma) {
    if (fc >= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = objective(e);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace optoepr
