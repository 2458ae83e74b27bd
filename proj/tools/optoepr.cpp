// Command-line front end: parses a run configuration, dispatches one command
// and writes its table or record.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "optoepr/config.hpp"
#include "optoepr/emit.hpp"
#include "optoepr/errors.hpp"
#include "optoepr/regime.hpp"

namespace {

using namespace optoepr;

constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> omega_min;
  std::optional<double> omega_max;
  std::optional<std::size_t> omega_points;
  std::optional<std::string> model;
  std::optional<std::string> models;
  std::optional<std::string> axis;
  std::optional<std::string> values;
  bool at_optimum = false;
  std::vector<double> bracket{0.01, 0.2};
};

std::vector<double> default_sweep_values(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Temperature:
      return {4.0, 77.0, 300.0};
    case SweepAxis::Alpha:
      return {1000.0, 2000.0, 3000.0};
    case SweepAxis::D:
      return {0.03, 0.05, 0.07, 0.09, 0.11};
    case SweepAxis::Q:
      return {300.0, 3000.0, 30000.0};
    case SweepAxis::PowerFluct:
      return {-0.01, 0.0, 0.01};
    case SweepAxis::DFluct:
      return {-0.02, 0.0, 0.02};
  }
  return {};
}

// Sweep values in config units to the units SweepSpec expects.
double axis_value(SweepAxis axis, double value, double gamma) {
  return axis == SweepAxis::D || axis == SweepAxis::DFluct ? value * gamma : value;
}

Table spectrum_table(const DerivedParams& derived, const std::vector<double>& grid, ModelKind model) {
  Table t;
  for (const auto& p : model_spectrum(derived, grid, model)) {
    t.rows.push_back(to_output_row(p, derived.gamma, model));
  }
  return t;
}

void run_derive(const RunConfig& cfg) {
  const DerivedParams d = solve_steady_state(cfg.params);
  const auto grid = omega_grid(cfg);
  double omega_max = 0.0;
  for (double w : grid) omega_max = std::max(omega_max, std::abs(w));
  const RegimeReport regime = validate_regime(cfg.params, d, omega_max);
  Record r{
      {"alpha_1_re", d.alpha_1.real()}, {"alpha_1_im", d.alpha_1.imag()},
      {"alpha_2_re", d.alpha_2.real()}, {"alpha_2_im", d.alpha_2.imag()},
      {"alpha", d.alpha},               {"N", d.N},
      {"beta", d.beta},                 {"beta_imag_dropped", d.beta_imag_dropped},
      {"Delta_1_rads", d.Delta_1},      {"Delta_2_rads", d.Delta_2},
      {"Delta_1p_rads", d.Delta_1p},    {"Delta_2p_rads", d.Delta_2p},
      {"delta_rads", d.delta},          {"d_rads", d.d},
      {"d_over_gamma", d.d / d.gamma},  {"g_rads", d.g},
      {"g_prime_rads", d.g_prime},      {"gamma_m_tilde_rads", d.gamma_m_tilde},
      {"n_m", d.n_m},                   {"Omega_1_rads", d.Omega_1},
      {"Omega_2_rads", d.Omega_2},      {"multistable", d.multistable},
      {"root_count", static_cast<double>(d.root_count)},
  };
  for (const auto& c : regime.checks) {
    r.emplace_back("regime_" + c.name + "_ratio", c.ratio);
    r.emplace_back("regime_" + c.name + "_pass", c.pass);
  }
  r.emplace_back("regime_overall_pass", regime.overall_pass);
  for (std::size_t i = 0; i < d.warnings.size(); ++i) {
    r.emplace_back(fmt::format("warning_{}", i), d.warnings[i]);
  }
  emit_record(r, cfg.format, cfg.output_path);
}

void run_spectrum(const RunConfig& cfg) {
  const DerivedParams d = solve_steady_state(cfg.params);
  emit_rows(spectrum_table(d, omega_grid(cfg), cfg.model), cfg.format, cfg.output_path);
}

void run_sweep_command(const RunConfig& cfg, bool at_optimum) {
  SweepSpec spec;
  spec.axis = cfg.sweep_axis;
  spec.base = at_optimum ? at_optimum_detuning(cfg.params) : cfg.params;
  spec.omega_grid = omega_grid(cfg);
  spec.model = cfg.model;
  const auto values = cfg.sweep_values.empty() ? default_sweep_values(cfg.sweep_axis) : cfg.sweep_values;
  for (double v : values) spec.values.push_back(axis_value(spec.axis, v, cfg.params.gamma));

  const SweepResult result = run_sweep(spec);
  Table t;
  t.extra_columns = {"sweep_value", "peak_eof", "fwhm_rads"};
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    const std::vector<double> extra{values[i], row.stats.peak_eof, row.stats.fwhm};
    if (!row.ok()) {
      std::cerr << fmt::format("sweep value {}: {}\n", values[i], row.error);
      SpectrumPoint failed;
      failed.omega = std::numeric_limits<double>::quiet_NaN();
      failed.error = row.error;
      failed.form.n = 0.0;
      OutputRow out = to_output_row(failed, cfg.params.gamma, spec.model);
      out.extra = {values[i], std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
      t.rows.push_back(out);
      continue;
    }
    for (const auto& p : row.spectrum) {
      OutputRow out = to_output_row(p, cfg.params.gamma, spec.model);
      out.extra = extra;
      t.rows.push_back(std::move(out));
    }
  }
  emit_rows(t, cfg.format, cfg.output_path);
}

void run_optimum(const RunConfig& cfg, const std::vector<double>& bracket) {
  const DerivedParams d = solve_steady_state(cfg.params);
  const OptimumDetuning od = optimum_d(d);
  const double numeric = find_optimum_d_numeric(
      cfg.params, {bracket.at(0) * d.gamma, bracket.at(1) * d.gamma}, omega_grid(cfg));
  Record r{
      {"d_o_rads", od.d_o},
      {"d_o_over_gamma", od.d_o / d.gamma},
      {"S_o_db", od.S_o},
      {"eof_o", od.eof_o},
      {"unbounded", od.unbounded},
      {"d_numeric_rads", numeric},
      {"d_numeric_over_gamma", numeric / d.gamma},
      {"numeric_rel_dev", od.d_o > 0.0 ? (numeric - od.d_o) / od.d_o : 0.0},
  };
  emit_record(r, cfg.format, cfg.output_path);
}

void run_verify(const RunConfig& cfg) {
  const DerivedParams d = solve_steady_state(cfg.params);
  const ComparisonReport report = compare_models(d, omega_grid(cfg), cfg.models);
  Table t;
  for (std::size_t m = 1; m < report.models.size(); ++m) {
    t.extra_columns.push_back("dev_" + to_string(report.models[m]));
  }
  for (const auto& row : report.rows) {
    std::vector<double> devs(row.rel_dev.begin() + 1, row.rel_dev.end());
    for (std::size_t m = 0; m < report.models.size(); ++m) {
      OutputRow out = to_output_row(row.points[m], d.gamma, report.models[m]);
      out.extra = devs;
      t.rows.push_back(std::move(out));
    }
  }
  emit_rows(t, cfg.format, cfg.output_path);
  for (std::size_t m = 1; m < report.models.size(); ++m) {
    std::cerr << fmt::format("max relative deviation of n - k_x, {} vs {}: {:.6g}\n",
                             to_string(report.models[m]), to_string(report.models[0]),
                             report.max_rel_dev[m]);
  }
}

void run_occupation(const RunConfig& cfg) {
  const DerivedParams d = solve_steady_state(cfg.params);
  const double occ = intracavity_occupation(d);
  Record r{
      {"occupation", occ},
      {"alpha_1_sq", std::norm(d.alpha_1)},
      {"ratio", occ / std::norm(d.alpha_1)},
  };
  emit_record(r, cfg.format, cfg.output_path);
}

RunConfig resolve(const Options& o, Command command) {
  std::vector<std::string> overrides = o.overrides;
  overrides.push_back("command=" + to_string(command));
  if (o.out) overrides.push_back("output=" + *o.out);
  if (o.format) overrides.push_back("format=" + *o.format);
  if (o.omega_min) overrides.push_back(fmt::format("omega_min_over_gamma={:.17g}", *o.omega_min));
  if (o.omega_max) overrides.push_back(fmt::format("omega_max_over_gamma={:.17g}", *o.omega_max));
  if (o.omega_points) overrides.push_back(fmt::format("omega_points={}", *o.omega_points));
  if (o.model) overrides.push_back("model=" + *o.model);
  if (o.models) overrides.push_back("models=" + *o.models);
  if (o.axis) overrides.push_back("sweep_axis=" + *o.axis);
  if (o.values) overrides.push_back("sweep_values=" + *o.values);
  if (o.config_path.empty()) return parse_config("defaults: paper\n", overrides);
  return load_config(o.config_path, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled output spectra of a two-mode optomechanical cavity"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Configuration file (default: reference device)");
  app.add_option("--set", o.overrides, "Override a config key: key=value (repeatable)");
  app.add_option("--out", o.out, "Output path (default: standard output)");
  app.add_option("--format", o.format, "csv or jsonlines");
  app.add_option("--omega-min", o.omega_min, "Lowest sideband frequency, units of gamma");
  app.add_option("--omega-max", o.omega_max, "Highest sideband frequency, units of gamma");
  app.add_option("--omega-points", o.omega_points, "Number of grid points");
  app.add_option("--model", o.model, "adiabatic, adiabatic_exact, rwa3 or full6");

  auto* derive = app.add_subcommand("derive", "Steady state, derived parameters and regime checks");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Entanglement spectrum over the omega grid");
  auto* sweep = app.add_subcommand("sweep", "Spectra over one swept parameter");
  sweep->add_option("--axis", o.axis, "T, alpha, d, Q, power_fluct or d_fluct");
  sweep->add_option("--values", o.values, "Comma-separated values (d in units of gamma)");
  sweep->add_flag("--at-optimum", o.at_optimum, "Move the base point to the optimum detuning first");
  auto* optimum = app.add_subcommand("optimum", "Closed-form and numeric optimum detuning");
  optimum->add_option("--bracket", o.bracket, "Search bracket for d, units of gamma")->expected(2);
  auto* verify = app.add_subcommand("verify", "Compare the eliminated model with the exact oracles");
  verify->add_option("--models", o.models, "Comma-separated models, first is the reference");
  auto* occupation = app.add_subcommand("occupation", "Intracavity photon fluctuation <a1^dag a1>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (derive->parsed()) run_derive(resolve(o, Command::Derive));
    if (spectrum_cmd->parsed()) run_spectrum(resolve(o, Command::Spectrum));
    if (sweep->parsed()) run_sweep_command(resolve(o, Command::Sweep), o.at_optimum);
    if (optimum->parsed()) run_optimum(resolve(o, Command::Optimum), o.bracket);
    if (verify->parsed()) run_verify(resolve(o, Command::Verify));
    if (occupation->parsed()) run_occupation(resolve(o, Command::Occupation));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << '\n';
    return kExitPhysics;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
