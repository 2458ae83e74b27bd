#pragma once

// Flat key = value run configuration.
//
// One pair per line, `#` starts a comment. Dimensioned keys carry a unit
// suffix: _hz (linear frequency, converted by 2pi), _rads (angular), _k, _w, _m.
// The directive `defaults: paper` loads the reference device and operating
// point; explicit keys override it and `--set` overrides override the file.

#include <string>
#include <vector>

#include "optoepr/sweep.hpp"

namespace optoepr {

enum class Command { Derive, Spectrum, Sweep, Optimum, Verify, Occupation };
enum class OutputFormat { Csv, JsonLines };

/// How the drive lasers are specified.
enum class DriveInput {
  OperatingPoint,  // alpha, delta, d; lasers and drives constructed in closed form
  Amplitudes,      // drive_1, drive_2, laser_1, laser_2
  Powers           // power_1, power_2, laser_1, laser_2
};

std::string to_string(Command c);
std::string to_string(OutputFormat f);
std::string to_string(DriveInput d);
Command command_from_string(const std::string& s);
OutputFormat format_from_string(const std::string& s);

struct RunConfig {
  PhysicalParams params;
  DriveInput drive_input = DriveInput::OperatingPoint;
  OperatingPoint target;  // authoritative when drive_input is OperatingPoint

  Command command = Command::Spectrum;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;

  double omega_min_over_gamma = -2.0;
  double omega_max_over_gamma = 2.0;
  std::size_t omega_points = 2001;

  ModelKind model = ModelKind::Adiabatic;
  std::vector<ModelKind> models{ModelKind::Adiabatic, ModelKind::Rwa3, ModelKind::Full6};
  SweepAxis sweep_axis = SweepAxis::Temperature;
  // Sweep values: K for T, dimensionless for alpha and Q, units of gamma for d
  // and d_fluct, fractional change for power_fluct.
  std::vector<double> sweep_values;

  bool operator==(const RunConfig&) const = default;
};

/// Parses `text`, then applies `flag_overrides` (each "key=value").
/// Throws ParseError (with line), UnitError, UnknownKey or ConfigError.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& flag_overrides = {});

/// Reads and parses a file. Throws IoError if it cannot be read.
RunConfig load_config(const std::string& path, const std::vector<std::string>& flag_overrides = {});

/// Canonical text: every key explicit, angular units, 17 significant digits.
std::string serialize_config(const RunConfig& config);

/// The omega grid described by the config, in rad/s.
std::vector<double> omega_grid(const RunConfig& config);

}  // namespace optoepr
