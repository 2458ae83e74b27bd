#pragma once

// Tabular output of spectrum rows as CSV or JSON lines.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "optoepr/config.hpp"

namespace optoepr {

struct OutputRow {
  double omega_rads = 0.0;
  double omega_over_gamma = 0.0;
  double n = 0.0;
  double k_x = 0.0;
  double epr_variance = 0.0;
  double S_db = 0.0;
  double eof = 0.0;
  double log_negativity = 0.0;
  std::string model;
  std::string flags;           // ';'-separated
  std::vector<double> extra;   // one value per Table::extra_columns entry

  bool operator==(const OutputRow&) const = default;
};

/// Rows plus any trailing columns beyond the fixed schema (sweep value,
/// per-model deviations).
struct Table {
  std::vector<std::string> extra_columns;
  std::vector<OutputRow> rows;
};

/// The fixed leading columns, in order.
const std::vector<std::string>& base_columns();

/// Failed rows carry NaN metrics and an "error" flag.
OutputRow to_output_row(const SpectrumPoint& point, double gamma, ModelKind model);

/// Doubles use 17 significant digits; non-finite values are written as nan/inf
/// in CSV and null in JSON. Throws ConfigError if a row's extra values do not
/// match the extra columns.
void write_rows(const Table& table, OutputFormat format, std::ostream& out);

/// Writes to `path`, or standard output when `path` is empty or "-". Throws IoError.
void emit_rows(const Table& table, OutputFormat format, const std::string& path);

/// Reads rows written by write_rows in JSON-lines format. Extra columns are
/// taken from the first row, in file order. Throws IoError on malformed input.
Table read_jsonlines(std::istream& in);

/// Named scalar results (derive, optimum, occupation).
using RecordValue = std::variant<double, std::string, bool>;
using Record = std::vector<std::pair<std::string, RecordValue>>;

/// CSV: "key,value" header then one line per field. JSON lines: one object.
void write_record(const Record& record, OutputFormat format, std::ostream& out);
void emit_record(const Record& record, OutputFormat format, const std::string& path);

}  // namespace optoepr
