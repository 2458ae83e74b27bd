#include "optoepr/emit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "optoepr/errors.hpp"

namespace optoepr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_number(double x) { return fmt::format("{:.17g}", x); }

std::string json_number(double x) { return std::isfinite(x) ? fmt::format("{:.17g}", x) : "null"; }

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::vector<double> numeric_fields(const OutputRow& r) {
  return {r.omega_rads, r.omega_over_gamma, r.n,    r.k_x,
          r.epr_variance, r.S_db,           r.eof, r.log_negativity};
}

double read_number(const nlohmann::ordered_json& v, const std::string& key) {
  if (v.is_null()) return kNaN;
  if (!v.is_number()) throw IoError("field '" + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

const std::vector<std::string>& base_columns() {
  static const std::vector<std::string> columns{
      "omega_rads", "omega_over_gamma", "n",     "k_x",  "epr_variance",
      "S_db",       "eof",              "log_negativity", "model", "flags"};
  return columns;
}

OutputRow to_output_row(const SpectrumPoint& point, double gamma, ModelKind model) {
  OutputRow r;
  r.omega_rads = point.omega;
  r.omega_over_gamma = point.omega / gamma;
  r.model = to_string(model);
  std::vector<std::string> flags = point.flags;
  // An asymmetric state keeps its covariance metrics; any other error has none.
  const bool asymmetric =
      std::find(point.flags.begin(), point.flags.end(), "asymmetric") != point.flags.end();
  const bool failed = !point.ok() && !asymmetric;
  if (failed) {
    r.n = r.k_x = r.epr_variance = r.S_db = r.eof = r.log_negativity = kNaN;
    flags.emplace_back("error");
  } else {
    r.n = point.form.n;
    r.k_x = point.form.k_x;
    r.epr_variance = point.metrics.epr_variance;
    r.S_db = point.metrics.S_db;
    r.eof = point.metrics.eof;
    r.log_negativity = point.metrics.log_negativity;
  }
  for (std::size_t i = 0; i < flags.size(); ++i) r.flags += (i ? ";" : "") + flags[i];
  return r;
}

void write_rows(const Table& table, OutputFormat format, std::ostream& out) {
  const auto& base = base_columns();
  for (const auto& row : table.rows) {
    if (row.extra.size() != table.extra_columns.size()) {
      throw ConfigError("row has a different number of extra values than the table has columns");
    }
  }
  if (format == OutputFormat::Csv) {
    std::string header;
    for (const auto& c : base) header += (header.empty() ? "" : ",") + c;
    for (const auto& c : table.extra_columns) header += "," + c;
    out << header << '\n';
    for (const auto& row : table.rows) {
      std::string line;
      for (double x : numeric_fields(row)) line += csv_number(x) + ",";
      line += row.model + "," + row.flags;
      for (double x : row.extra) line += "," + csv_number(x);
      out << line << '\n';
    }
  } else {
    for (const auto& row : table.rows) {
      const auto values = numeric_fields(row);
      std::string line = "{";
      for (std::size_t i = 0; i < values.size(); ++i) {
        line += json_string(base[i]) + ":" + json_number(values[i]) + ",";
      }
      line += json_string("model") + ":" + json_string(row.model) + ",";
      line += json_string("flags") + ":" + json_string(row.flags);
      for (std::size_t i = 0; i < row.extra.size(); ++i) {
        line += "," + json_string(table.extra_columns[i]) + ":" + json_number(row.extra[i]);
      }
      out << line << "}\n";
    }
  }
  if (!out) throw IoError("write failed");
}

namespace {

template <class Writer>
void to_destination(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write(file);
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace

void write_record(const Record& record, OutputFormat format, std::ostream& out) {
  auto text = [&](const RecordValue& v, bool json) -> std::string {
    if (const double* x = std::get_if<double>(&v)) return json ? json_number(*x) : csv_number(*x);
    if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    const auto& s = std::get<std::string>(v);
    return json ? json_string(s) : s;
  };
  if (format == OutputFormat::Csv) {
    out << "key,value\n";
    for (const auto& [key, value] : record) out << key << ',' << text(value, false) << '\n';
  } else {
    std::string line = "{";
    for (std::size_t i = 0; i < record.size(); ++i) {
      line += (i ? "," : "") + json_string(record[i].first) + ":" + text(record[i].second, true);
    }
    out << line << "}\n";
  }
  if (!out) throw IoError("write failed");
}

void emit_rows(const Table& table, OutputFormat format, const std::string& path) {
  to_destination(path, [&](std::ostream& out) { write_rows(table, format, out); });
}

void emit_record(const Record& record, OutputFormat format, const std::string& path) {
  to_destination(path, [&](std::ostream& out) { write_record(record, format, out); });
}

Table read_jsonlines(std::istream& in) {
  Table table;
  const auto& base = base_columns();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(fmt::format("line {}: {}", line_no, e.what()));
    }
    if (!obj.is_object()) throw IoError(fmt::format("line {}: expected an object", line_no));
    for (const auto& key : base) {
      if (!obj.contains(key)) throw IoError(fmt::format("line {}: missing field '{}'", line_no, key));
    }
    if (table.rows.empty()) {
      for (const auto& [key, value] : obj.items()) {
        if (std::find(base.begin(), base.end(), key) == base.end()) {
          table.extra_columns.push_back(key);
        }
      }
    }
    OutputRow r;
    r.omega_rads = read_number(obj["omega_rads"], "omega_rads");
    r.omega_over_gamma = read_number(obj["omega_over_gamma"], "omega_over_gamma");
    r.n = read_number(obj["n"], "n");
    r.k_x = read_number(obj["k_x"], "k_x");
    r.epr_variance = read_number(obj["epr_variance"], "epr_variance");
    r.S_db = read_number(obj["S_db"], "S_db");
    r.eof = read_number(obj["eof"], "eof");
    r.log_negativity = read_number(obj["log_negativity"], "log_negativity");
    if (!obj["model"].is_string() || !obj["flags"].is_string()) {
      throw IoError(fmt::format("line {}: model and flags must be strings", line_no));
    }
    r.model = obj["model"].get<std::string>();
    r.flags = obj["flags"].get<std::string>();
    for (const auto& key : table.extra_columns) {
      if (!obj.contains(key)) throw IoError(fmt::format("line {}: missing field '{}'", line_no, key));
      r.extra.push_back(read_number(obj[key], key));
    }
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace optoepr
