#include "qcflab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qcflab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
  if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
  return std::get<std::string>(cell);
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string cell_json(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) {
    const double v = std::get<double>(cell);
    if (std::isfinite(v)) return format_double(v);
    return std::string("\"") + (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")) + "\"";
  }
  if (std::holds_alternative<long long>(cell)) return std::to_string(std::get<long long>(cell));
  return "\"" + json_escape(std::get<std::string>(cell)) + "\"";
}

}  // namespace

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << csv_escape(table.columns[c]);
  out << "\n";
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(cell_text(row[c]));
    out << "\n";
  }
  return out.str();
}

std::string to_json(const Table& table) {
  std::ostringstream out;
  out << "[";
  for (size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n " : "\n ") << "{";
    for (size_t c = 0; c < table.rows[r].size(); ++c) {
      out << (c ? ", " : "") << "\"" << json_escape(table.columns[c])
          << "\": " << cell_json(table.rows[r][c]);
    }
    out << "}";
  }
  out << "\n]\n";
  return out.str();
}

}  // namespace qcflab
