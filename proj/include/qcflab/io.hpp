#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qcflab {

// Plot-ready tabular output. Floats print with 17 significant digits so that
// emitted tables round-trip bit-exactly.
using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v);
std::string to_csv(const Table& table);   // RFC-4180-style, header mandatory
std::string to_json(const Table& table);  // array of flat objects

}  // namespace qcflab
