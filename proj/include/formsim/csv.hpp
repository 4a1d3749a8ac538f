#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "formsim/simlog.hpp"

namespace formsim {

// Values print with 17 significant digits so a parse round-trip is
// bit-exact and recomputed metrics match the in-memory run.
inline void write_csv(const SimLog& log, std::ostream& out) {
  const auto& cols = log.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out << ',';
    out << cols[i];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : log.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      out << buf;
    }
    out << '\n';
  }
}

inline std::string to_csv_string(const SimLog& log) {
  std::ostringstream out;
  write_csv(log, out);
  return out.str();
}

inline SimLog read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) cols.push_back(field);
  }
  SimLog log(cols);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(cols.size());
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      row.push_back(std::strtod(p, &end));
      if (end == p)
        throw std::runtime_error("CSV parse error at line " + std::to_string(line_no));
      p = end;
      if (*p == ',') {
        ++p;
      } else if (*p == '\0' || *p == '\r') {
        break;
      } else {
        throw std::runtime_error("CSV parse error at line " + std::to_string(line_no));
      }
    }
    log.push_row(std::move(row));
  }
  return log;
}

}  // namespace formsim
