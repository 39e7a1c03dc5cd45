#pragma once

#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "otf/bytes.hpp"

namespace otf {

// One row of the parameter estimator's output table.
struct EstimateRow {
  std::string attack;
  double workfactor_bits = 0;
  double target_bits = 0;
  double delta = 0;
};

/// Reads the estimator table. Accepts comma- or whitespace-separated
/// columns; the header row must name attack, workfactor_bits, target_bits
/// and delta (in any order, extra columns ignored).
inline std::vector<EstimateRow> parse_estimates(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
        if (!cur.empty()) cells.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) cells.push_back(std::move(cur));
    return cells;
  };

  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') continue;
    header = split(line);
  }
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw MalformedError("estimates: missing column " + std::string(name));
  };
  const std::size_t c_attack = column("attack"), c_work = column("workfactor_bits"),
                    c_target = column("target_bits"), c_delta = column("delta");
  const std::size_t need = std::max({c_attack, c_work, c_target, c_delta}) + 1;

  std::vector<EstimateRow> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (cells.empty()) continue;
    if (cells.size() < need) throw MalformedError("estimates: short row: " + line);
    try {
      rows.push_back({cells[c_attack], std::stod(cells[c_work]), std::stod(cells[c_target]),
                      std::stod(cells[c_delta])});
    } catch (const std::logic_error&) {
      throw MalformedError("estimates: non-numeric cell in row: " + line);
    }
  }
  return rows;
}

/// The estimator's agreement band with the published security levels.
inline constexpr double kEstimateBandBits = 16.0;

inline bool within_band(const EstimateRow& r) { return std::fabs(r.delta) <= kEstimateBandBits; }

}  // namespace otf
