#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dioph/numerics.hpp"
#include "json.hpp"

namespace dioph::cli {

enum class Format { text, csv, json };

Format parse_format(const std::string& text);

// Lower end rounded down, upper end rounded up, 17 significant digits.
std::string lower_text(const Interval& x);
std::string upper_text(const Interval& x);
std::string midpoint_text(const Interval& x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Header row, then one comma-separated line per row.
void write_csv(std::ostream& os, const Table& table);
// One object per row keyed by the header.
nlohmann::ordered_json rows_json(const Table& table);

}  // namespace dioph::cli
