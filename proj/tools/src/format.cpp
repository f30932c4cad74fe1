#include "dioph_cli/format.hpp"

#include "dioph/errors.hpp"

namespace dioph::cli {

Format parse_format(const std::string& text) {
  if (text == "text") return Format::text;
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ParseError("unknown format: " + text);
}

std::string lower_text(const Interval& x) { return x.lo().to_string(17, MPFR_RNDD); }

std::string upper_text(const Interval& x) { return x.hi().to_string(17, MPFR_RNDU); }

std::string midpoint_text(const Interval& x) {
  Float mid(x.precision() + 1);
  mpfr_add(mid.get(), x.lo().get(), x.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  return mid.to_string(17);
}

void write_csv(std::ostream& os, const Table& table) {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

nlohmann::ordered_json rows_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < table.header.size() && i < row.size(); ++i) obj[table.header[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

}  // namespace dioph::cli
