#ifndef IONRAMP_TABLE_HPP
#define IONRAMP_TABLE_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace ionramp {

using Cell = std::variant<double, long, std::string>;

// CSV result: '#'-prefixed metadata lines, a mandatory header row, then data rows.
struct ResultTable {
  std::vector<std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
  double number(std::size_t row, const std::string& name) const;
};

std::string format_cell(const Cell& cell);

void write_csv(const ResultTable& table, const std::filesystem::path& path);

// Numeric-looking fields come back as double; everything else as string.
ResultTable read_csv(const std::filesystem::path& path);

}  // namespace ionramp

#endif  // IONRAMP_TABLE_HPP
