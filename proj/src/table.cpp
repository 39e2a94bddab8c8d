#include "ionramp/table.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ionramp/types.hpp"

namespace ionramp {

std::size_t ResultTable::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("result table has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double ResultTable::number(std::size_t row, const std::string& name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* l = std::get_if<long>(&cell)) return static_cast<double>(*l);
  throw std::invalid_argument("column '" + name + "' is not numeric");
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", *d);
    return buf;
  }
  if (const auto* l = std::get_if<long>(&cell)) return std::to_string(*l);
  return std::get<std::string>(cell);
}

namespace {

// Fields holding a comma, quote or newline are quoted, with embedded quotes doubled.
std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        in_quotes = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

}  // namespace

void write_csv(const ResultTable& table, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& line : table.metadata) out << "# " << line << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << quoted(table.columns[c]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << quoted(format_cell(row[c]));
    out << '\n';
  }
}

namespace {

Cell parse_cell(const std::string& field) {
  double value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec == std::errc() && ptr == end && !field.empty()) return value;
  return field;
}

}  // namespace

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  ResultTable table;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      table.metadata.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    auto fields = split_fields(line);
    if (!header) {
      table.columns = std::move(fields);
      header = true;
    } else {
      std::vector<Cell> row;
      for (const auto& f : fields) row.push_back(parse_cell(f));
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace ionramp
