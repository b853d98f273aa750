#include "tripchoice/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tripchoice/errors.hpp"

namespace tripchoice {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line, char delimiter) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      cells.emplace_back(trim(line.substr(start)));
      break;
    }
    cells.emplace_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

}  // namespace

Table::Table(std::vector<std::string> header, std::vector<std::vector<std::string>> rows)
    : header_(std::move(header)), rows_(std::move(rows)) {}

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view name, std::string_view table_name) const {
  if (auto c = column(name)) return *c;
  throw DataError(std::string(table_name) + ": missing column '" + std::string(name) + "'");
}

void Table::add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

Table parse_table(std::string_view text, char delimiter) {
  Table table;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto cells = split(line, delimiter);
    if (header.empty()) {
      header = std::move(cells);
    } else {
      if (cells.size() != header.size()) {
        throw DataError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(cells.size()));
      }
      rows.push_back(std::move(cells));
    }
    if (end == text.size()) break;
  }
  return Table(std::move(header), std::move(rows));
}

Table read_table(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_table(buffer.str(), delimiter);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_table(const Table& table, char delimiter) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(delimiter);
      out += row[i];
    }
    out.push_back('\n');
  };
  emit(table.header());
  for (const auto& row : table.rows()) emit(row);
  return out;
}

void write_table(const std::filesystem::path& path, const Table& table, char delimiter) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << format_table(table, delimiter);
}

double parse_double(std::string_view cell, std::string_view where) {
  const std::string_view s = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DataError(std::string(where) + ": not a number '" + std::string(cell) + "'");
  }
  return value;
}

bool parse_bool01(std::string_view cell, std::string_view where) {
  const std::string_view s = trim(cell);
  if (s == "1") return true;
  if (s == "0") return false;
  throw DataError(std::string(where) + ": expected 0/1, found '" + std::string(cell) + "'");
}

}  // namespace tripchoice
