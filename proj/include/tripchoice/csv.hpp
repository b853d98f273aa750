#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tripchoice {

/// A delimited text table held in memory: a header row plus string cells.
/// Quoting is not supported; cells may not contain the delimiter.
class Table {
 public:
  Table() = default;
  Table(std::vector<std::string> header, std::vector<std::vector<std::string>> rows);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  std::optional<std::size_t> column(std::string_view name) const;
  /// Like column() but throws DataError naming the table when absent.
  std::size_t require_column(std::string_view name, std::string_view table_name) const;

  void add_row(std::vector<std::string> row);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

Table parse_table(std::string_view text, char delimiter = ',');
Table read_table(const std::filesystem::path& path, char delimiter = ',');
std::string format_table(const Table& table, char delimiter = ',');
void write_table(const std::filesystem::path& path, const Table& table, char delimiter = ',');

/// Numeric cell parsing with row/column context in the error message.
double parse_double(std::string_view cell, std::string_view where);
bool parse_bool01(std::string_view cell, std::string_view where);

}  // namespace tripchoice
