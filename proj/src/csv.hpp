#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace amlnet::csv {

struct Row {
  std::size_t number = 0;  // 1-based data row
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

/// RFC 4180-style reader: quoted fields, doubled quotes, CRLF tolerant.
/// Blank lines are skipped. An empty stream yields an empty table.
Table read(std::istream& in);

/// Maps the required column names to header positions; throws
/// ValidationError naming the first absent column.
std::vector<std::size_t> require_columns(
    const Table& table, std::span<const std::string_view> names);

std::optional<std::string> optional_field(const std::string& cell);

void write_field(std::ostream& out, std::string_view field);
void write_row(std::ostream& out, std::span<const std::string> fields);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace amlnet::csv
