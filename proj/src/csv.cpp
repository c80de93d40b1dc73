#include "csv.hpp"

#include <algorithm>

#include "amlnet/error.hpp"

namespace amlnet::csv {

namespace {

bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (quoted) throw ValidationError("unterminated quoted field");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields.front()).empty();
}

}  // namespace

Table read(std::istream& in) {
  Table table;
  std::vector<std::string> fields;
  bool have_header = false;
  std::size_t data_row = 0;
  while (read_record(in, fields)) {
    if (blank(fields)) continue;
    if (!have_header) {
      for (auto& f : fields) f = trim(f);
      // Strip a UTF-8 byte order mark from the first column name.
      if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) {
        fields[0].erase(0, 3);
      }
      table.header = fields;
      have_header = true;
      continue;
    }
    ++data_row;
    table.rows.push_back(Row{data_row, fields});
  }
  return table;
}

std::vector<std::size_t> require_columns(
    const Table& table, std::span<const std::string_view> names) {
  std::vector<std::size_t> positions;
  positions.reserve(names.size());
  for (auto name : names) {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
      throw ValidationError("missing column '" + std::string(name) + "'");
    }
    positions.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  return positions;
}

std::optional<std::string> optional_field(const std::string& cell) {
  std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  return t;
}

void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    write_field(out, fields[i]);
  }
  out << '\n';
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace amlnet::csv
