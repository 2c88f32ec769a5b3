#include "tweetsense/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tweetsense::csv {

std::optional<Row> Reader::next() {
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return std::nullopt;

  record_line_ = current_line_;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (in_quotes) {
        throw std::runtime_error("csv: unterminated quoted field starting on line " +
                                 std::to_string(record_line_));
      }
      row.push_back(std::move(field));
      return row;
    }
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++current_line_;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (field.empty() && !field_was_quoted) {
          in_quotes = true;
          field_was_quoted = true;
        } else {
          // Stray quote inside an unquoted field: keep it literally.
          field.push_back(ch);
        }
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        break;
      case '\r':
        if (in_.peek() == '\n') in_.get();
        [[fallthrough]];
      case '\n':
        ++current_line_;
        row.push_back(std::move(field));
        return row;
      default:
        field.push_back(ch);
    }
  }
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out << ',';
    out << escape_field(row[i]);
  }
  out << "\r\n";
}

std::vector<Row> parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  Reader reader(in);
  std::vector<Row> rows;
  while (auto row = reader.next()) rows.push_back(std::move(*row));
  return rows;
}

}  // namespace tweetsense::csv
