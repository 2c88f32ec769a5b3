#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tweetsense::csv {

using Row = std::vector<std::string>;

// RFC-4180 reader. Handles quoted fields with embedded commas, doubled
// quotes and line breaks; accepts both CRLF and LF record terminators.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the next record. Returns std::nullopt at end of input.
  // Throws std::runtime_error on an unterminated quoted field.
  std::optional<Row> next();

  // 1-based physical line on which the most recently returned record began.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t current_line_ = 1;
  std::size_t record_line_ = 0;
};

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

// Writes one record terminated by "\r\n".
void write_row(std::ostream& out, const Row& row);

std::vector<Row> parse(std::string_view text);

}  // namespace tweetsense::csv
