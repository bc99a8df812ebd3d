#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace prpr {

/// Shortest round-trip-safe rendering ("%.17g"); NaN and infinities are
/// written as nan, inf, -inf.
std::string format_double(double v);

/// RFC-4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_escape(const std::string& field);

/// Parses one CSV record (RFC-4180 quoting).
std::vector<std::string> csv_split(const std::string& line);

/// A CSV file with a `#`-prefixed `key=value` preamble.
struct ResultTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_meta(std::string key, std::string value);
  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<std::string> row);
  void write(std::ostream& os) const;
  /// Writes to `path`, throwing std::runtime_error if it cannot be opened.
  void write_file(const std::string& path) const;
};

/// The file content without lines that start with "# timestamp".
std::string strip_timestamp(const std::string& content);

}  // namespace prpr
