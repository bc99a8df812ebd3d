#include "prpr/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace prpr {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

void ResultTable::add_meta(std::string key, std::string value) {
  meta.emplace_back(std::move(key), std::move(value));
}

void ResultTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("ResultTable: row has " + std::to_string(row.size()) +
                                " fields, header has " + std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

void ResultTable::write(std::ostream& os) const {
  for (const auto& [k, v] : meta) {
    // Keep the preamble one line per entry.
    std::string flat = v;
    for (char& c : flat)
      if (c == '\n' || c == '\r') c = ' ';
    os << "# " << k << '=' << flat << '\n';
  }
  const auto emit = [&os](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << csv_escape(fields[i]);
    }
    os << '\n';
  };
  emit(columns);
  for (const auto& r : rows) emit(r);
}

void ResultTable::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f);
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

std::string strip_timestamp(const std::string& content) {
  std::istringstream in(content);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp", 0) == 0) continue;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace prpr
