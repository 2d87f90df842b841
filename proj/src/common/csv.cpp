#include "dispel/common/csv.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "dispel/common/error.hpp"
#include "dispel/common/kv.hpp"

namespace dispel {

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int CsvTable::require_column(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw ConfigError("missing CSV column '" + name + "'");
  return c;
}

CsvTable CsvTable::parse(const std::string& text, const std::string& origin, const std::vector<std::string>& skip) {
  CsvTable t;
  std::vector<bool> keep;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(1));
      continue;
    }
    auto cells = split(line, ',');
    if (keep.empty()) {
      for (auto& c : cells) {
        const std::string name = trim(c);
        keep.push_back(std::find(skip.begin(), skip.end(), name) == skip.end());
        if (keep.back()) t.header.push_back(name);
      }
      continue;
    }
    if (cells.size() != keep.size())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(keep.size()) +
                        " columns, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(t.header.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (keep[i])
        row.push_back(parse_double(cells[i], origin + ":" + std::to_string(lineno) + ": column '" +
                                                 t.header[row.size()] + "'"));
    t.rows.push_back(std::move(row));
  }
  if (keep.empty()) throw ConfigError(origin + ": no CSV header");
  return t;
}

CsvTable CsvTable::load(const std::string& path, const std::vector<std::string>& skip) {
  return parse(read_file(path), path, skip);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string CsvTable::to_string() const {
  std::string out;
  for (const auto& c : comments) out += "#" + c + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace dispel
