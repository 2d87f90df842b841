#pragma once

#include <string>
#include <vector>

namespace dispel {

// Minimal numeric CSV table: header row plus rows of doubles. Lines starting
// with '#' are comments and are kept so manifests survive a round trip.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
  int require_column(const std::string& name) const;

  // Columns named in `skip` are dropped, so text columns can be read past.
  static CsvTable parse(const std::string& text, const std::string& origin, const std::vector<std::string>& skip = {});
  static CsvTable load(const std::string& path, const std::vector<std::string>& skip = {});
  std::string to_string() const;
};

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace dispel
