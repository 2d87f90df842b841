#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace dispel {

// Flat `key=value` records. One record per line, '#' starts a comment.
class KeyValues {
 public:
  KeyValues() = default;

  static KeyValues parse(const std::string& text, const std::string& origin = "<text>");
  static KeyValues load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& str(const std::string& key) const;
  std::string str_or(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  double num_or(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer_or(const std::string& key, long fallback) const;

  // Numeric list: either comma separated values or `start:stop:step` (inclusive stop).
  std::vector<double> list(const std::string& key) const;
  std::vector<double> list_or(const std::string& key, std::vector<double> fallback) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  // Throws ConfigError naming the first key not in `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  const std::map<std::string, std::string>& items() const { return values_; }
  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string origin_;
};

double parse_double(const std::string& text, const std::string& context);
std::vector<double> parse_list(const std::string& text, const std::string& context);
std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dispel
