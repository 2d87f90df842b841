#include "dispel/common/kv.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dispel/common/error.hpp"

namespace dispel {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(context + ": empty numeric value");
  char* end = nullptr;
  // Underflow to a subnormal is a valid value; overflow shows up as infinity.
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v))
    throw ConfigError(context + ": not a finite number '" + t + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError(context + ": range must be start:stop:step");
    const double a = parse_double(parts[0], context);
    const double b = parse_double(parts[1], context);
    const double step = parse_double(parts[2], context);
    if (step <= 0 || b < a) throw ConfigError(context + ": range needs step > 0 and stop >= start");
    // Count on the rounded number of steps so 0.5:0.9:0.1 yields 5 values.
    const long n = std::lround(std::floor((b - a) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(t, ',')) out.push_back(parse_double(p, context));
  return out;
}

KeyValues KeyValues::parse(const std::string& text, const std::string& origin) {
  KeyValues kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (kv.values_.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv.values_[key] = trim(line.substr(eq + 1));
    kv.lines_[key] = lineno;
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) { return parse(read_file(path), path); }

const std::string& KeyValues::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin_ + ": missing key '" + key + "'");
  return it->second;
}

std::string KeyValues::str_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double KeyValues::num(const std::string& key) const {
  const auto it = lines_.find(key);
  const std::string ctx = origin_ + (it != lines_.end() ? ":" + std::to_string(it->second) : "") + ": " + key;
  return parse_double(str(key), ctx);
}

double KeyValues::num_or(const std::string& key, double fallback) const {
  return has(key) ? num(key) : fallback;
}

long KeyValues::integer(const std::string& key) const {
  const double v = num(key);
  if (v != std::floor(v)) throw ConfigError(origin_ + ": " + key + " must be an integer");
  return static_cast<long>(v);
}

long KeyValues::integer_or(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::vector<double> KeyValues::list(const std::string& key) const {
  return parse_list(str(key), origin_ + ": " + key);
}

std::vector<double> KeyValues::list_or(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? list(key) : fallback;
}

void KeyValues::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [k, v] : values_) {
    if (!allowed.count(k)) {
      const auto it = lines_.find(k);
      throw ConfigError(origin_ + (it != lines_.end() ? ":" + std::to_string(it->second) : "") +
                        ": unknown key '" + k + "'");
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace dispel
