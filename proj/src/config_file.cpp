#include "cooprad/config_file.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "cooprad/errors.hpp"

namespace cooprad {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::size_t offset = 0;
  while (offset < text.size()) {
    const std::size_t eol = text.find('\n', offset);
    const std::size_t len = (eol == std::string::npos ? text.size() : eol) - offset;
    const std::string line = text.substr(offset, len);
    const std::size_t line_offset = offset;
    offset += len + (eol == std::string::npos ? 0 : 1);

    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_offset);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError("empty config key", line_offset);
    if (cfg.entries_.count(key))
      throw ParseError("duplicate config key '" + key + "'", line_offset);
    cfg.entries_[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(text);
}

bool ConfigFile::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string ConfigFile::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ValidationError("missing config key '" + key + "'");
  return it->second;
}

double ConfigFile::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ValidationError("config key '" + key + "' has non-numeric value '" + v + "'");
  return d;
}

std::int64_t ConfigFile::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  char* end = nullptr;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() && *end == '\0') return i;
  // allow scientific notation for counts, e.g. pulses = 1e6
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || std::abs(d - std::round(d)) > 1e-6)
    throw ValidationError("config key '" + key + "' has non-integer value '" + v + "'");
  return static_cast<std::int64_t>(std::llround(d));
}

std::string ConfigFile::get_string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double ConfigFile::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t ConfigFile::get_int_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

}  // namespace cooprad
