#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace cooprad {

/// Parsed `key = value` run-configuration file. Lines starting with `#` and
/// blank lines are ignored; duplicate keys are a parse error.
class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& key) const;
  /// Getters throw ValidationError on missing key or unparsable value;
  /// the _or variants fall back to a default when the key is absent.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace cooprad
