#pragma once

// Flat key = value experiment configuration with command-line overrides.

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace hypolab::cli {

class Config {
 public:
  /// Parses `key = value` lines; `#` and `;` start comments. Sections,
  /// duplicate keys and lines without `=` are rejected.
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config parse_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return raw_.count(key) > 0; }
  const std::map<std::string, std::string>& raw() const noexcept { return raw_; }

  // Typed lookups record the resolved value for the report's config echo.
  double get_double(const std::string& key, double def);
  int get_int(const std::string& key, int def);
  std::string get_string(const std::string& key, const std::string& def);
  std::vector<double> get_list(const std::string& key, const std::vector<double>& def);

  /// Throws ConfigError naming every key outside `allowed` (plus the
  /// keys every experiment accepts).
  void reject_unknown(const std::set<std::string>& allowed) const;

  const nlohmann::json& echo() const noexcept { return echo_; }

 private:
  std::map<std::string, std::string> raw_;
  nlohmann::json echo_ = nlohmann::json::object();
};

/// Keys understood by every experiment. `threads` and `output_dir` steer the
/// runner and are not echoed into reports.
const std::set<std::string>& common_keys();

}  // namespace hypolab::cli
