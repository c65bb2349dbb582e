#include "hypolab/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hypolab/error.hpp"

namespace hypolab::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  double out = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

}  // namespace

const std::set<std::string>& common_keys() {
  static const std::set<std::string> k = {"experiment", "seed", "threads", "output_dir"};
  return k;
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    auto where = source + ":" + std::to_string(no);
    if (line.front() == '[') throw ConfigError(where + ": sections are not supported (flat key = value only)");
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (c.raw_.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    c.raw_[key] = value;
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (trim(key).empty()) throw ConfigError("empty override key");
  raw_[trim(key)] = trim(value);
}

double Config::get_double(const std::string& key, double def) {
  double v = has(key) ? to_double(key, raw_.at(key)) : def;
  echo_[key] = v;
  return v;
}

int Config::get_int(const std::string& key, int def) {
  double v = has(key) ? to_double(key, raw_.at(key)) : def;
  if (!(std::abs(v) < 2147483647.0) || v != std::floor(v)) throw ConfigError("key '" + key + "': expected an integer");
  echo_[key] = static_cast<int>(v);
  return static_cast<int>(v);
}

std::string Config::get_string(const std::string& key, const std::string& def) {
  std::string v = has(key) ? raw_.at(key) : def;
  echo_[key] = v;
  return v;
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& def) {
  std::vector<double> out = def;
  if (has(key)) {
    out.clear();
    std::stringstream ss(raw_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  }
  echo_[key] = out;
  return out;
}

void Config::reject_unknown(const std::set<std::string>& allowed) const {
  std::string bad;
  for (const auto& [k, v] : raw_)
    if (!allowed.count(k) && !common_keys().count(k)) bad += (bad.empty() ? "" : ", ") + k;
  if (!bad.empty()) {
    std::string ok;
    for (const auto& k : allowed) ok += (ok.empty() ? "" : ", ") + k;
    throw ConfigError("unknown key(s): " + bad + " (accepted: " + ok + ")");
  }
}

}  // namespace hypolab::cli
