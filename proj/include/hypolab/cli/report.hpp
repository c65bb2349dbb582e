#pragma once

// Experiment reports: pass/fail checks, numeric tables and their JSON form.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace hypolab::cli {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
  std::vector<double> column(const std::string& c) const;
  void write_csv(std::ostream& out) const;
  nlohmann::json to_json() const;
  static Table from_json(const nlohmann::json& j);
};

/// How a check value is recomputed from a stored table by `verify`.
struct Refit {
  std::string table;
  std::string x, y;
  bool invert_x = false;  // fit against log(1/x)
  nlohmann::json to_json() const;
};

/// One pass predicate. `op` is le, lt, ge, gt, eq, near (|value − target| ≤ tol),
/// or info (recorded only, never fails).
struct Check {
  int criterion = 0;
  std::string name;
  double value = 0;
  std::string op = "le";
  double target = 0;
  double tol = 0;
  bool pass = false;
  std::optional<Refit> refit;
  std::string note;

  static bool evaluate(const std::string& op, double value, double target, double tol);
  nlohmann::json to_json() const;
};

struct PlotSpec {
  std::string file;
  std::string table;
  std::string kind;  // loglog, line, heatmap
  std::string title;
};

struct Report {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json records = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<Table> tables;
  std::vector<PlotSpec> plots;
  std::vector<std::string> artifacts;
  double wall_time = 0;

  /// Appends a check and evaluates it.
  Check& check(int criterion, const std::string& name, double value, const std::string& op, double target,
               double tol = 0);
  Check& flag(int criterion, const std::string& name, bool ok);
  bool pass() const;
  const Table& table(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Least-squares slope of log y against log x (or log(1/x)).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, bool invert_x = false);

struct VerifyResult {
  bool consistent = true;  // stored values and flags match the recomputation
  bool pass = true;
  std::vector<std::string> messages;
};

/// Re-evaluates every stored check, refitting slopes from stored tables.
VerifyResult verify_report(const nlohmann::json& report);

}  // namespace hypolab::cli
