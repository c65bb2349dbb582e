#include "hypolab/cli/report.hpp"

#include <cmath>
#include <cstdio>

#include "hypolab/error.hpp"

namespace hypolab::cli {

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size()) throw InternalError("table '" + name + "': row width mismatch");
  rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& c) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == c) {
      std::vector<double> out;
      for (const auto& r : rows) out.push_back(r[k]);
      return out;
    }
  throw ConfigError("table '" + name + "' has no column '" + c + "'");
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << columns[k];
  out << "\n";
  char buf[40];
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", r[k]);
      out << (k ? "," : "") << buf;
    }
    out << "\n";
  }
}

nlohmann::json Table::to_json() const { return {{"name", name}, {"columns", columns}, {"rows", rows}}; }

Table Table::from_json(const nlohmann::json& j) {
  Table t;
  t.name = j.at("name").get<std::string>();
  t.columns = j.at("columns").get<std::vector<std::string>>();
  t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  return t;
}

nlohmann::json Refit::to_json() const { return {{"table", table}, {"x", x}, {"y", y}, {"invert_x", invert_x}}; }

bool Check::evaluate(const std::string& op, double v, double t, double tol) {
  if (op == "le") return v <= t;
  if (op == "lt") return v < t;
  if (op == "ge") return v >= t;
  if (op == "gt") return v > t;
  if (op == "eq") return v == t;
  if (op == "near") return std::abs(v - t) <= tol;
  if (op == "info") return true;
  throw ConfigError("unknown check relation '" + op + "'");
}

nlohmann::json Check::to_json() const {
  nlohmann::json j = {{"criterion", criterion}, {"name", name}, {"value", value}, {"op", op},
                      {"target", target}, {"tol", tol}, {"pass", pass}};
  if (refit) j["refit"] = refit->to_json();
  if (!note.empty()) j["note"] = note;
  return j;
}

Check& Report::check(int criterion, const std::string& name, double value, const std::string& op, double target,
                     double tol) {
  Check c;
  c.criterion = criterion;
  c.name = name;
  c.value = value;
  c.op = op;
  c.target = target;
  c.tol = tol;
  c.pass = Check::evaluate(op, value, target, tol) && std::isfinite(value);
  checks.push_back(c);
  return checks.back();
}

Check& Report::flag(int criterion, const std::string& name, bool ok) {
  return check(criterion, name, ok ? 1.0 : 0.0, "eq", 1.0);
}

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const Table& Report::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw InternalError("no table '" + name + "'");
}

nlohmann::json Report::to_json() const {
  nlohmann::json cs = nlohmann::json::array(), ts = nlohmann::json::array();
  for (const auto& c : checks) cs.push_back(c.to_json());
  for (const auto& t : tables) ts.push_back(t.to_json());
  return {{"experiment", experiment}, {"config", config}, {"records", records}, {"checks", cs},
          {"tables", ts}, {"artifacts", artifacts}, {"pass", pass()}, {"wall_time", wall_time}};
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys, bool invert_x) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("slope fit needs two or more points");
  double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double X = std::log(invert_x ? 1 / xs[k] : xs[k]), Y = std::log(ys[k]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

VerifyResult verify_report(const nlohmann::json& report) {
  VerifyResult out;
  std::vector<Table> tables;
  for (const auto& t : report.at("tables")) tables.push_back(Table::from_json(t));
  auto find = [&](const std::string& name) -> const Table& {
    for (const auto& t : tables)
      if (t.name == name) return t;
    throw ConfigError("report references missing table '" + name + "'");
  };
  bool all = true;
  for (const auto& c : report.at("checks")) {
    std::string name = c.at("name");
    double value = c.at("value");
    if (c.contains("refit")) {
      const auto& r = c["refit"];
      const Table& t = find(r.at("table"));
      double v = loglog_slope(t.column(r.at("x")), t.column(r.at("y")), r.at("invert_x"));
      if (std::abs(v - value) > 1e-9 * (1 + std::abs(value))) {
        out.consistent = false;
        out.messages.push_back(name + ": stored " + std::to_string(value) + ", refit " + std::to_string(v));
      }
      value = v;
    }
    bool pass = Check::evaluate(c.at("op"), value, c.at("target"), c.at("tol")) && std::isfinite(value);
    if (pass != c.at("pass").get<bool>()) {
      out.consistent = false;
      out.messages.push_back(name + ": stored flag disagrees with the recomputed predicate");
    }
    if (!pass) out.messages.push_back("FAIL " + name);
    all = all && pass;
  }
  if (all != report.at("pass").get<bool>()) {
    out.consistent = false;
    out.messages.push_back("overall pass flag disagrees with the checks");
  }
  out.pass = all;
  return out;
}

}  // namespace hypolab::cli
