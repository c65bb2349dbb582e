// Acceptance run: one PASS/FAIL line per criterion. Exits 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "hypolab/cli/config.hpp"
#include "hypolab/cli/experiments.hpp"
#include "hypolab/cli/report.hpp"
#include "hypolab/grid.hpp"
#include "hypolab/opalg.hpp"
#include "hypolab/parallel.hpp"
#include "hypolab/singular.hpp"

using namespace hypolab;
using namespace hypolab::cli;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> experiments;
  double runtime_limit;  // seconds
};

const std::vector<Criterion> kCriteria = {
    {1, "symbolic suite", {"bracket-check", "hyp-set"}, 1.0},
    {2, "solver convergence", {"thm1-gain", "p-gain", "polarized", "hypo-system"}, 120.0},
    {3, "Grushin regularity probe", {"thm1-gain"}, 300.0},
    {4, "counterexample suite", {"counterexample"}, 60.0},
    {5, "kernel decay", {"kernel-decay"}, 300.0},
    {6, "P-operator gain", {"p-gain"}, 300.0},
    {7, "2x2 system in H1", {"hypo-system"}, 180.0},
    {8, "wavefront asymmetry", {"wavefront"}, 120.0},
};

std::string describe(const Check& c) {
  char buf[256];
  if (c.op == "near")
    std::snprintf(buf, sizeof buf, "%.6g near %.6g +- %.3g", c.value, c.target, c.tol);
  else if (c.op == "info")
    std::snprintf(buf, sizeof buf, "%.6g (recorded)", c.value);
  else
    std::snprintf(buf, sizeof buf, "%.6g %s %.6g", c.value, c.op.c_str(), c.target);
  return buf;
}

nlohmann::json stable(const Report& r) {
  auto j = r.to_json();
  j.erase("wall_time");
  return j;
}

Report run(const std::string& name, std::map<std::string, std::string> overrides = {}) {
  Config c;
  for (const auto& [k, v] : overrides) c.set(k, v);
  return run_experiment(name, c);
}

}  // namespace

int main() {
  std::map<std::string, Report> reports;
  for (const auto& e : experiments()) reports[e.name] = run(e.name);

  bool all = true;
  for (const auto& cr : kCriteria) {
    std::vector<Check> checks;
    double wall = 0;
    std::vector<std::string> counted;
    for (const auto& name : cr.experiments) {
      const Report& r = reports.at(name);
      for (const auto& c : r.checks)
        if (c.criterion == cr.id) checks.push_back(c);
      if (cr.id != 2) wall += r.wall_time;
    }
    std::vector<std::string> notes;
    if (cr.id == 1) {
      // Literal determinant claim, A = [[dx, x dy], [-x dy, dx]] against -g.
      auto A = opalg::parse_operator("[[dx, x*dy], [-x*dy, dx]]");
      auto g = opalg::principal_symbol(opalg::parse_scalar("dx^2 + x^2*dy^2"), 2);
      auto det = opalg::det_symbol(A, {1, 1});
      Check c;
      c.criterion = 1;
      c.name = "det_symbol(A) = -g";
      c.op = "eq";
      c.value = det == -g ? 1 : 0;
      c.target = 1;
      c.pass = c.value == 1;
      checks.push_back(c);
      notes.push_back("det_symbol(A) = " + det.to_string() + " and g = " + g.to_string() +
                      "; the determinant equals +g, not -g");
    }
    if (cr.id == 2) {
      // Only the convergence parts count against the two-minute budget.
      wall = reports.at("polarized").wall_time + reports.at("hypo-system").wall_time;
      notes.push_back("polarized_reduction is spectral (error ~1e-14 at every N); its ratio is not applicable");
    }
    if (cr.id == 5) notes.push_back("the sampled sup first rises with p at delta = 1/4 (maximum near p = 16)");

    int failed = 0;
    for (const auto& c : checks) failed += (c.op != "info" && !c.pass);
    bool time_ok = wall < cr.runtime_limit;
    bool pass = failed == 0 && time_ok && !checks.empty();
    all = all && pass;
    std::printf("criterion %d: %s  %s (%zu checks, %d failed; %.2f s, limit %.0f s)\n", cr.id, pass ? "PASS" : "FAIL",
                cr.title.c_str(), checks.size(), failed, wall, cr.runtime_limit);
    for (const auto& c : checks)
      std::printf("    %s %s: %s\n", c.op == "info" ? "info" : c.pass ? "ok  " : "FAIL", c.name.c_str(),
                  describe(c).c_str());
    if (!time_ok) std::printf("    FAIL runtime over the limit\n");
    if (failed > 0 || cr.id == 2)
      for (const auto& n : notes) std::printf("    note: %s\n", n.c_str());
  }

  // Criterion 9: infrastructure.
  {
    std::vector<std::pair<std::string, bool>> items;
    std::string detail;

    grid::Box box = grid::Box::square(16 * 3.141592653589793, 256);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    std::vector<grid::cplx> vals(box.size());
    for (auto& v : vals) v = {nd(rng), nd(rng)};
    grid::GridField f(box, vals);
    auto pieces = grid::conical_partition(f);
    grid::GridField sum = pieces[0];
    for (int j = 1; j < 5; ++j) sum = sum + pieces[j];
    double rec = (sum - f).max_abs() / f.max_abs();
    char buf[96];
    std::snprintf(buf, sizeof buf, "partition reconstruction %.3g <= 1e-12", rec);
    items.emplace_back(buf, rec <= 1e-12);

    int saved = thread_count();
    std::map<std::string, std::string> kd = {{"p_list", "4,8,16"}, {"samples", "64"}, {"seed", "5"}};
    bool same = true;
    for (const std::string name : {"kernel-decay", "hypo-system", "wavefront"}) {
      set_thread_count(1);
      auto a = stable(run(name, name == "kernel-decay" ? kd : std::map<std::string, std::string>{}));
      set_thread_count(3);
      auto b = stable(run(name, name == "kernel-decay" ? kd : std::map<std::string, std::string>{}));
      if (a.dump() != b.dump()) {
        same = false;
        detail += " " + name;
      }
    }
    set_thread_count(saved);
    items.emplace_back("reports identical at 1 and 3 threads" + (same ? std::string() : " (differ:" + detail + ")"),
                       same);

    grid::GridField u = singular::realize_u1({singular::ChiSpec::smooth_bump(1, 4), 0.3}, grid::Box::make(16, 50, 128, 256));
    std::stringstream s1, s2;
    grid::write_field(s1, u);
    grid::GridField back = grid::read_field(s1);
    grid::write_field(s2, back);
    bool exact = back.box() == u.box() && back.values().size() == u.values().size() &&
                 std::memcmp(back.values().data(), u.values().data(), u.values().size_bytes()) == 0 && s1.str() == s2.str();
    items.emplace_back("field snapshot round trip bit-exact", exact);

    bool pass = true;
    for (const auto& [n, ok] : items) pass = pass && ok;
    all = all && pass;
    std::printf("criterion 9: %s  infrastructure (%zu checks)\n", pass ? "PASS" : "FAIL", items.size());
    for (const auto& [n, ok] : items) std::printf("    %s %s\n", ok ? "ok  " : "FAIL", n.c_str());
  }

  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
