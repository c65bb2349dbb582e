// hypolab: run experiments, list them, verify stored reports.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hypolab/cli/config.hpp"
#include "hypolab/cli/experiments.hpp"
#include "hypolab/cli/output.hpp"
#include "hypolab/cli/report.hpp"
#include "hypolab/error.hpp"
#include "hypolab/parallel.hpp"

using namespace hypolab;
using namespace hypolab::cli;

namespace {

// Leftover `--key value` / `--key=value` tokens become config overrides.
void apply_overrides(Config& cfg, const std::vector<std::string>& extras) {
  for (std::size_t k = 0; k < extras.size(); ++k) {
    std::string t = extras[k];
    if (t.rfind("--", 0) != 0 || t.size() < 3) throw ConfigError("unexpected argument '" + t + "'");
    t = t.substr(2);
    auto eq = t.find('=');
    if (eq != std::string::npos) {
      cfg.set(t.substr(0, eq), t.substr(eq + 1));
    } else {
      if (k + 1 >= extras.size()) throw ConfigError("missing value for --" + t);
      cfg.set(t, extras[++k]);
    }
  }
}

int run(const std::string& name, const std::string& config_path, int threads, const std::string& out_dir,
        bool no_write, const std::vector<std::string>& extras) {
  Config cfg = config_path.empty() ? Config{} : Config::parse_file(config_path);
  apply_overrides(cfg, extras);
  if (cfg.has("experiment") && cfg.raw().at("experiment") != name)
    throw ConfigError("config names experiment '" + cfg.raw().at("experiment") + "' but '" + name + "' was requested");
  if (threads == 0 && cfg.has("threads")) threads = std::stoi(cfg.raw().at("threads"));
  if (threads > 0) set_thread_count(threads);
  std::string dir = out_dir.empty() && cfg.has("output_dir") ? cfg.raw().at("output_dir") : out_dir;

  Report r = run_experiment(name, cfg);
  for (const auto& c : r.checks) {
    std::cout << (c.op == "info" ? "INFO" : c.pass ? "PASS" : "FAIL") << "  [" << c.criterion << "] " << c.name << ": "
              << c.value;
    if (c.op != "info") std::cout << " " << c.op << " " << c.target;
    if (c.op == "near") std::cout << " +- " << c.tol;
    std::cout << "\n";
  }
  if (!no_write) std::cout << "wrote " << write_run(r, output_root(dir)).string() << "\n";
  std::cout << name << ": " << (r.pass() ? "PASS" : "FAIL") << "\n";
  return r.pass() ? 0 : 1;
}

int verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  auto v = verify_report(j);
  for (const auto& m : v.messages) std::cout << m << "\n";
  std::cout << (v.consistent ? "consistent" : "INCONSISTENT") << ", " << (v.pass ? "PASS" : "FAIL") << "\n";
  return v.consistent && v.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypolab: numerical experiments on hypoelliptic operators"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list experiments");

  auto* runc = app.add_subcommand("run", "run one experiment; extra --key value pairs override the config");
  std::string name, config_path, out_dir;
  int threads = 0;
  bool no_write = false;
  runc->add_option("experiment", name, "experiment name")->required();
  runc->add_option("-c,--config", config_path, "key = value config file");
  runc->add_option("-j,--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
  runc->add_option("-o,--output-dir", out_dir, "output root (default $HYPOLAB_OUTPUT_DIR or ./hypolab-out)");
  runc->add_flag("--no-write", no_write, "print checks only");
  runc->allow_extras();

  auto* ver = app.add_subcommand("verify", "re-check a stored report.json");
  std::string report_path;
  ver->add_option("report", report_path, "path to report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      for (const auto& e : experiments()) {
        std::cout << e.name << "  (criteria";
        for (int c : e.criteria) std::cout << " " << c;
        std::cout << ")\n    " << e.claim << "\n";
      }
      return 0;
    }
    if (*runc) return run(name, config_path, threads, out_dir, no_write, runc->remaining());
    return verify(report_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
