#include "hypolab/cli/output.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "hypolab/cli/plot.hpp"
#include "hypolab/error.hpp"

namespace hypolab::cli {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw InternalError("SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

fs::path output_root(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("HYPOLAB_OUTPUT_DIR"); env && *env) return env;
  return "hypolab-out";
}

fs::path write_run(Report& report, const fs::path& root) {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%SZ", &tm);
  fs::create_directories(root);
  fs::path dir = root / (report.experiment + "-" + stamp);
  for (int k = 1; fs::exists(dir); ++k) dir = root / (report.experiment + "-" + stamp + "-" + std::to_string(k));
  fs::create_directory(dir);

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& t : report.tables) {
    std::ostringstream os;
    t.write_csv(os);
    files.emplace_back(t.name + ".csv", os.str());
  }
  for (const auto& p : report.plots) files.emplace_back(p.file, render_svg(report.table(p.table), plot_kind_from_string(p.kind), p.title));
  report.artifacts.clear();
  for (const auto& [name, body] : files) report.artifacts.push_back(name);
  report.artifacts.push_back("report.json");
  report.artifacts.push_back("manifest.txt");
  files.emplace_back("report.json", report.to_json().dump(2) + "\n");

  std::string manifest;
  for (const auto& [name, body] : files) {
    write_atomic(dir / name, body);
    manifest += sha256_hex(body) + "  " + name + "\n";
  }
  write_atomic(dir / "manifest.txt", manifest);
  return dir;
}

}  // namespace hypolab::cli
