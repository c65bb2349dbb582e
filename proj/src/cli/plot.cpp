#include "hypolab/cli/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "hypolab/cli/output.hpp"
#include "hypolab/error.hpp"

namespace hypolab::cli {

namespace {

constexpr double kW = 640, kH = 420, kMargin = 60;

const std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

// Piecewise-linear blue-to-yellow colour map on [0, 1].
std::string color(double t) {
  static const std::array<std::array<double, 3>, 4> stops = {
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * 3;
  int i = std::min(2, static_cast<int>(t));
  double f = t - i;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

void header(std::ostringstream& s, double w, double h, const std::string& title) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
    << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) s << "<text x=\"" << num(w / 2) << "\" y=\"20\" text-anchor=\"middle\">" << escape(title) << "</text>\n";
}

std::string xy_plot(const Table& t, bool logs, const std::string& title) {
  if (t.columns.size() < 2) throw DomainError("plot needs at least two columns");
  auto tr = [logs](double v) { return logs ? std::log10(v) : v; };
  std::vector<double> xs = t.column(t.columns[0]);
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& r : t.rows)
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (logs && !(r[k] > 0)) continue;
      if (!std::isfinite(r[k])) continue;
      double v = tr(r[k]);
      if (k == 0) x0 = std::min(x0, v), x1 = std::max(x1, v);
      else y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
  if (!(x1 >= x0) || !(y1 >= y0)) throw DomainError("plot has no drawable points");
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return kMargin + (tr(v) - x0) / (x1 - x0) * (kW - 2 * kMargin); };
  auto py = [&](double v) { return kH - kMargin - (tr(v) - y0) / (y1 - y0) * (kH - 2 * kMargin); };

  std::ostringstream s;
  header(s, kW, kH, title);
  s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kW - 2 * kMargin << "\" height=\""
    << kH - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto label = [&](double v) { return logs ? num(std::pow(10.0, v)) : num(v); };
  for (int k = 0; k <= 4; ++k) {
    double fx = x0 + (x1 - x0) * k / 4, fy = y0 + (y1 - y0) * k / 4;
    double gx = kMargin + (kW - 2 * kMargin) * k / 4, gy = kH - kMargin - (kH - 2 * kMargin) * k / 4;
    s << "<text x=\"" << num(gx) << "\" y=\"" << num(kH - kMargin + 16) << "\" text-anchor=\"middle\">" << label(fx)
      << "</text>\n";
    s << "<text x=\"" << num(kMargin - 6) << "\" y=\"" << num(gy + 4) << "\" text-anchor=\"end\">" << label(fy)
      << "</text>\n";
  }
  s << "<text x=\"" << num(kW / 2) << "\" y=\"" << num(kH - 15) << "\" text-anchor=\"middle\">" << escape(t.columns[0])
    << (logs ? " (log)" : "") << "</text>\n";
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    const char* col = kColors[(c - 1) % kColors.size()];
    std::vector<double> ys = t.column(t.columns[c]);
    std::vector<double> fx, fy;
    s << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(ys[i]) || (logs && !(ys[i] > 0 && xs[i] > 0))) continue;
      s << num(px(xs[i])) << "," << num(py(ys[i])) << " ";
      fx.push_back(xs[i]);
      fy.push_back(ys[i]);
    }
    s << "\"/>\n";
    for (std::size_t i = 0; i < fx.size(); ++i)
      s << "<circle cx=\"" << num(px(fx[i])) << "\" cy=\"" << num(py(fy[i])) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    std::string legend = t.columns[c];
    if (logs && fx.size() >= 2) legend += "  slope " + num(loglog_slope(fx, fy));
    s << "<text x=\"" << num(kMargin + 8) << "\" y=\"" << num(kMargin + 16 * c) << "\" fill=\"" << col << "\">"
      << escape(legend) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string heatmap(const Table& t, const std::string& title) {
  if (t.columns.size() != 3) throw DomainError("heatmap needs columns x, y, value");
  std::set<double> ux, uy;
  double v0 = 1e300, v1 = -1e300;
  for (const auto& r : t.rows) {
    ux.insert(r[0]);
    uy.insert(r[1]);
    if (std::isfinite(r[2])) v0 = std::min(v0, r[2]), v1 = std::max(v1, r[2]);
  }
  if (ux.size() * uy.size() != t.rows.size()) throw DomainError("heatmap data is not on a rectangular lattice");
  if (!(v1 >= v0)) throw DomainError("heatmap has no finite values");
  std::map<double, int> ix, iy;
  for (double x : ux) ix.emplace(x, static_cast<int>(ix.size()));
  for (double y : uy) iy.emplace(y, static_cast<int>(iy.size()));
  double xr = *ux.rbegin() - *ux.begin(), yr = *uy.rbegin() - *uy.begin();
  double aspect = (xr > 0 && yr > 0) ? yr / xr : static_cast<double>(uy.size()) / ux.size();
  double pw = kW - 2 * kMargin, ph = pw * aspect;
  double cw = pw / ux.size(), ch = ph / uy.size();
  std::ostringstream s;
  header(s, kW, ph + 2 * kMargin, title);
  for (const auto& r : t.rows) {
    double f = v1 > v0 ? (r[2] - v0) / (v1 - v0) : 0.5;
    double gx = kMargin + ix[r[0]] * cw;
    double gy = kMargin + ph - (iy[r[1]] + 1) * ch;  // y grows upward
    s << "<rect x=\"" << num(gx) << "\" y=\"" << num(gy) << "\" width=\"" << num(cw + 0.05) << "\" height=\""
      << num(ch + 0.05) << "\" fill=\"" << color(f) << "\"/>\n";
  }
  s << "<text x=\"" << num(kMargin) << "\" y=\"" << num(ph + kMargin + 16) << "\">" << escape(t.columns[0]) << " "
    << num(*ux.begin()) << " .. " << num(*ux.rbegin()) << ", " << escape(t.columns[1]) << " " << num(*uy.begin())
    << " .. " << num(*uy.rbegin()) << ", " << escape(t.columns[2]) << " " << num(v0) << " .. " << num(v1)
    << "</text>\n</svg>\n";
  return s.str();
}

}  // namespace

PlotKind plot_kind_from_string(const std::string& s) {
  if (s == "loglog") return PlotKind::LogLog;
  if (s == "line") return PlotKind::Line;
  if (s == "heatmap") return PlotKind::Heatmap;
  throw ConfigError("unknown plot kind '" + s + "' (loglog, line, heatmap)");
}

std::string render_svg(const Table& table, PlotKind kind, const std::string& title) {
  if (table.rows.empty() || table.columns.empty()) throw DomainError("cannot plot an empty table");
  for (const auto& r : table.rows)
    if (r.size() != table.columns.size()) throw DomainError("columns have unequal lengths");
  switch (kind) {
    case PlotKind::LogLog: return xy_plot(table, true, title);
    case PlotKind::Line: return xy_plot(table, false, title);
    case PlotKind::Heatmap: return heatmap(table, title);
  }
  throw InternalError("unreachable plot kind");
}

void emit_plot(const Table& table, PlotKind kind, const std::string& path, const std::string& title) {
  write_atomic(path, render_svg(table, kind, title));
}

}  // namespace hypolab::cli
