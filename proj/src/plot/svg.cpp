#include "dispel/plot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dispel/common/error.hpp"

namespace dispel::plot {

namespace {

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

std::string num(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

std::string coord(double v) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << v;
  return o.str();
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) {
    const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::floor(lo / step) * step; v <= hi + step * 1e-9; v += step)
    t.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  if (t.front() > lo) t.insert(t.begin(), t.front() - step);
  if (t.back() < hi) t.push_back(t.back() + step);
  return t;
}

std::string render_svg(const Chart& c) {
  if (c.series.empty()) throw ConfigError("plot: nothing to draw");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Series& s : c.series) {
    if (s.x.size() != s.y.size()) throw ConfigError("plot: series '" + s.name + "' has mismatched x and y");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) throw ConfigError("plot: non-finite value in '" + s.name + "'");
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) throw ConfigError("plot: all series are empty");
  const auto xt = nice_ticks(x0, x1), yt = nice_ticks(y0, y1);
  const double L = 70, R = 150, T = 40, B = 55;
  const double pw = c.width - L - R, ph = c.height - T - B;
  auto px = [&](double x) { return L + (x - xt.front()) / (xt.back() - xt.front()) * pw; };
  auto py = [&](double y) { return T + ph - (y - yt.front()) / (yt.back() - yt.front()) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width << "\" height=\"" << c.height
    << "\" viewBox=\"0 0 " << c.width << ' ' << c.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << coord(L + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << esc(c.title)
    << "</text>\n";
  o << "<g class=\"x-axis\">\n";
  for (double v : xt)
    o << "<line x1=\"" << coord(px(v)) << "\" y1=\"" << coord(T) << "\" x2=\"" << coord(px(v)) << "\" y2=\""
      << coord(T + ph) << "\" stroke=\"#e0e0e0\"/><text class=\"tick\" x=\"" << coord(px(v)) << "\" y=\""
      << coord(T + ph + 16) << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  o << "</g>\n<g class=\"y-axis\">\n";
  for (double v : yt)
    o << "<line x1=\"" << coord(L) << "\" y1=\"" << coord(py(v)) << "\" x2=\"" << coord(L + pw) << "\" y2=\""
      << coord(py(v)) << "\" stroke=\"#e0e0e0\"/><text class=\"tick\" x=\"" << coord(L - 6) << "\" y=\""
      << coord(py(v) + 4) << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  o << "</g>\n";
  o << "<rect x=\"" << coord(L) << "\" y=\"" << coord(T) << "\" width=\"" << coord(pw) << "\" height=\"" << coord(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << coord(L + pw / 2) << "\" y=\"" << coord(c.height - 14) << "\" text-anchor=\"middle\">"
    << esc(c.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << coord(T + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << esc(c.y_label) << "</text>\n";

  for (size_t k = 0; k < c.series.size(); ++k) {
    const Series& s = c.series[k];
    const char* col = kColours[k % std::size(kColours)];
    std::vector<size_t> idx(s.x.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return s.x[a] < s.x[b]; });
    o << "<g class=\"series\" data-name=\"" << esc(s.name) << "\">\n<polyline fill=\"none\" stroke=\"" << col
      << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"";
    for (size_t i : idx) o << coord(px(s.x[i])) << ',' << coord(py(s.y[i])) << ' ';
    o << "\"/>\n";
    for (size_t i : idx)
      o << "<circle cx=\"" << coord(px(s.x[i])) << "\" cy=\"" << coord(py(s.y[i])) << "\" r=\"2.5\" fill=\"" << col
        << "\"/>\n";
    o << "</g>\n";
    const double ly = T + 10 + 18 * k;
    o << "<line x1=\"" << coord(L + pw + 12) << "\" y1=\"" << coord(ly) << "\" x2=\"" << coord(L + pw + 32)
      << "\" y2=\"" << coord(ly) << "\" stroke=\"" << col << "\" stroke-width=\"2\""
      << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << "/><text x=\"" << coord(L + pw + 38) << "\" y=\""
      << coord(ly + 4) << "\">" << esc(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

namespace {

std::vector<Series> by_supply(const CsvTable& t, const std::string& xc, const std::string& yc) {
  const int v = t.require_column("v_dd_V"), x = t.require_column(xc), y = t.require_column(yc);
  std::map<double, Series> groups;
  for (const auto& r : t.rows) {
    Series& s = groups[r[v]];
    s.x.push_back(r[x]);
    s.y.push_back(r[y]);
  }
  std::vector<Series> out;
  for (auto& [vdd, s] : groups) {
    s.name = "VDD " + num(vdd) + " V";
    out.push_back(std::move(s));
  }
  return out;
}

Series column_series(const CsvTable& t, const std::string& xc, const std::string& yc, const std::string& name) {
  const int x = t.require_column(xc), y = t.require_column(yc);
  Series s;
  s.name = name;
  for (const auto& r : t.rows) {
    s.x.push_back(r[x]);
    s.y.push_back(r[y]);
  }
  return s;
}

}  // namespace

Chart figure(const std::string& kind, const CsvTable& t) {
  if (t.rows.empty()) throw ConfigError("plot: input has no rows");
  Chart c;
  if (kind == "ef") {
    c.title = "Pareto-optimal energy vs frequency";
    c.x_label = "achieved frequency (GHz)";
    c.y_label = "energy per cycle (pJ)";
    c.series = by_supply(t, "f_ach_GHz", "energy_pJ");
  } else if (kind == "area-f") {
    c.title = "Core area vs frequency";
    c.x_label = "achieved frequency (GHz)";
    c.y_label = "die area (um^2)";
    c.series = by_supply(t, "f_ach_GHz", "die_area_um2");
  } else if (kind == "edp-lspa") {
    c.title = "Minimum EDP vs spacer length";
    c.x_label = "L_SPA (nm)";
    c.y_label = "min EDP (pJ ns)";
    c.series = {column_series(t, "l_spa_nm", "min_edp_pJns", "core")};
  } else if (kind == "edp-xrw") {
    c.title = "Minimum EDP vs wire resistance multiplier";
    c.x_label = "X_RW";
    c.y_label = "min EDP, normalized to X_RW = 1";
    Series core = column_series(t, "x_rw", "min_edp_pJns", "core");
    Series ro = column_series(t, "x_rw", "ro_edp_pJns", "ring oscillator");
    ro.dashed = true;
    // Both curves are scaled to 1 at the multiplier closest to copper.
    size_t ref = 0;
    for (size_t i = 1; i < core.x.size(); ++i)
      if (std::abs(std::log(core.x[i])) < std::abs(std::log(core.x[ref]))) ref = i;
    const double cr = core.y[ref], rr = ro.y[ref];
    for (double& v : core.y) v /= cr;
    for (double& v : ro.y) v /= rr;
    c.series = {core, ro};
  } else {
    throw ConfigError("plot: unknown kind '" + kind + "' (ef|edp-lspa|edp-xrw|area-f)");
  }
  return c;
}

}  // namespace dispel::plot
