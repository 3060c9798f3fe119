#pragma once

// CSV tables, rounded JSON reports and small static SVG line charts.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zoll/errors.hpp"

namespace zoll {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string format_number(double v, int digits = 12) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int digits = 12;

  void add(std::vector<double> row) {
    if (row.size() != header.size()) throw InvalidInput("CSV row width does not match the header");
    rows.push_back(std::move(row));
  }

  std::vector<double> column(std::size_t i) const {
    std::vector<double> c;
    for (const auto& r : rows) c.push_back(r.at(i));
    return c;
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += std::isfinite(r[i]) ? format_number(r[i], digits) : std::string("nan");
      }
      out += '\n';
    }
    return out;
  }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InvalidInput("write to '" + path.string() + "' failed");
}

/// Rounds every floating-point leaf to `digits` significant digits so reports
/// are stable across platforms.
inline nlohmann::json round_json(const nlohmann::json& j, int digits = 12) {
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v, digits));
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : j) out.push_back(round_json(e, digits));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_json(it.value(), digits);
    return out;
  }
  return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, round_json(j).dump(2) + "\n");
}

// ---- SVG -------------------------------------------------------------------

struct Series {
  std::string name;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
};

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#e6a100", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e"};
  return colors[i % 6];
}

/// Line chart; NaN samples break a series into separate polylines.
inline std::string svg_line_plot(const std::string& title, const std::vector<Series>& series,
                                 const std::string& xlabel, const std::string& ylabel) {
  constexpr double W = 640, H = 420, L = 64, R = 150, T = 36, B = 48;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin < xmax)) xmin -= 1, xmax += 1;
  if (!(ymin < ymax)) ymin -= 1, ymax += 1;
  double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return L + (W - L - R) * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return H - B - (H - T - B) * (y - ymin) / (ymax - ymin); };
  auto n = [](double v) { return format_number(v, 6); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = xmin + (xmax - xmin) * k / 4, yv = ymin + (ymax - ymin) * k / 4;
    o << "<text x=\"" << n(px(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << n(xv) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << n(py(yv) + 4) << "\" text-anchor=\"end\">" << n(yv) << "</text>\n";
  }
  if (ymin < 0 && ymax > 0) {
    o << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << n(py(0)) << "\" y2=\"" << n(py(0))
      << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty()) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      pts += (pts.empty() ? "" : " ") + n(px(s.x[i])) + "," + n(py(s.y[i]));
    }
    flush();
    double ly = T + 16 + 18 * double(si);
    o << "<line x1=\"" << W - R + 10 << "\" x2=\"" << W - R + 30 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
      << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R + 36 << "\" y=\"" << ly << "\">" << s.name << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// One series per non-x column of a table.
inline std::string svg_from_table(const std::string& title, const CsvTable& t, std::size_t x_col = 0) {
  std::vector<Series> s;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == x_col) continue;
    s.push_back({t.header[c], t.column(x_col), t.column(c), palette(s.size())});
  }
  return svg_line_plot(title, s, t.header[x_col], "");
}

}  // namespace zoll
