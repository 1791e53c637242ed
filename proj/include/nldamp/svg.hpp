// Minimal SVG emitters for quick inspection of outputs. CSV files remain the
// source of truth; these are only pictures of them.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nldamp/analysis/grid.hpp"
#include "nldamp/analysis/passivity.hpp"
#include "nldamp/model.hpp"

namespace nldamp::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

namespace detail {

inline const char* color(std::size_t i) {
  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Panels stacked vertically, each autoscaled to its own data.
inline void write_line_plot(std::ostream& os, const std::vector<Panel>& panels) {
  constexpr double kW = 640.0;
  constexpr double kH = 360.0;
  constexpr double kMargin = 50.0;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH * panels.size()
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    for (const auto& s : panel.series) {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
    if (!(x0 < x1)) x1 = x0 + 1.0;
    if (!(y0 < y1)) y1 = y0 + 1.0;
    const double top = kH * static_cast<double>(p);
    auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kW - 2 * kMargin); };
    auto py = [&](double y) { return top + kH - kMargin - (y - y0) / (y1 - y0) * (kH - 2 * kMargin); };

    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"" << top + 20 << "\" text-anchor=\"middle\">" << detail::escape(panel.title)
       << "</text>\n";
    os << "<rect x=\"" << kMargin << "\" y=\"" << top + kMargin << "\" width=\"" << kW - 2 * kMargin << "\" height=\""
       << kH - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"" << top + kH - 12 << "\" text-anchor=\"middle\">"
       << detail::escape(panel.x_label) << " [" << detail::fmt(x0) << ", " << detail::fmt(x1) << "]</text>\n";
    os << "<text x=\"12\" y=\"" << top + kH / 2 << "\" transform=\"rotate(-90 12 " << top + kH / 2
       << ")\" text-anchor=\"middle\">" << detail::escape(panel.y_label) << " [" << detail::fmt(y0) << ", "
       << detail::fmt(y1) << "]</text>\n";
    for (std::size_t i = 0; i < panel.series.size(); ++i) {
      const Series& s = panel.series[i];
      os << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << detail::color(i) << "\" points=\"";
      for (const auto& [x, y] : s.points) {
        if (std::isfinite(x) && std::isfinite(y)) os << detail::fmt(px(x)) << ',' << detail::fmt(py(y)) << ' ';
      }
      os << "\"/>\n";
      if (!s.label.empty()) {
        os << "<text x=\"" << kW - kMargin - 4 << "\" y=\"" << top + kMargin + 14 * (i + 1)
           << "\" text-anchor=\"end\" fill=\"" << detail::color(i) << "\">" << detail::escape(s.label) << "</text>\n";
      }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
}

/// Cell map; `shade(i1, i2)` returns a fill color for each cell.
template <typename Shade>
void write_cell_map(std::ostream& os, const GridSpec& grid, const std::string& title, Shade&& shade) {
  constexpr double kSize = 600.0;
  constexpr double kMargin = 40.0;
  const double cw = (kSize - 2 * kMargin) / static_cast<double>(grid.x1.n);
  const double ch = (kSize - 2 * kMargin) / static_cast<double>(grid.x2.n);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" shape-rendering=\"crispEdges\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kSize / 2 << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
     << detail::escape(title) << "</text>\n";
  for (std::size_t i1 = 0; i1 < grid.x1.n; ++i1) {
    for (std::size_t i2 = 0; i2 < grid.x2.n; ++i2) {
      const double x = kMargin + cw * static_cast<double>(i1);
      const double y = kSize - kMargin - ch * static_cast<double>(i2 + 1);
      os << "<rect x=\"" << detail::fmt(x) << "\" y=\"" << detail::fmt(y) << "\" width=\"" << detail::fmt(cw + 0.05)
         << "\" height=\"" << detail::fmt(ch + 0.05) << "\" fill=\"" << shade(i1, i2) << "\"/>\n";
    }
  }
  os << "</svg>\n";
}

inline void write_passivity_map(std::ostream& os, const PassivityMap& map) {
  write_cell_map(os, map.spec(), "passivity (white: passive, gray: non-passive, black: boundary)",
                 [&](std::size_t i1, std::size_t i2) -> const char* {
                   switch (map.at(i1, i2)) {
                     case PassivityClass::Passive:
                       return "#ffffff";
                     case PassivityClass::NonPassive:
                       return "#b0b0b0";
                     case PassivityClass::Boundary:
                       return "#000000";
                   }
                   return "#ff00ff";
                 });
}

inline void write_region_mask(std::ostream& os, const RegionMask& mask, const std::string& title) {
  write_cell_map(os, mask.spec(), title,
                 [&](std::size_t i1, std::size_t i2) { return mask.at(i1, i2) ? "#d62728" : "#ffffff"; });
}

}  // namespace nldamp::svg
