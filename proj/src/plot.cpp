// Copyright 2026 The cogtrans Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cogtrans/plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cogtrans/errors.hpp"

namespace cogtrans {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 150, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const {
    return kLeft + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) *
                                   (kHeight - kTop - kBottom);
  }
};

void header(std::ostringstream& out, const std::string& title) {
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& x_label,
          const std::string& y_label, bool x_ticks) {
  const double bx = kLeft, by = kHeight - kBottom;
  out << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << by << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << bx << "\" y1=\"" << kTop << "\" x2=\"" << bx << "\" y2=\"" << by
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    out << "<text x=\"" << bx - 5 << "\" y=\"" << f.py(y) + 4 << "\" text-anchor=\"end\">"
        << std::setprecision(3) << y << std::setprecision(2) << "</text>\n";
    if (x_ticks) {
      const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
      out << "<text x=\"" << f.px(x) << "\" y=\"" << by + 15 << "\" text-anchor=\"middle\">"
          << std::setprecision(3) << x << std::setprecision(2) << "</text>\n";
    }
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"15\" y=\"" << (kTop + by) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << (kTop + by) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const Series> series) {
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::size_t n = 0;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      f.x0 = std::min(f.x0, x);
      f.x1 = std::max(f.x1, x);
      f.y0 = std::min(f.y0, y);
      f.y1 = std::max(f.y1, y);
      ++n;
    }
  }
  if (n == 0) throw EmptyInput("line chart without points");
  std::ostringstream out;
  header(out, title);
  axes(out, f, x_label, y_label, true);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[i].points) {
      if (std::isfinite(x) && std::isfinite(y)) out << f.px(x) << ',' << f.py(y) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 15.0 * static_cast<double>(i);
    out << "<rect x=\"" << kWidth - kRight + 10 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
        << color << "\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 25 << "\" y=\"" << ly << "\">"
        << escape(series[i].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string svg_bar_chart(const std::string& title, const std::string& y_label,
                          std::span<const std::pair<std::string, double>> bars) {
  if (bars.empty()) throw EmptyInput("bar chart without bars");
  Frame f{0.0, static_cast<double>(bars.size()), 0.0, 0.0};
  for (const auto& [name, v] : bars) {
    if (std::isfinite(v)) {
      f.y0 = std::min(f.y0, v);
      f.y1 = std::max(f.y1, v);
    }
  }
  std::ostringstream out;
  header(out, title);
  axes(out, f, "", y_label, false);
  const double slot = (kWidth - kLeft - kRight) / static_cast<double>(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double v = std::isfinite(bars[i].second) ? bars[i].second : 0.0;
    const double top = f.py(std::max(v, 0.0)), base = f.py(std::min(v, 0.0));
    const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
    out << "<rect x=\"" << x << "\" y=\"" << top << "\" width=\"" << slot * 0.7 << "\" height=\""
        << base - top << "\" fill=\"" << kColors[i % std::size(kColors)] << "\"/>\n";
    out << "<text x=\"" << x + slot * 0.35 << "\" y=\"" << kHeight - kBottom + 15
        << "\" text-anchor=\"middle\">" << escape(bars[i].first) << "</text>\n";
    out << "<text x=\"" << x + slot * 0.35 << "\" y=\"" << top - 4
        << "\" text-anchor=\"middle\">" << v << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cogtrans
