#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qndlg/csv.hpp"
#include "qndlg/error.hpp"

namespace qndlg {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string trim_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Tick step from the 1/2/2.5/5 ladder closest below range/target.
inline double nice_step(double range, int target) {
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (mag * m >= raw) return mag * m;
  return mag * 10.0;
}

// Label for k * pi/2.
inline std::string half_pi_label(int k) {
  if (k == 0) return "0";
  if (k % 2 == 0) {
    const int n = k / 2;
    return (n == 1 ? std::string("\xCF\x80")
                   : std::to_string(n) + "\xCF\x80");
  }
  return (k == 1 ? std::string("\xCF\x80/2")
                 : std::to_string(k) + "\xCF\x80/2");
}

}  // namespace detail

// Renders series as a self-contained SVG line chart. When every x lies in
// [0, 2pi] the x axis is ticked at multiples of pi/2.
inline std::string render_line_plot(const std::vector<PlotSeries>& series,
                                    const std::string& x_label,
                                    const std::string& y_label,
                                    const std::string& title) {
  bool any = false;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y))
        throw ParameterError("plot points must be finite");
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  if (!any) throw ParameterError("nothing to plot");
  if (xmax == xmin) {
    const double pad = std::max(1.0, std::abs(xmin)) * 0.1;
    xmin -= pad;
    xmax += pad;
  }
  if (ymax == ymin) {
    const double pad = std::max(1.0, std::abs(ymin)) * 0.1;
    ymin -= pad;
    ymax += pad;
  } else {
    const double pad = (ymax - ymin) * 0.06;
    ymin -= pad;
    ymax += pad;
  }

  constexpr double kW = 880, kH = 540;
  constexpr double kL = 70, kR = 20, kT = 40, kB = 55;
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  const auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return kT + (ymax - y) / (ymax - ymin) * ph; };

  static constexpr std::array<const char*, 8> kPalette = {
      "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
      "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\" text-anchor=\"middle\">"
      << detail::xml_escape(title) << "</text>\n";

  // Axes frame.
  out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // x ticks.
  const double half_pi = std::numbers::pi / 2.0;
  const bool pi_axis = xmin >= -1e-9 && xmax <= 2.0 * std::numbers::pi * 1.01 &&
                       (xmax - xmin) > half_pi / 2.0;
  std::vector<std::pair<double, std::string>> xticks;
  if (pi_axis) {
    const int k0 = static_cast<int>(std::ceil(xmin / half_pi - 1e-9));
    const int k1 = static_cast<int>(std::floor(xmax / half_pi + 1e-9));
    for (int k = k0; k <= k1; ++k)
      xticks.emplace_back(k * half_pi, detail::half_pi_label(k));
  } else {
    const double step = detail::nice_step(xmax - xmin, 7);
    for (double t = std::ceil(xmin / step) * step; t <= xmax + step * 1e-9;
         t += step)
      xticks.emplace_back(t, detail::trim_number(t));
  }
  for (const auto& [t, label] : xticks) {
    const double x = px(t);
    out << "<line x1=\"" << x << "\" y1=\"" << kT + ph << "\" x2=\"" << x
        << "\" y2=\"" << kT + ph + 5 << "\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kT + ph + 20
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << detail::xml_escape(label) << "</text>\n";
  }

  // y ticks.
  const double ystep = detail::nice_step(ymax - ymin, 6);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + ystep * 1e-9;
       t += ystep) {
    const double v = (std::abs(t) < ystep * 1e-6) ? 0.0 : t;
    const double y = py(v);
    out << "<line x1=\"" << kL - 5 << "\" y1=\"" << y << "\" x2=\"" << kL
        << "\" y2=\"" << y << "\" stroke=\"#333333\"/>\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << y << "\" x2=\"" << kL + pw
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kL - 9 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">"
        << detail::trim_number(v) << "</text>\n";
  }
  if (ymin < 0.0 && ymax > 0.0)
    out << "<line x1=\"" << kL << "\" y1=\"" << py(0.0) << "\" x2=\""
        << kL + pw << "\" y2=\"" << py(0.0)
        << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";

  // Axis labels.
  out << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 14
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\">"
      << detail::xml_escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << kT + ph / 2
      << "\" font-family=\"sans-serif\" font-size=\"14\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kT + ph / 2 << ")\">" << detail::xml_escape(y_label) << "</text>\n";

  // Series.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    const auto& pts = series[s].points;
    if (pts.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"";
      for (const auto& [x, y] : pts) out << px(x) << ',' << py(y) << ' ';
      out << "\"/>\n";
    }
    if (pts.size() <= 48)
      for (const auto& [x, y] : pts)
        out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
            << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }

  // Legend, top right.
  const double lx = kL + pw - 150, ly0 = kT + 12;
  out << "<rect x=\"" << lx - 8 << "\" y=\"" << ly0 - 12 << "\" width=\"150\" "
      << "height=\"" << 8 + 18 * static_cast<double>(series.size())
      << "\" fill=\"#ffffff\" fill-opacity=\"0.85\" stroke=\"#cccccc\"/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double ly = ly0 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22
        << "\" y2=\"" << ly << "\" stroke=\"" << kPalette[s % kPalette.size()]
        << "\" stroke-width=\"2.5\"/>\n";
    out << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::xml_escape(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline void write_svg(const std::filesystem::path& path,
                      const std::string& svg) {
  write_text_atomic(path, svg);
}

}  // namespace qndlg
