#pragma once

#include <cctype>
#include <charconv>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qndlg/error.hpp"

namespace qndlg {

// Uniform theta grid, both endpoints included.
struct ThetaGrid {
  double start = 0.0;
  double stop = 0.0;
  int points = 1;
};

// Default: 512 uniform points over (0, 2pi], i.e. theta_k = k 2pi/512.
inline ThetaGrid default_grid() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return {two_pi / 512.0, two_pi, 512};
}

inline std::vector<double> grid_values(const ThetaGrid& g) {
  if (g.points < 1) throw ParameterError("theta grid needs >= 1 point");
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(g.points));
  if (g.points == 1) {
    v.push_back(g.start);
    return v;
  }
  const double step = (g.stop - g.start) / (g.points - 1);
  for (int k = 0; k < g.points; ++k) v.push_back(g.start + k * step);
  v.back() = g.stop;
  return v;
}

// Angles are accepted as raw radians ("1.5708") or multiples of pi
// ("0.5pi", "pi", "-pi", "2pi").
inline double parse_angle(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) throw ParameterError("empty angle");
  bool pi_suffix = false;
  if (s.size() >= 2 && (s.substr(s.size() - 2) == "pi" ||
                        s.substr(s.size() - 2) == "PI" ||
                        s.substr(s.size() - 2) == "Pi")) {
    pi_suffix = true;
    s.remove_suffix(2);
  }
  double factor = 1.0;
  if (s.empty()) {
    if (!pi_suffix) throw ParameterError("empty angle");
  } else if (s == "-") {
    if (!pi_suffix) throw ParameterError("bad angle: -");
    factor = -1.0;
  } else {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, factor);
    if (ec != std::errc{} || ptr != last)
      throw ParameterError("bad angle: " + std::string(s));
  }
  return pi_suffix ? factor * std::numbers::pi : factor;
}

// "START:STOP:POINTS" with angle syntax for the endpoints.
inline ThetaGrid parse_grid(std::string_view s) {
  const auto c1 = s.find(':');
  const auto c2 = (c1 == std::string_view::npos) ? c1 : s.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
      s.find(':', c2 + 1) != std::string_view::npos)
    throw ParameterError("theta grid must be START:STOP:POINTS");
  ThetaGrid g;
  g.start = parse_angle(s.substr(0, c1));
  g.stop = parse_angle(s.substr(c1 + 1, c2 - c1 - 1));
  const auto pts = s.substr(c2 + 1);
  const char* first = pts.data();
  const char* last = pts.data() + pts.size();
  auto [ptr, ec] = std::from_chars(first, last, g.points);
  if (ec != std::errc{} || ptr != last || g.points < 1)
    throw ParameterError("theta grid needs a positive point count");
  return g;
}

}  // namespace qndlg
