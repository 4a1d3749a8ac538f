#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "formsim/simlog.hpp"

namespace formsim {

// Minimal multi-series line chart (time on the x axis) for quick inspection
// of exported logs; batch artifact, no interactivity.
inline void write_line_chart(const SimLog& log, const std::vector<std::string>& series,
                             std::ostream& out, const std::string& title = "") {
  constexpr int width = 900, height = 480;
  constexpr int ml = 70, mr = 20, mt = 40, mb = 45;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

  const auto t = log.times();
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const auto& name : series) {
    for (double v : log.series(name)) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(ymax > ymin)) {
    ymax += 0.5;
    ymin -= 0.5;
  }
  const double x0 = t.front(), x1 = t.back();
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (width - ml - mr)
      << "\" height=\"" << (height - mt - mb)
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  // axis extremes
  out << "<text x=\"" << ml << "\" y=\"" << height - mb + 18
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x0 << "</text>\n";
  out << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 18
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x1 << "</text>\n";
  out << "<text x=\"" << ml - 8 << "\" y=\"" << py(ymin)
      << "\" font-size=\"12\" text-anchor=\"end\">" << ymin << "</text>\n";
  out << "<text x=\"" << ml - 8 << "\" y=\"" << py(ymax) + 10
      << "\" font-size=\"12\" text-anchor=\"end\">" << ymax << "</text>\n";
  if (ymin < 0.0 && ymax > 0.0)
    out << "<line x1=\"" << ml << "\" y1=\"" << py(0.0) << "\" x2=\"" << width - mr << "\" y2=\""
        << py(0.0) << "\" stroke=\"#bbb\" stroke-dasharray=\"4 4\"/>\n";

  int color = 0;
  for (const auto& name : series) {
    const auto ys = log.series(name);
    out << "<polyline fill=\"none\" stroke=\"" << palette[color % 8]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) out << px(t[i]) << ',' << py(ys[i]) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 16 + 16 * color
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << palette[color % 8] << "\">" << name
        << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
}

}  // namespace formsim
