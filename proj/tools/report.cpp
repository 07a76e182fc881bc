#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace fbmruin::cli {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string Table::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

namespace {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  double left, top, width, height;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void draw_panel(std::ostringstream& svg, const Panel& p, const std::string& label, const Series& s,
                double reference) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (!std::isfinite(s.y[i])) continue;
    xmin = std::min(xmin, s.x[i]);
    xmax = std::max(xmax, s.x[i]);
    ymin = std::min(ymin, s.y[i]);
    ymax = std::max(ymax, s.y[i]);
  }
  if (std::isfinite(reference)) {
    ymin = std::min(ymin, reference);
    ymax = std::max(ymax, reference);
  }
  svg << "<rect x='" << p.left << "' y='" << p.top << "' width='" << p.width << "' height='" << p.height
      << "' fill='none' stroke='#444'/>\n";
  svg << "<text x='" << p.left + p.width / 2 << "' y='" << p.top - 8 << "' text-anchor='middle'>" << label
      << "</text>\n";
  if (!std::isfinite(xmin)) {
    svg << "<text x='" << p.left + p.width / 2 << "' y='" << p.top + p.height / 2
        << "' text-anchor='middle' fill='#888'>no data</text>\n";
    return;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.08 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return p.left + (x - xmin) / (xmax - xmin) * p.width; };
  auto py = [&](double y) { return p.top + p.height - (y - ymin) / (ymax - ymin) * p.height; };

  svg << "<text x='" << p.left << "' y='" << p.top + p.height + 16 << "'>" << fmt(xmin) << "</text>\n";
  svg << "<text x='" << p.left + p.width << "' y='" << p.top + p.height + 16 << "' text-anchor='end'>" << fmt(xmax)
      << "</text>\n";
  svg << "<text x='" << p.left + p.width / 2 << "' y='" << p.top + p.height + 30 << "' text-anchor='middle'>N</text>\n";
  svg << "<text x='" << p.left - 4 << "' y='" << p.top + p.height << "' text-anchor='end'>" << fmt(ymin) << "</text>\n";
  svg << "<text x='" << p.left - 4 << "' y='" << p.top + 10 << "' text-anchor='end'>" << fmt(ymax) << "</text>\n";
  if (std::isfinite(reference))
    svg << "<line x1='" << p.left << "' x2='" << p.left + p.width << "' y1='" << py(reference) << "' y2='"
        << py(reference) << "' stroke='#c33' stroke-dasharray='6 4'/>\n";

  svg << "<polyline fill='none' stroke='#2363a8' stroke-width='2' points='";
  for (std::size_t i = 0; i < s.x.size(); ++i)
    if (std::isfinite(s.y[i])) svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
  svg << "'/>\n";
  for (std::size_t i = 0; i < s.x.size(); ++i)
    if (std::isfinite(s.y[i]))
      svg << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i]) << "' r='3' fill='#2363a8'/>\n";
}

}  // namespace

std::string convergence_svg(const std::vector<ConvergenceRow>& rows, const std::string& title) {
  Series ratio, slope;
  double reference = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows) {
    ratio.x.push_back(r.n);
    ratio.y.push_back(r.ratio);
    slope.x.push_back(r.n);
    slope.y.push_back(r.log_mc_over_n);
    reference = r.reference_rate;
  }
  std::ostringstream svg;
  svg.precision(6);
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='760' height='340' font-family='sans-serif' "
         "font-size='12'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='380' y='20' text-anchor='middle' font-size='14'>" << title << "</text>\n";
  draw_panel(svg, {60, 50, 290, 240}, "MC / asymptotic", ratio, 1.0);
  draw_panel(svg, {440, 50, 290, 240}, "-log(MC) / N", slope, reference);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fbmruin::cli
