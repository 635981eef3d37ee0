#include "dfpower/plot.hpp"

#include "dfpower/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dfpower {

namespace {

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
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

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const Chart& chart, int width, int height) {
  const double left = 70, right = 140, top = 40, bottom = 55;
  const double pw = width - left - right, ph = height - top - bottom;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : chart.series) {
    for (std::size_t k = 0; k < s.xs.size(); ++k) {
      if (first) {
        x_min = x_max = s.xs[k];
        first = false;
      }
      x_min = std::min(x_min, s.xs[k]);
      x_max = std::max(x_max, s.xs[k]);
      y_max = std::max(y_max, s.ys[k]);
      y_min = std::min(y_min, s.ys[k]);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return top + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(chart.title) << "</text>\n";

  // grid and ticks
  const double xs = nice_step(x_max - x_min, 8), ys = nice_step(y_max - y_min, 5);
  for (double t = std::ceil(x_min / xs) * xs; t <= x_max + 1e-12; t += xs) {
    o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(t))
      << "\" y2=\"" << num(top + ph) << "\" stroke=\"#e6e6e6\"/>\n";
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + ph + 18)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  for (double t = std::ceil(y_min / ys) * ys; t <= y_max + 1e-12; t += ys) {
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left + pw)
      << "\" y2=\"" << num(py(t)) << "\" stroke=\"#e6e6e6\"/>\n";
    o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(t) << "</text>\n";
  }
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
    << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 12)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(chart.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << num(top + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(chart.y_label)
    << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
    if (s.dashed) o << " stroke-dasharray=\"2,3\"";
    o << " points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      o << (i ? " " : "") << num(px(s.xs[i])) << "," << num(py(s.ys[i]));
    }
    o << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    const double lx = left + pw + 12;
    o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
    if (s.dashed) o << " stroke-dasharray=\"2,3\"";
    o << "/>\n<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4) << "\" font-size=\"12\">"
      << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

Chart trajectory_chart(const TrajectoryTable& table, const std::string& title) {
  Chart chart;
  chart.title = title;
  for (Index i = 0; i < table.dimension(); ++i) {
    ChartSeries s;
    s.label = "x_" + std::to_string(i + 1);
    s.color = kPalette[static_cast<std::size_t>(i) % kPalette.size()];
    for (std::size_t k = 0; k < table.x.size(); ++k) {
      s.xs.push_back(static_cast<double>(table.s[k]));
      s.ys.push_back(table.x[k](i));
    }
    chart.series.push_back(std::move(s));
  }
  return chart;
}

Chart comparison_chart(const TrajectoryTable& solid, const std::string& solid_name,
                       const TrajectoryTable& dotted, const std::string& dotted_name,
                       const std::vector<Index>& individuals) {
  if (solid.dimension() != dotted.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "runs have different numbers of individuals");
  }
  Chart chart;
  chart.title = "Selected individuals: " + solid_name + " (solid) vs " + dotted_name + " (dotted)";
  for (Index i : individuals) {
    if (i < 1 || i > solid.dimension()) {
      throw Error(ErrorKind::ConfigError, "individual " + std::to_string(i) + " out of range");
    }
    const std::string color = kPalette[static_cast<std::size_t>(i - 1) % kPalette.size()];
    for (int run = 0; run < 2; ++run) {
      const auto& t = run == 0 ? solid : dotted;
      ChartSeries s;
      s.label = "x_" + std::to_string(i) + " " + (run == 0 ? solid_name : dotted_name);
      s.color = color;
      s.dashed = run == 1;
      for (std::size_t k = 0; k < t.x.size(); ++k) {
        s.xs.push_back(static_cast<double>(t.s[k]));
        s.ys.push_back(t.x[k](i - 1));
      }
      chart.series.push_back(std::move(s));
    }
  }
  return chart;
}

}  // namespace dfpower
