#include "radcal/sim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace radcal::sim {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Frame {
  double left = 70, right = 20, top = 40, bottom = 55;
  int width = 0, height = 0;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void open_doc(std::ostringstream& os, const Frame& f, const std::string& title, const std::string& xl,
              const std::string& yl) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << px(f.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  os << "<text x=\"" << px(f.left + f.plot_w() / 2) << "\" y=\"" << f.height - 12 << "\" text-anchor=\"middle\">"
     << escape(xl) << "</text>\n";
  os << "<text transform=\"translate(16," << px(f.top + f.plot_h() / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(yl) << "</text>\n";
}

// "Nice" tick values covering [lo, hi].
RVector ticks(double lo, double hi, int target = 6) {
  RVector out;
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

void axes(std::ostringstream& os, const Frame& f, double x0, double x1, double y0, double y1) {
  auto sx = [&](double x) { return f.left + (x - x0) / (x1 - x0) * f.plot_w(); };
  auto sy = [&](double y) { return f.top + (1.0 - (y - y0) / (y1 - y0)) * f.plot_h(); };
  os << "<rect x=\"" << px(f.left) << "\" y=\"" << px(f.top) << "\" width=\"" << px(f.plot_w()) << "\" height=\""
     << px(f.plot_h()) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(x0, x1)) {
    os << "<line x1=\"" << px(sx(t)) << "\" x2=\"" << px(sx(t)) << "\" y1=\"" << px(f.top) << "\" y2=\""
       << px(f.top + f.plot_h()) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << px(sx(t)) << "\" y=\"" << px(f.top + f.plot_h() + 16) << "\" text-anchor=\"middle\">"
       << num(t) << "</text>\n";
  }
  for (double t : ticks(y0, y1)) {
    os << "<line x1=\"" << px(f.left) << "\" x2=\"" << px(f.left + f.plot_w()) << "\" y1=\"" << px(sy(t))
       << "\" y2=\"" << px(sy(t)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << px(f.left - 6) << "\" y=\"" << px(sy(t) + 4) << "\" text-anchor=\"end\">" << num(t)
       << "</text>\n";
  }
}

}  // namespace

std::string render_svg(const LinePlot& plot, int width, int height) {
  Frame f;
  f.width = width;
  f.height = height;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  std::ostringstream os;
  open_doc(os, f, plot.title, plot.x_label, plot.y_label);
  axes(os, f, x0, x1, y0, y1);
  auto sx = [&](double x) { return f.left + (x - x0) / (x1 - x0) * f.plot_w(); };
  auto sy = [&](double y) { return f.top + (1.0 - (y - y0) / (y1 - y0)) * f.plot_h(); };
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << px(sx(s.x[i])) << ',' << px(sy(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    const double ly = f.top + 14 + 15.0 * static_cast<double>(k);
    os << "<line x1=\"" << px(f.left + f.plot_w() - 150) << "\" x2=\"" << px(f.left + f.plot_w() - 130) << "\" y1=\""
       << px(ly - 4) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << px(f.left + f.plot_w() - 125) << "\" y=\"" << px(ly) << "\">" << escape(s.name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_svg(const BarPlot& plot, int width, int height) {
  Frame f;
  f.width = width;
  f.height = height;
  double y1 = 0.0;
  for (double v : plot.values) {
    if (std::isfinite(v)) y1 = std::max(y1, v);
  }
  if (y1 <= 0) y1 = 1;
  y1 *= 1.05;
  std::ostringstream os;
  open_doc(os, f, plot.title, plot.x_label, plot.y_label);
  const std::size_t n = std::max<std::size_t>(plot.values.size(), 1);
  const double bw = f.plot_w() / static_cast<double>(n);
  auto sy = [&](double y) { return f.top + (1.0 - y / y1) * f.plot_h(); };
  for (double t : ticks(0.0, y1)) {
    os << "<line x1=\"" << px(f.left) << "\" x2=\"" << px(f.left + f.plot_w()) << "\" y1=\"" << px(sy(t))
       << "\" y2=\"" << px(sy(t)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << px(f.left - 6) << "\" y=\"" << px(sy(t) + 4) << "\" text-anchor=\"end\">" << num(t)
       << "</text>\n";
  }
  for (std::size_t i = 0; i < plot.values.size(); ++i) {
    const double v = std::isfinite(plot.values[i]) ? plot.values[i] : 0.0;
    const double x = f.left + bw * static_cast<double>(i);
    os << "<rect x=\"" << px(x + 0.1 * bw) << "\" y=\"" << px(sy(v)) << "\" width=\"" << px(0.8 * bw)
       << "\" height=\"" << px(f.top + f.plot_h() - sy(v)) << "\" fill=\"" << kPalette[0] << "\"/>\n";
    if (i < plot.labels.size() && (n <= 30 || i % (n / 15 + 1) == 0)) {
      os << "<text x=\"" << px(x + bw / 2) << "\" y=\"" << px(f.top + f.plot_h() + 16)
         << "\" text-anchor=\"middle\">" << escape(plot.labels[i]) << "</text>\n";
    }
  }
  os << "<rect x=\"" << px(f.left) << "\" y=\"" << px(f.top) << "\" width=\"" << px(f.plot_w()) << "\" height=\""
     << px(f.plot_h()) << "\" fill=\"none\" stroke=\"black\"/>\n</svg>\n";
  return os.str();
}

std::string render_svg(const HeatmapPlot& plot, int width, int height) {
  Frame f;
  f.width = width;
  f.height = height;
  f.right = 90;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : plot.values) {
    for (double v : row) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi <= lo) hi = lo + 1;
  // Blue (low) to yellow (high).
  auto color = [&](double v) {
    const double t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
    const int r = static_cast<int>(40 + 215 * t);
    const int g = static_cast<int>(60 + 170 * t);
    const int b = static_cast<int>(160 - 120 * t);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };

  std::ostringstream os;
  open_doc(os, f, plot.title, plot.x_label, plot.y_label);
  const std::size_t rows = plot.values.size();
  const std::size_t cols = rows ? plot.values.front().size() : 0;
  const double cw = cols ? f.plot_w() / static_cast<double>(cols) : 0.0;
  const double ch = rows ? f.plot_h() / static_cast<double>(rows) : 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = f.top + f.plot_h() - ch * static_cast<double>(r + 1);
    for (std::size_t c = 0; c < cols && c < plot.values[r].size(); ++c) {
      const double v = plot.values[r][c];
      const double x = f.left + cw * static_cast<double>(c);
      os << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(cw) << "\" height=\"" << px(ch)
         << "\" fill=\"" << (std::isfinite(v) ? color(v) : std::string("#eee")) << "\"/>\n";
      os << "<text x=\"" << px(x + cw / 2) << "\" y=\"" << px(y + ch / 2 + 4) << "\" text-anchor=\"middle\">"
         << num(v) << "</text>\n";
    }
    if (r < plot.y_ticks.size()) {
      os << "<text x=\"" << px(f.left - 6) << "\" y=\"" << px(y + ch / 2 + 4) << "\" text-anchor=\"end\">"
         << escape(plot.y_ticks[r]) << "</text>\n";
    }
  }
  for (std::size_t c = 0; c < cols && c < plot.x_ticks.size(); ++c) {
    os << "<text x=\"" << px(f.left + cw * (static_cast<double>(c) + 0.5)) << "\" y=\""
       << px(f.top + f.plot_h() + 16) << "\" text-anchor=\"middle\">" << escape(plot.x_ticks[c]) << "</text>\n";
  }
  const double bx = f.left + f.plot_w() + 20;
  for (int i = 0; i < 20; ++i) {
    const double t = (i + 0.5) / 20.0;
    os << "<rect x=\"" << px(bx) << "\" y=\"" << px(f.top + f.plot_h() * (1.0 - (i + 1) / 20.0)) << "\" width=\"16\""
       << " height=\"" << px(f.plot_h() / 20.0 + 0.5) << "\" fill=\"" << color(lo + t * (hi - lo)) << "\"/>\n";
  }
  os << "<text x=\"" << px(bx + 20) << "\" y=\"" << px(f.top + 10) << "\">" << num(hi) << "</text>\n";
  os << "<text x=\"" << px(bx + 20) << "\" y=\"" << px(f.top + f.plot_h()) << "\">" << num(lo) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace radcal::sim
