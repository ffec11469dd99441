#include "ionsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ionsim::svg {

namespace {

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double pix_lo, double pix_hi) const {
    double t;
    if (log) {
      t = (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    } else {
      t = (v - lo) / (hi - lo);
    }
    return pix_lo + t * (pix_hi - pix_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) {
        const double v = std::pow(10.0, e);
        if (v >= lo * 0.999 && v <= hi * 1.001) out.push_back(v);
      }
      if (out.size() < 2) out = {lo, hi};
    } else {
      const double span = hi - lo;
      const double raw = span / 5.0;
      const double mag = std::pow(10.0, std::floor(std::log10(raw)));
      double step = mag;
      for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
          step = m * mag;
          break;
        }
      }
      for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
        out.push_back(v);
      }
    }
    return out;
  }
};

std::string fmt_tick(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

}  // namespace

std::string render_chart(const std::vector<Series>& series, const ChartOptions& opt) {
  Axis ax{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
          opt.log_x};
  Axis ay{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
          opt.log_y};
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_x && !(s.x[i] > 0)) continue;
      if (opt.log_y && !(s.y[i] > 0)) continue;
      ax.lo = std::min(ax.lo, s.x[i]);
      ax.hi = std::max(ax.hi, s.x[i]);
      ay.lo = std::min(ay.lo, s.y[i]);
      ay.hi = std::max(ay.hi, s.y[i]);
    }
  }
  if (!(ax.lo < ax.hi)) ax.hi = ax.lo + 1.0;
  if (!(ay.lo < ay.hi)) ay.hi = ay.lo + (ay.lo == 0 ? 1.0 : std::abs(ay.lo) * 0.1);
  if (!opt.log_y) {
    const double pad = 0.06 * (ay.hi - ay.lo);
    ay.lo -= pad;
    ay.hi += pad;
  } else {
    ay.lo /= 1.5;
    ay.hi *= 1.5;
  }

  const double ml = 70, mr = 20, mt = 36, mb = 50;
  const double x0 = ml, x1 = opt.width - mr;
  const double y0 = opt.height - mb, y1 = mt;  // svg y grows downward

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
      << "\" height=\"" << opt.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << (opt.width / 2) << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"14\">" << opt.title << "</text>\n";

  for (double t : ax.ticks()) {
    const double px = ax.map(t, x0, x1);
    out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\""
        << y1 << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << (y0 + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt_tick(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double py = ay.map(t, y0, y1);
    out << "<line x1=\"" << x0 << "\" y1=\"" << py << "\" x2=\"" << x1 << "\" y2=\""
        << py << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << (x0 - 6) << "\" y=\"" << (py + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt_tick(t) << "</text>\n";
  }
  out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << (x1 - x0)
      << "\" height=\"" << (y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (0.5 * (x0 + x1)) << "\" y=\"" << (opt.height - 12)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << opt.x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << (0.5 * (y0 + y1))
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (0.5 * (y0 + y1)) << ")\">" << opt.y_label << "</text>\n";

  for (const auto& s : series) {
    std::ostringstream pts;
    bool any = false;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_x && !(s.x[i] > 0)) continue;
      if (opt.log_y && !(s.y[i] > 0)) continue;
      pts << ax.map(s.x[i], x0, x1) << "," << ay.map(s.y[i], y0, y1) << " ";
      any = true;
    }
    if (!any) continue;
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
      if (s.dashed) out << " stroke-dasharray=\"6 4\"";
      out << " points=\"" << pts.str() << "\"/>\n";
    }
    if (s.markers) {
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (opt.log_x && !(s.x[i] > 0)) continue;
        if (opt.log_y && !(s.y[i] > 0)) continue;
        out << "<circle cx=\"" << ax.map(s.x[i], x0, x1) << "\" cy=\""
            << ay.map(s.y[i], y0, y1) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
      }
    }
  }

  double ly = y1 + 14;
  for (const auto& s : series) {
    out << "<line x1=\"" << (x1 - 150) << "\" y1=\"" << ly << "\" x2=\"" << (x1 - 126)
        << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "<text x=\"" << (x1 - 120) << "\" y=\"" << (ly + 3)
        << "\" font-size=\"10\">" << s.label << "</text>\n";
    ly += 14;
  }
  out << "</svg>\n";
  return out.str();
}

void write_chart(const std::string& path, const std::vector<Series>& series,
                 const ChartOptions& opt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << render_chart(series, opt);
}

}  // namespace ionsim::svg
