#include "mfvar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mfvar {

namespace {

constexpr double kPanelW = 260.0;
constexpr double kPanelH = 180.0;
constexpr double kMargin = 36.0;
constexpr double kGap = 18.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Scale {
  double x0, x1, y0, y1;  // data range
  double px, py, pw, ph;  // pixel box

  double X(double x) const {
    return px + (x - x0) / (x1 - x0 + 1e-300) * pw;
  }
  double Y(double y) const {
    return py + ph - (y - y0) / (y1 - y0 + 1e-300) * ph;
  }
};

void polyline(std::ofstream& out, const Scale& s,
              const std::vector<double>& x, const std::vector<double>& y,
              const char* style) {
  out << "<polyline fill=\"none\" " << style << " points=\"";
  for (size_t i = 0; i < x.size(); ++i)
    out << num(s.X(x[i])) << "," << num(s.Y(y[i])) << " ";
  out << "\"/>\n";
}

}  // namespace

void write_small_multiples(const std::filesystem::path& path,
                           const std::vector<SvgPanel>& panels, int columns) {
  if (panels.empty())
    throw std::invalid_argument("write_small_multiples: no panels");
  columns = std::max(1, std::min<int>(columns, static_cast<int>(panels.size())));
  int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
  double width = columns * (kPanelW + kGap) + kMargin;
  double height = rows * (kPanelH + kGap) + kMargin;

  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_small_multiples: cannot write " +
                             path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" font-family=\"sans-serif\">\n";

  for (size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    int col = static_cast<int>(p) % columns;
    int row = static_cast<int>(p) / columns;
    Scale s;
    s.px = kMargin + col * (kPanelW + kGap);
    s.py = kMargin / 2 + row * (kPanelH + kGap) + 16.0;
    s.pw = kPanelW;
    s.ph = kPanelH - 28.0;

    s.x0 = *std::min_element(panel.x.begin(), panel.x.end());
    s.x1 = *std::max_element(panel.x.begin(), panel.x.end());
    double lo = 0.0, hi = 0.0;
    auto fold = [&](const std::vector<double>& v) {
      for (double y : v) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    };
    fold(panel.lo);
    fold(panel.hi);
    fold(panel.median);
    if (!panel.second.empty()) fold(panel.second);
    double pad = 0.05 * (hi - lo + 1e-12);
    s.y0 = lo - pad;
    s.y1 = hi + pad;

    out << "<text x=\"" << num(s.px + s.pw / 2) << "\" y=\"" << num(s.py - 4)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << panel.title
        << "</text>\n";
    out << "<rect x=\"" << num(s.px) << "\" y=\"" << num(s.py) << "\" width=\""
        << num(s.pw) << "\" height=\"" << num(s.ph)
        << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"0.6\"/>\n";

    // credible band
    out << "<polygon fill=\"#b0c4de\" fill-opacity=\"0.55\" stroke=\"none\" "
           "points=\"";
    for (size_t i = 0; i < panel.x.size(); ++i)
      out << num(s.X(panel.x[i])) << "," << num(s.Y(panel.hi[i])) << " ";
    for (size_t i = panel.x.size(); i-- > 0;)
      out << num(s.X(panel.x[i])) << "," << num(s.Y(panel.lo[i])) << " ";
    out << "\"/>\n";

    // zero line
    if (s.y0 < 0.0 && s.y1 > 0.0)
      out << "<line x1=\"" << num(s.px) << "\" y1=\"" << num(s.Y(0.0))
          << "\" x2=\"" << num(s.px + s.pw) << "\" y2=\"" << num(s.Y(0.0))
          << "\" stroke=\"red\" stroke-width=\"0.8\"/>\n";

    polyline(out, s, panel.x, panel.median,
             "stroke=\"#1a1a1a\" stroke-width=\"1.4\"");
    if (!panel.second.empty())
      polyline(out, s, panel.x, panel.second,
               "stroke=\"#444\" stroke-width=\"1.1\" stroke-dasharray=\"5,3\"");

    out << "<text x=\"" << num(s.px) << "\" y=\"" << num(s.py + s.ph + 12)
        << "\" font-size=\"9\">" << num(s.x0) << "</text>\n";
    out << "<text x=\"" << num(s.px + s.pw) << "\" y=\""
        << num(s.py + s.ph + 12) << "\" text-anchor=\"end\" font-size=\"9\">"
        << num(s.x1) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace mfvar
