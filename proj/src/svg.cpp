#include "hub/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hub::svg {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#3465a4", "#e07b18", "#2e8b57", "#c03030",
                          "#7d4bb5", "#6b6b6b", "#0f8b8d", "#b5379b"};
constexpr int kPaletteSize = 8;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

void open_chart(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\""
     << " font-size=\"15\" font-weight=\"bold\">" << title << "</text>\n";
}

void axes(std::ostringstream& os, const Range& y, const std::string& x_label,
          const std::string& y_label, double x_lo, double x_hi) {
  const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
     << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double fy = y.lo + (y.hi - y.lo) * tick / 4.0;
    const double py = y0 - (y0 - y1) * tick / 4.0;
    os << "<text x=\"" << x0 - 6 << "\" y=\"" << num(py + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(fy)
       << "</text>\n"
       << "<line x1=\"" << x0 << "\" y1=\"" << num(py) << "\" x2=\"" << x1 << "\" y2=\"" << num(py)
       << "\" stroke=\"#dddddd\"/>\n";
    const double fx = x_lo + (x_hi - x_lo) * tick / 4.0;
    const double px = x0 + (x1 - x0) * tick / 4.0;
    os << "<text x=\"" << num(px) << "\" y=\"" << y0 + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(fx)
       << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
     << "</text>\n"
     << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\""
     << " font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " << (y0 + y1) / 2
     << ")\">" << y_label << "</text>\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  Range y;
  std::size_t n = 1;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) y.add(v);
  }
  y.pad();

  std::ostringstream os;
  open_chart(os, title);
  axes(os, y, x_label, y_label, 0.0, static_cast<double>(n - 1));

  const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    std::ostringstream points;
    bool open = false;
    for (std::size_t i = 0; i < series[si].values.size(); ++i) {
      const double v = series[si].values[i];
      if (!std::isfinite(v)) {
        if (open) os << "<polyline fill=\"none\" stroke=\"" << color
                     << "\" stroke-width=\"1.5\" points=\"" << points.str() << "\"/>\n";
        points.str("");
        open = false;
        continue;
      }
      const double px =
          x0 + (x1 - x0) * (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0);
      const double py = y0 - (y0 - y1) * (v - y.lo) / (y.hi - y.lo);
      points << num(px) << "," << num(py) << " ";
      open = true;
    }
    if (open)
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
         << points.str() << "\"/>\n";
    // legend
    const int ly = kMarginTop + 16 * static_cast<int>(si);
    os << "<line x1=\"" << x1 - 150 << "\" y1=\"" << ly << "\" x2=\"" << x1 - 128 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << x1 - 122 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[si].label << "</text>\n";
  }
  os << "</svg>\n";
  write_file(path, os.str());
}

void write_box_chart(const std::string& path, const std::string& title,
                     const std::string& y_label, const std::vector<Box>& boxes) {
  Range y;
  for (const auto& b : boxes) {
    y.add(b.lo);
    y.add(b.hi);
  }
  y.pad();

  std::ostringstream os;
  open_chart(os, title);
  axes(os, y, "", y_label, 0.0, static_cast<double>(boxes.size()));

  const int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  auto py = [&](double v) { return y0 - (y0 - y1) * (v - y.lo) / (y.hi - y.lo); };
  const double slot = static_cast<double>(x1 - x0) / static_cast<double>(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& b = boxes[i];
    const char* color = kPalette[i % kPaletteSize];
    const double cx = x0 + slot * (static_cast<double>(i) + 0.5);
    const double half = std::min(28.0, slot * 0.3);
    if (!std::isfinite(b.median)) continue;
    os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(py(b.lo)) << "\" x2=\"" << num(cx)
       << "\" y2=\"" << num(py(b.hi)) << "\" stroke=\"" << color << "\"/>\n"
       << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(py(b.q75)) << "\" width=\""
       << num(2 * half) << "\" height=\"" << num(py(b.q25) - py(b.q75)) << "\" fill=\"" << color
       << "\" fill-opacity=\"0.35\" stroke=\"" << color << "\"/>\n"
       << "<line x1=\"" << num(cx - half) << "\" y1=\"" << num(py(b.median)) << "\" x2=\""
       << num(cx + half) << "\" y2=\"" << num(py(b.median)) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << num(cx) << "\" y=\"" << y0 + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << b.label
       << "</text>\n";
  }
  os << "</svg>\n";
  write_file(path, os.str());
}

}  // namespace hub::svg
