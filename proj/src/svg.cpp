#include "ii/svg.hpp"

#include <cstdio>

#include "ii/error.hpp"

namespace ii {

namespace {

// fixed-format numbers keep the output byte-deterministic
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

constexpr double kSize = 440.0;     // canvas
constexpr double kMargin = 60.0;    // around the unit square
constexpr double kSquare = kSize - 2.0 * kMargin;

double px(double v) { return kMargin + v * kSquare; }
double py(double v) { return kSize - kMargin - v * kSquare; }

}  // namespace

std::string emit_svg(const std::vector<SvgPoint>& points) {
  if (points.empty()) throw Error("no points to plot");
  for (const auto& p : points) {
    if (p.x < 0.0 || p.x > 2.0 || p.y < 0.0 || p.y > 2.0) {
      throw Error("plane point outside [0, 2]");
    }
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kSize) +
         "\" height=\"" + fmt(kSize) + "\" viewBox=\"0 0 " + fmt(kSize) + " " +
         fmt(kSize) + "\">\n";
  out += "<rect x=\"" + fmt(px(0)) + "\" y=\"" + fmt(py(1)) + "\" width=\"" +
         fmt(kSquare) + "\" height=\"" + fmt(kSquare) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  // diagonal reference line
  out += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" +
         fmt(px(1)) + "\" y2=\"" + fmt(py(1)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  out += "<text x=\"" + fmt(kSize / 2.0) + "\" y=\"" + fmt(kSize - 14.0) +
         "\" text-anchor=\"middle\" font-size=\"14\">&#916;(A&#8594;B)</text>\n";
  out += "<text x=\"16\" y=\"" + fmt(kSize / 2.0) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 " +
         fmt(kSize / 2.0) + ")\">&#916;(B&#8594;A)</text>\n";
  for (int tick = 0; tick <= 2; ++tick) {
    const double v = 0.5 * tick;
    out += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(kSize - kMargin + 18.0) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + fmt(v) + "</text>\n";
    out += "<text x=\"" + fmt(kMargin - 10.0) + "\" y=\"" + fmt(py(v) + 4.0) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fmt(v) + "</text>\n";
  }
  for (const auto& p : points) {
    out += "<circle cx=\"" + fmt(px(p.x)) + "\" cy=\"" + fmt(py(p.y)) +
           "\" r=\"5\" fill=\"steelblue\"/>\n";
    if (!p.label.empty()) {
      out += "<text x=\"" + fmt(px(p.x) + 8.0) + "\" y=\"" + fmt(py(p.y) - 8.0) +
             "\" font-size=\"11\">" + p.label + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace ii
